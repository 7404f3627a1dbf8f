//! Greedy choice of clusters `s_0, …, s_{g−1}` and the exponents `e_i` of the
//! basis differentials `μ_i = π^{e_i} Π_{j<i} (x − z_{s_j}) dx/2y`.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lambda::require_genus;
use crate::picture::{validate_integrality, Centre, ClusterId, ClusterPicture};

/// How to choose between incomparable clusters attaining the same maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Larger cluster first, then smaller minimal root index.
    #[default]
    Canonical,
    /// Uniformly random among the inclusion-maximal maximisers.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisStep {
    pub index: usize,
    pub cluster: ClusterId,
    pub exponent: Rational,
    pub centre: Centre,
}

/// `π^{exponent} · Π (x − centre) · dx/2y`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    pub exponent: Rational,
    pub centres: Vec<Centre>,
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(self.centres.len() + 2);
        if !self.exponent.is_zero() {
            if self.exponent.is_integer() && !self.exponent.is_negative() {
                parts.push(format!("p^{}", self.exponent));
            } else {
                parts.push(format!("p^({})", self.exponent));
            }
        }
        for c in &self.centres {
            parts.push(match c {
                Centre::Value(v) if v.is_negative() => format!("(x+{})", -v),
                c => format!("(x-{c})"),
            });
        }
        parts.push("dx/2y".to_string());
        f.write_str(&parts.join(" * "))
    }
}

impl Differential {
    /// Coefficients of `Π (x − centre)`, constant term first. `None` when a
    /// centre is only known symbolically.
    pub fn polynomial(&self) -> Option<Vec<Rational>> {
        let mut coeffs = vec![Rational::one()];
        for c in &self.centres {
            let Centre::Value(z) = c else { return None };
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= &(a * z);
            }
            coeffs = next;
        }
        Some(coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisResult {
    pub steps: Vec<BasisStep>,
    pub differentials: Vec<Differential>,
    /// `trace[i][k]` is the step-`i` objective of the `k`-th proper cluster
    /// (canonical preorder).
    pub trace: Vec<Vec<Rational>>,
    pub warnings: Vec<String>,
}

impl BasisResult {
    pub fn exponent_sum(&self) -> Rational {
        self.steps.iter().map(|s| s.exponent.clone()).sum()
    }

    pub fn clusters(&self) -> Vec<ClusterId> {
        self.steps.iter().map(|s| s.cluster).collect()
    }
}

/// `ν_S/2 − Σ_j d_{s_j∧S} − d_S` over the already chosen clusters.
pub fn objective(p: &ClusterPicture, s: ClusterId, chosen: &[ClusterId]) -> Rational {
    let nu = p.nu(s).expect("proper cluster");
    let half = nu.checked_div(&Rational::from(2)).expect("nonzero");
    let meets: Rational = chosen.iter().map(|&c| p.depth(p.meet(c, s)).clone()).sum();
    half - meets - p.depth(s)
}

pub fn basis_sequence(p: &ClusterPicture) -> Result<BasisResult> {
    basis_sequence_with(p, TieBreak::Canonical)
}

pub fn basis_sequence_with(p: &ClusterPicture, tie: TieBreak) -> Result<BasisResult> {
    let g = require_genus(p)?;
    if p.top_depth().is_negative() || p.vcf().is_negative() {
        return Err(Error::NonIntegralEquation(format!(
            "d_R = {} and v(c_f) = {} must be non-negative",
            p.top_depth(),
            p.vcf()
        )));
    }
    let mut warnings = validate_integrality(p).issues;
    let clusters: Vec<ClusterId> = p.proper_clusters().collect();
    let mut rng = match tie {
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::Canonical => None,
    };

    let mut chosen: Vec<ClusterId> = Vec::with_capacity(g);
    let mut steps = Vec::with_capacity(g);
    let mut differentials = Vec::with_capacity(g);
    let mut trace = Vec::with_capacity(g);
    // step-0 objectives, then each pick subtracts d_{pick∧S}
    let mut values: Vec<Rational> = clusters.iter().map(|&s| objective(p, s, &[])).collect();
    for i in 0..g {
        let best = values.iter().max().expect("R is proper").clone();
        let maximisers: Vec<ClusterId> = clusters
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v == best)
            .map(|(&s, _)| s)
            .collect();
        let mut candidates: Vec<ClusterId> = maximisers
            .iter()
            .copied()
            .filter(|&s| !maximisers.iter().any(|&t| t != s && p.contains(t, s)))
            .collect();
        let pick = match rng.as_mut() {
            Some(rng) => *candidates.choose(rng).expect("nonempty"),
            None => {
                candidates
                    .sort_by_key(|&s| (std::cmp::Reverse(p.node(s).size()), p.node(s).leaves()[0]));
                candidates[0]
            }
        };
        if !best.is_integer() {
            warnings.push(format!("e_{i} = {best} is not an integer"));
        }
        differentials.push(Differential {
            exponent: best.clone(),
            centres: chosen.iter().map(|&c| p.centre(c)).collect(),
        });
        steps.push(BasisStep {
            index: i,
            cluster: pick,
            exponent: best,
            centre: p.centre(pick),
        });
        trace.push(values.clone());
        for (v, &s) in values.iter_mut().zip(&clusters) {
            *v -= p.depth(p.meet(pick, s));
        }
        chosen.push(pick);
    }
    Ok(BasisResult {
        steps,
        differentials,
        trace,
        warnings,
    })
}

/// `γ(s) = #{i : s_i ⊆ s}` for every proper cluster.
pub fn gamma_counts(p: &ClusterPicture, basis: &BasisResult) -> BTreeMap<ClusterId, usize> {
    p.proper_clusters()
        .map(|s| {
            (
                s,
                basis
                    .steps
                    .iter()
                    .filter(|st| p.contains(s, st.cluster))
                    .count(),
            )
        })
        .collect()
}

/// The value `⌊(|s|−1)/2⌋` that every `γ(s)` must equal.
pub fn expected_gamma(p: &ClusterPicture, s: ClusterId) -> usize {
    (p.node(s).size() - 1) / 2
}

/// Negated lower bound on the order of vanishing of `Π_{j<i}(x − z_{s_j}) dx/2y`
/// along the component of a principal cluster.
pub fn vanishing_bound(
    p: &ClusterPicture,
    s: ClusterId,
    i: usize,
    basis: &BasisResult,
) -> Result<Rational> {
    if !p.is_principal(s) {
        return Err(Error::NotPrincipal(p.label(s).to_string()));
    }
    if i >= basis.steps.len() {
        return Err(Error::Precondition(format!("step {i} out of range")));
    }
    Ok(objective(p, s, &basis.clusters()[..i]))
}
