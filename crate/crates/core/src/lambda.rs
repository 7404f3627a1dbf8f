//! Valuation of `λ_C`, discriminant valuations and the order of the
//! hyperelliptic discriminant.
//!
//! `p` is always odd, so `v(2) = 0` and the `2^{4g}` factor of the
//! discriminant never contributes.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{OddPrime, Rational};
use crate::error::{Error, Result};
use crate::picture::ClusterPicture;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaResult {
    pub eight_v_lambda: Rational,
    pub v_lambda: Rational,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscResult {
    pub v_disc: Rational,
    pub hyperdisc_order: Rational,
}

pub(crate) fn require_genus(p: &ClusterPicture) -> Result<usize> {
    match p.genus() {
        g if g >= 2 => Ok(g),
        _ => Err(Error::GenusTooSmall(p.num_roots())),
    }
}

/// Weight of a non-top cluster of size `n` in `8 v(λ)`.
fn cluster_weight(n: usize) -> i64 {
    let n = n as i64;
    if n % 2 == 0 {
        (n - 2) * n
    } else {
        (n - 1) * (n - 1)
    }
}

/// Sum over non-top proper clusters of `δ_S` times the size weight.
fn relative_depth_sum(p: &ClusterPicture) -> Rational {
    p.proper_clusters()
        .skip(1)
        .map(|s| p.rel_depth(s).expect("non-top") * cluster_weight(p.node(s).size()))
        .sum()
}

/// Closed formula for `8 v(λ_C)` without the genus check.
pub(crate) fn lambda8_formula(p: &ClusterPicture) -> Rational {
    let g = p.genus() as i64;
    // |R| = 2g+2 gives (|R|-2)|R|, |R| = 2g+1 gives (|R|-1)^2: the same weight
    p.vcf() * (4 * g) + relative_depth_sum(p) + p.top_depth() * cluster_weight(p.num_roots())
}

/// `8 v(λ_C)`.
pub fn lambda8(p: &ClusterPicture) -> Result<Rational> {
    require_genus(p)?;
    Ok(lambda8_formula(p))
}

pub fn lambda(p: &ClusterPicture) -> Result<LambdaResult> {
    let eight_v_lambda = lambda8(p)?;
    let v_lambda = eight_v_lambda.checked_div(&Rational::from(8))?;
    let integral = v_lambda.is_integer();
    Ok(LambdaResult {
        eight_v_lambda,
        v_lambda,
        integral,
    })
}

/// The reduced formula valid when `v(c_f) = 0`, `d_R = 0` and `|R| = 2g+2`.
///
/// For root-backed pictures the roots must also be integral with at least
/// three distinct residues mod p.
pub fn kausz_lambda8(p: &ClusterPicture) -> Result<Rational> {
    require_genus(p)?;
    if !p.vcf().is_zero() {
        return Err(Error::Precondition("v(c_f) must be 0".into()));
    }
    if !p.top_depth().is_zero() {
        return Err(Error::Precondition("d_R must be 0".into()));
    }
    if !p.num_roots().is_multiple_of(2) {
        return Err(Error::Precondition("|R| must be 2g+2".into()));
    }
    if p.proper_clusters().any(|s| !p.depth(s).is_integer()) {
        return Err(Error::Precondition("all depths must be integers".into()));
    }
    if let (Some(roots), Some(prime)) = (p.roots(), p.prime()) {
        let m = prime.as_bigint();
        if roots.iter().any(|r| (r.denom() % &m).is_zero()) {
            return Err(Error::Precondition("roots must be p-integral".into()));
        }
        let mut residues: Vec<_> = roots.iter().map(|r| residue(r, prime)).collect();
        residues.sort();
        residues.dedup();
        if residues.len() < 3 {
            return Err(Error::Precondition(
                "roots need at least three distinct residues".into(),
            ));
        }
    }
    Ok(relative_depth_sum(p))
}

/// Residue mod p of a p-integral rational.
fn residue(r: &Rational, p: OddPrime) -> num_bigint::BigInt {
    use num_integer::Integer;
    let m = p.as_bigint();
    let inv = r.denom().modinv(&m).expect("p-integral");
    (r.numer() * inv).mod_floor(&m)
}

/// `v(Δ) = (4g+2) v(c_f) + d_R|R|(|R|−1) + Σ_{S≠R} δ_S |S|(|S|−1)`.
pub fn disc_valuation_from_picture(p: &ClusterPicture) -> Result<Rational> {
    let g = require_genus(p)? as i64;
    let pairs = |n: usize| (n * (n - 1)) as i64;
    let inner: Rational = p
        .proper_clusters()
        .skip(1)
        .map(|s| p.rel_depth(s).expect("non-top") * pairs(p.node(s).size()))
        .sum();
    Ok(p.vcf() * (4 * g + 2) + p.top_depth() * pairs(p.num_roots()) + inner)
}

/// `v(Δ) = (4g+2) v(c_f) + 2 Σ_{i<j} v(r_i − r_j)` directly from the roots.
pub fn disc_valuation_from_roots(
    roots: &[Rational],
    leading_coeff: &Rational,
    p: OddPrime,
) -> Result<Rational> {
    let n = roots.len();
    if n < 5 {
        return Err(Error::GenusTooSmall(n));
    }
    let g = ((n - 1) / 2) as i64;
    let vcf = p
        .valuation(leading_coeff)
        .finite()
        .cloned()
        .ok_or(Error::ZeroLeadingCoefficient)?;
    let mut sum = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let v = p.valuation(&(&roots[i] - &roots[j]));
            sum += v.finite().ok_or(Error::DuplicateRoot(i, j))?;
        }
    }
    Ok(vcf * (4 * g + 2) + sum * 2)
}

/// `ord(Λ) = g v(Δ) − (8g+4) v(λ_C)`.
pub fn hyperdisc_order(p: &ClusterPicture) -> Result<Rational> {
    let g = require_genus(p)? as i64;
    let v_disc = disc_valuation_from_picture(p)?;
    let v_lambda = lambda8(p)?.checked_div(&Rational::from(8))?;
    Ok(v_disc * g - v_lambda * (8 * g + 4))
}

pub fn disc(p: &ClusterPicture) -> Result<DiscResult> {
    Ok(DiscResult {
        v_disc: disc_valuation_from_picture(p)?,
        hyperdisc_order: hyperdisc_order(p)?,
    })
}
