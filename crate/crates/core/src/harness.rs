//! Exhaustive (or sampled) enumeration of small abstract cluster pictures and
//! the cross-validation of every exact identity the library relies on.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::basis::{
    basis_sequence, basis_sequence_with, expected_gamma, gamma_counts, objective, BasisResult,
    TieBreak,
};
use crate::error::{Error, Result};
use crate::lambda::{kausz_lambda8, lambda8};
use crate::notation::{parse_picture, print_picture};
use crate::picture::{ClusterPicture, Shape};
use crate::transforms::{apply, predicted_lambda8_change, TransformSpec};

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub max_roots: usize,
    pub rel_depths: Vec<i64>,
    pub top_depths: Vec<i64>,
    pub vcfs: Vec<i64>,
    /// Number of pictures to draw uniformly instead of enumerating everything.
    pub sample: Option<usize>,
    pub seed: u64,
    /// Above this many pictures the enumeration is sampled down to `cap`.
    pub cap: usize,
}

impl Default for EnumSpec {
    fn default() -> Self {
        EnumSpec {
            max_roots: 8,
            rel_depths: vec![1, 2, 3],
            top_depths: vec![0, 1],
            vcfs: vec![0, 2],
            sample: None,
            seed: 0,
            cap: DEFAULT_CAP,
        }
    }
}

impl EnumSpec {
    fn validate(&self) -> Result<()> {
        if self.max_roots < 5 {
            return Err(Error::Input(format!(
                "max_roots = {} must be at least 5",
                self.max_roots
            )));
        }
        if self.rel_depths.is_empty() || self.rel_depths.iter().any(|&d| d <= 0) {
            return Err(Error::Input("relative depths must be positive".into()));
        }
        if self.top_depths.is_empty() || self.top_depths.iter().any(|&d| d < 0) {
            return Err(Error::Input("top depths must be non-negative".into()));
        }
        if self.vcfs.is_empty() || self.vcfs.iter().any(|&v| v < 0 || v % 2 != 0) {
            return Err(Error::Input(
                "v(c_f) values must be non-negative and even".into(),
            ));
        }
        Ok(())
    }
}

/// A decorated subtree below the top: a root, or a cluster with its relative
/// depth.
#[derive(Debug)]
enum Sub {
    Leaf,
    Cluster { delta: i64, children: Vec<Arc<Sub>> },
}

fn sub_to_shape(sub: &Sub, parent_depth: i64, next_leaf: &mut usize) -> Shape {
    match sub {
        Sub::Leaf => {
            *next_leaf += 1;
            Shape::Leaf(*next_leaf - 1)
        }
        Sub::Cluster { delta, children } => {
            let depth = parent_depth + delta;
            Shape::Cluster {
                depth: Rational::from(depth),
                children: children
                    .iter()
                    .map(|c| sub_to_shape(c, depth, next_leaf))
                    .collect(),
            }
        }
    }
}

/// All multisets of ≥ 2 catalog entries whose sizes add up to `n`.
fn child_multisets(n: usize, catalog: &[Vec<Arc<Sub>>]) -> Vec<Vec<Arc<Sub>>> {
    fn rec(
        remaining: usize,
        max_size: usize,
        min_idx: usize,
        catalog: &[Vec<Arc<Sub>>],
        cur: &mut Vec<Arc<Sub>>,
        out: &mut Vec<Vec<Arc<Sub>>>,
    ) {
        if remaining == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for size in (1..=remaining.min(max_size)).rev() {
            let start = if size == max_size { min_idx } else { 0 };
            for idx in start..catalog[size].len() {
                cur.push(catalog[size][idx].clone());
                rec(remaining - size, size, idx, catalog, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, n - 1, 0, catalog, &mut Vec::new(), &mut out);
    out
}

struct Enumeration {
    /// Per root count, the children lists of `R`.
    tops: Vec<(usize, Vec<Vec<Arc<Sub>>>)>,
    top_depths: Vec<i64>,
    vcfs: Vec<i64>,
}

impl Enumeration {
    fn new(spec: &EnumSpec) -> Self {
        let mut catalog: Vec<Vec<Arc<Sub>>> = vec![Vec::new(), vec![Arc::new(Sub::Leaf)]];
        for k in 2..spec.max_roots {
            let mut entries = Vec::new();
            for children in child_multisets(k, &catalog) {
                for &delta in &spec.rel_depths {
                    entries.push(Arc::new(Sub::Cluster {
                        delta,
                        children: children.clone(),
                    }));
                }
            }
            catalog.push(entries);
        }
        let tops = (5..=spec.max_roots)
            .map(|n| (n, child_multisets(n, &catalog)))
            .collect();
        Enumeration {
            tops,
            top_depths: spec.top_depths.clone(),
            vcfs: spec.vcfs.clone(),
        }
    }

    fn len(&self) -> usize {
        self.tops.iter().map(|(_, t)| t.len()).sum::<usize>() * self.grid()
    }

    fn grid(&self) -> usize {
        self.top_depths.len() * self.vcfs.len()
    }

    /// The `index`-th picture of the enumeration order.
    fn get(&self, mut index: usize) -> ClusterPicture {
        let grid = self.grid();
        for (_, tops) in &self.tops {
            if index < tops.len() * grid {
                let children = &tops[index / grid];
                let d_r = self.top_depths[index % grid / self.vcfs.len()];
                let vcf = self.vcfs[index % self.vcfs.len()];
                let mut next = 0;
                let shape = Shape::Cluster {
                    depth: Rational::from(d_r),
                    children: children
                        .iter()
                        .map(|c| sub_to_shape(c, d_r, &mut next))
                        .collect(),
                };
                return ClusterPicture::from_shape(shape, Rational::from(vcf), None, None)
                    .expect("enumerated shapes are well formed");
            }
            index -= tops.len() * grid;
        }
        panic!("index out of range")
    }
}

/// Number of pictures an exhaustive run over `spec` would visit.
pub fn count_pictures(spec: &EnumSpec) -> Result<usize> {
    spec.validate()?;
    Ok(Enumeration::new(spec).len())
}

/// All pictures of the grid, or a uniform sample when `spec.sample` is set or
/// the grid exceeds `spec.cap`. Pictures are duplicate-free.
pub fn enumerate_pictures(spec: &EnumSpec) -> Result<Vec<ClusterPicture>> {
    let mut out = Vec::new();
    for_each_picture(spec, |p| out.push(p))?;
    Ok(out)
}

fn for_each_picture(spec: &EnumSpec, mut f: impl FnMut(ClusterPicture)) -> Result<()> {
    spec.validate()?;
    let en = Enumeration::new(spec);
    let total = en.len();
    let k = match spec.sample {
        Some(k) => Some(k),
        None if total > spec.cap => Some(spec.cap),
        None => None,
    };
    match k {
        Some(k) if k < total => {
            // reservoir sampling over indices, visited in enumeration order
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut chosen: Vec<usize> = (0..k).collect();
            for i in k..total {
                let j = rng.random_range(0..=i);
                if j < k {
                    chosen[j] = i;
                }
            }
            chosen.sort_unstable();
            chosen.into_iter().for_each(|i| f(en.get(i)));
        }
        _ => (0..total).for_each(|i| f(en.get(i))),
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub picture: String,
    pub identity: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub pictures_checked: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failure counts per identity name.
    pub fn by_identity(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for f in &self.failures {
            *m.entry(f.identity.as_str()).or_insert(0) += 1;
        }
        m
    }
}

struct Checker<'a> {
    text: &'a str,
    failures: Vec<Failure>,
}

impl Checker<'_> {
    fn eq<T: PartialEq + ToString>(&mut self, identity: &str, expected: T, got: T) {
        if expected != got {
            self.fail(identity, expected.to_string(), got.to_string());
        }
    }

    fn fail(&mut self, identity: &str, expected: String, got: String) {
        self.failures.push(Failure {
            picture: self.text.to_string(),
            identity: identity.to_string(),
            expected,
            got,
        });
    }
}

const TIE_SEEDS: [u64; 2] = [1, 2];

/// Runs every identity on `p` and on each applicable transform of `p`.
/// Failures are returned, never raised.
pub fn cross_validate(p: &ClusterPicture) -> Vec<Failure> {
    let text = print_picture(p);
    let mut c = Checker {
        text: &text,
        failures: Vec::new(),
    };

    for s in p.proper_clusters() {
        match (p.nu(s), p.nu_direct(s)) {
            (Ok(a), Ok(b)) => c.eq("nu = nu_direct", a, b),
            (a, b) => c.fail("nu = nu_direct", format!("{a:?}"), format!("{b:?}")),
        }
        for r in 0..p.num_roots() {
            let m = p.meet(p.leaf(r), s);
            let path: Rational = p
                .ancestors(m)
                .filter(|&a| a != p.top())
                .map(|a| p.rel_depth(a).expect("non-top"))
                .sum();
            c.eq(
                "d(r^S) = d_R + sum of relative depths",
                p.depth(m).clone(),
                p.top_depth() + path,
            );
        }
    }

    match parse_picture(&text, p.vcf().clone()) {
        Ok(q) => {
            if &q != p {
                c.fail("parse(print(P)) = P", text.clone(), print_picture(&q));
            }
            c.eq(
                "print(parse(T)) idempotent",
                text.clone(),
                print_picture(&q),
            );
        }
        Err(e) => c.fail("parse(print(P)) = P", text.clone(), e.to_string()),
    }

    let l8 = match lambda8(p) {
        Ok(v) => v,
        Err(e) => {
            c.fail("lambda8 defined", "value".into(), e.to_string());
            return c.failures;
        }
    };

    match basis_sequence(p) {
        Ok(b) => check_basis(&mut c, p, &b, &l8),
        Err(e) => c.fail("basis defined", "sequence".into(), e.to_string()),
    }
    for seed in TIE_SEEDS {
        match basis_sequence_with(p, TieBreak::Seeded(seed)) {
            Ok(b) => {
                c.eq(
                    "8 sum e = lambda8 (shuffled ties)",
                    l8.clone(),
                    b.exponent_sum() * 8,
                );
                let gamma = gamma_counts(p, &b);
                for (s, got) in gamma {
                    c.eq("gamma law (shuffled ties)", expected_gamma(p, s), got);
                }
            }
            Err(e) => c.fail(
                "basis defined (shuffled ties)",
                "sequence".into(),
                e.to_string(),
            ),
        }
    }

    if p.vcf().is_zero() && p.top_depth().is_zero() && p.num_roots().is_multiple_of(2) {
        match kausz_lambda8(p) {
            Ok(k) => c.eq("kausz_lambda8 = lambda8", l8.clone(), k),
            Err(e) => c.fail("kausz_lambda8 = lambda8", l8.to_string(), e.to_string()),
        }
    }

    let mut specs = vec![
        TransformSpec::Deepen(1),
        TransformSpec::Deepen(-1),
        TransformSpec::ScaleLeading(1),
        TransformSpec::ScaleLeading(-1),
    ];
    if p.num_roots() % 2 == 1 && p.top_depth().is_integer() {
        specs.push(TransformSpec::AddRoot);
    }
    if p.num_roots().is_multiple_of(2) {
        for (k, &child) in p.node(p.top()).children().iter().enumerate() {
            if !p.node(child).is_proper() {
                continue;
            }
            let delta = p.rel_depth(child).expect("non-top").to_i64().unwrap_or(1);
            for t in [1, -1, delta] {
                specs.push(TransformSpec::Redistribute {
                    path: k.to_string(),
                    t,
                });
            }
        }
    }
    for spec in specs {
        let law = match spec {
            TransformSpec::Deepen(_) => "deepen law",
            TransformSpec::AddRoot => "add-root law",
            TransformSpec::Redistribute { .. } => "redistribute law",
            TransformSpec::ScaleLeading(_) => "scale-leading law",
            _ => unreachable!("only picture-level transforms are enumerated"),
        };
        let q = match apply(p, &spec) {
            Ok(q) => q,
            // a redistribution that would need a negative relative depth
            Err(Error::InvalidTransform(_))
                if matches!(spec, TransformSpec::Redistribute { .. }) =>
            {
                continue
            }
            Err(e) => {
                c.fail(law, spec.to_string(), e.to_string());
                continue;
            }
        };
        let predicted = predicted_lambda8_change(p, &spec).expect("valid spec");
        match lambda8(&q) {
            Ok(after) => c.eq(law, predicted, after - &l8),
            Err(e) => c.fail(law, predicted.to_string(), e.to_string()),
        }
    }
    c.failures
}

fn check_basis(c: &mut Checker<'_>, p: &ClusterPicture, b: &BasisResult, l8: &Rational) {
    c.eq("8 sum e = lambda8", l8.clone(), b.exponent_sum() * 8);
    for (s, got) in gamma_counts(p, b) {
        c.eq("gamma law", expected_gamma(p, s), got);
    }
    let clusters: Vec<_> = p.proper_clusters().collect();
    let chosen = b.clusters();
    for (i, step) in b.steps.iter().enumerate() {
        let e = &step.exponent;
        let row: Vec<Rational> = clusters
            .iter()
            .map(|&s| objective(p, s, &chosen[..i]))
            .collect();
        if row != b.trace[i] {
            c.fail(
                "trace = objective",
                format!("{row:?}"),
                format!("{:?}", b.trace[i]),
            );
        }
        let k = clusters
            .iter()
            .position(|&s| s == step.cluster)
            .expect("proper");
        c.eq("e_i attained by s_i", e.clone(), row[k].clone());
        for (&s, v) in clusters.iter().zip(&row) {
            if v > e {
                c.fail(
                    "maximality",
                    format!("e_{i} = {e} >= {v} ({})", p.label(s)),
                    "smaller".into(),
                );
            }
            if v == e && s != step.cluster && p.contains(s, step.cluster) {
                c.fail(
                    "nested tie rule",
                    format!("inclusion-maximal choice at step {i}"),
                    p.label(step.cluster).to_string(),
                );
            }
        }
        if i > 0 && !p.top_depth().is_negative() && e > &b.steps[i - 1].exponent {
            c.fail(
                "monotone exponents",
                format!("e_{i} <= {}", b.steps[i - 1].exponent),
                e.to_string(),
            );
        }
    }
}

/// Enumerates per `spec` and cross-validates every picture on `jobs` threads.
pub fn run_check(spec: &EnumSpec, jobs: usize) -> Result<CheckReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Input(e.to_string()))?;
    let mut report = CheckReport::default();
    let mut batch = Vec::with_capacity(BATCH);
    let flush = |batch: &mut Vec<ClusterPicture>, report: &mut CheckReport| {
        report.pictures_checked += batch.len();
        let failures: Vec<Failure> =
            pool.install(|| batch.par_iter().flat_map_iter(cross_validate).collect());
        report.failures.extend(failures);
        batch.clear();
    };
    for_each_picture(spec, |p| {
        batch.push(p);
        if batch.len() == BATCH {
            flush(&mut batch, &mut report);
        }
    })?;
    flush(&mut batch, &mut report);
    report.failures.sort();
    Ok(report)
}

const BATCH: usize = 4096;
