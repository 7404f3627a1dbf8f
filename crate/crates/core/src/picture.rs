//! Cluster pictures: the tree of clusters of the roots of `f`, their depths
//! and the derived invariants used everywhere else.
//!
//! Nodes live in an arena stored in canonical preorder: node 0 is the top
//! cluster `R`, every subtree is a contiguous index range, and the children
//! of each node are sorted by (size descending, relative depth descending,
//! canonical text ascending). Singleton nodes are the roots themselves.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{OddPrime, Rational, Valuation};
use crate::error::{Error, Result};
use crate::notation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ClusterId(pub(crate) usize);

impl ClusterId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A cluster picture before canonicalization. Depths are absolute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf(usize),
    Cluster {
        depth: Rational,
        children: Vec<Shape>,
    },
}

impl Shape {
    pub fn size(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::Cluster { children, .. } => children.iter().map(Shape::size).sum(),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Shape::Leaf(i) => out.push(*i),
            Shape::Cluster { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterNode {
    parent: Option<ClusterId>,
    children: Vec<ClusterId>,
    leaves: Vec<usize>,
    depth: Option<Rational>,
    end: usize,
}

impl ClusterNode {
    pub fn parent(&self) -> Option<ClusterId> {
        self.parent
    }

    pub fn children(&self) -> &[ClusterId] {
        &self.children
    }

    /// Root indices contained in this cluster, ascending.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn size(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_proper(&self) -> bool {
        self.leaves.len() >= 2
    }

    /// Absolute depth; `None` for singletons.
    pub fn depth(&self) -> Option<&Rational> {
        self.depth.as_ref()
    }
}

/// Centre of a cluster: a concrete root value, or a symbolic name when the
/// picture carries no root values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Centre {
    Value(Rational),
    Symbol(String),
}

impl fmt::Display for Centre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Centre::Value(v) => v.fmt(f),
            Centre::Symbol(s) => f.write_str(s),
        }
    }
}

impl Serialize for Centre {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPicture {
    nodes: Vec<ClusterNode>,
    leaf_node: Vec<ClusterId>,
    labels: Vec<String>,
    vcf: Rational,
    prime: Option<OddPrime>,
    roots: Option<Vec<Rational>>,
}

impl ClusterPicture {
    /// Builds a picture from an explicit tree. Abstract pictures (no root
    /// values) get their leaves renumbered in canonical order so that equal
    /// pictures compare equal.
    pub fn from_shape(
        shape: Shape,
        vcf: Rational,
        prime: Option<OddPrime>,
        roots: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let n = shape.size();
        if n < 2 || matches!(shape, Shape::Leaf(_)) {
            return Err(Error::Input(
                "a cluster picture needs a top cluster with at least two roots".into(),
            ));
        }
        let mut leaves = Vec::with_capacity(n);
        shape.collect_leaves(&mut leaves);
        leaves.sort_unstable();
        if leaves.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(Error::Input("leaf indices must be exactly 0..n".into()));
        }
        if let Some(r) = &roots {
            if r.len() != n {
                return Err(Error::Input(format!(
                    "{} root values for {n} leaves",
                    r.len()
                )));
            }
        }
        validate_shape(&shape, None)?;
        let (shape, _) = canonicalize(shape, None);

        let mut picture = ClusterPicture {
            nodes: Vec::new(),
            leaf_node: vec![ClusterId(0); n],
            labels: Vec::new(),
            vcf,
            prime,
            roots,
        };
        let renumber = picture.roots.is_none();
        let mut next_leaf = 0;
        picture.push(&shape, None, renumber, &mut next_leaf);
        picture.assign_labels();
        Ok(picture)
    }

    /// Tree-level construction from exact root values: accepts any number of
    /// distinct roots ≥ 2.
    pub fn from_roots(roots: Vec<Rational>, vcf: Rational, p: OddPrime) -> Result<Self> {
        if roots.len() < 2 {
            return Err(Error::Input("at least two roots are required".into()));
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[i] == roots[j] {
                    return Err(Error::DuplicateRoot(i, j));
                }
            }
        }
        let shape = cluster_roots(&roots, p);
        ClusterPicture::from_shape(shape, vcf, Some(p), Some(roots))
    }

    fn push(
        &mut self,
        shape: &Shape,
        parent: Option<ClusterId>,
        renumber: bool,
        next_leaf: &mut usize,
    ) -> ClusterId {
        let id = ClusterId(self.nodes.len());
        self.nodes.push(ClusterNode {
            parent,
            children: Vec::new(),
            leaves: Vec::new(),
            depth: None,
            end: 0,
        });
        match shape {
            Shape::Leaf(i) => {
                let leaf = if renumber {
                    *next_leaf += 1;
                    *next_leaf - 1
                } else {
                    *i
                };
                self.nodes[id.0].leaves.push(leaf);
                self.leaf_node[leaf] = id;
            }
            Shape::Cluster { depth, children } => {
                self.nodes[id.0].depth = Some(depth.clone());
                let mut ids = Vec::with_capacity(children.len());
                let mut leaves = Vec::new();
                for c in children {
                    let cid = self.push(c, Some(id), renumber, next_leaf);
                    leaves.extend_from_slice(&self.nodes[cid.0].leaves);
                    ids.push(cid);
                }
                leaves.sort_unstable();
                let node = &mut self.nodes[id.0];
                node.children = ids;
                node.leaves = leaves;
            }
        }
        self.nodes[id.0].end = self.nodes.len();
        id
    }

    fn assign_labels(&mut self) {
        let mut k = 0;
        self.labels = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                if i == 0 {
                    "R".to_string()
                } else if node.is_proper() {
                    k += 1;
                    format!("t{k}")
                } else {
                    format!("r{}", node.leaves[0])
                }
            })
            .collect();
    }

    /// The tree as a [`Shape`] with absolute depths and current leaf indices.
    pub fn to_shape(&self) -> Shape {
        self.shape_of(self.top())
    }

    pub fn shape_of(&self, id: ClusterId) -> Shape {
        let node = self.node(id);
        match &node.depth {
            None => Shape::Leaf(node.leaves[0]),
            Some(d) => Shape::Cluster {
                depth: d.clone(),
                children: node.children.iter().map(|&c| self.shape_of(c)).collect(),
            },
        }
    }

    pub fn top(&self) -> ClusterId {
        ClusterId(0)
    }

    pub fn node(&self, id: ClusterId) -> &ClusterNode {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (ClusterId, &ClusterNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (ClusterId(i), n))
    }

    /// Proper clusters in canonical preorder, starting with `R`.
    pub fn proper_clusters(&self) -> impl Iterator<Item = ClusterId> + '_ {
        self.nodes()
            .filter(|(_, n)| n.is_proper())
            .map(|(id, _)| id)
    }

    pub fn leaf(&self, root_index: usize) -> ClusterId {
        self.leaf_node[root_index]
    }

    pub fn num_roots(&self) -> usize {
        self.leaf_node.len()
    }

    pub fn genus(&self) -> usize {
        (self.num_roots() - 1) / 2
    }

    pub fn vcf(&self) -> &Rational {
        &self.vcf
    }

    pub fn prime(&self) -> Option<OddPrime> {
        self.prime
    }

    pub fn roots(&self) -> Option<&[Rational]> {
        self.roots.as_deref()
    }

    /// Same tree with another `v(c_f)`.
    pub fn with_vcf(&self, vcf: Rational) -> ClusterPicture {
        ClusterPicture {
            vcf,
            ..self.clone()
        }
    }

    /// Drops root values, keeping the tree; leaves are renumbered canonically.
    pub fn to_abstract(&self) -> ClusterPicture {
        ClusterPicture::from_shape(self.to_shape(), self.vcf.clone(), None, None)
            .expect("a valid picture stays valid without roots")
    }

    /// Short name: `R`, `t1`, `t2`, … in canonical preorder, `r<i>` for roots.
    pub fn label(&self, id: ClusterId) -> &str {
        &self.labels[id.0]
    }

    /// Absolute depth of a proper cluster.
    ///
    /// Panics on singletons, which have no depth.
    pub fn depth(&self, id: ClusterId) -> &Rational {
        self.nodes[id.0]
            .depth
            .as_ref()
            .expect("depth of a proper cluster")
    }

    pub fn top_depth(&self) -> &Rational {
        self.depth(self.top())
    }

    /// `δ_S = d_S − d_{parent(S)}`.
    pub fn rel_depth(&self, id: ClusterId) -> Result<Rational> {
        let node = self.node(id);
        let parent = node.parent.ok_or(Error::TopCluster)?;
        let d = node.depth.as_ref().ok_or_else(|| {
            Error::Precondition(format!("{} is not a proper cluster", self.label(id)))
        })?;
        Ok(d - self.depth(parent))
    }

    /// Whether `inner ⊆ outer`.
    pub fn contains(&self, outer: ClusterId, inner: ClusterId) -> bool {
        outer.0 <= inner.0 && inner.0 < self.nodes[outer.0].end
    }

    /// Smallest cluster containing both arguments.
    pub fn meet(&self, a: ClusterId, b: ClusterId) -> ClusterId {
        let mut a = a;
        while !self.contains(a, b) {
            a = self.nodes[a.0]
                .parent
                .expect("the top cluster contains everything");
        }
        a
    }

    /// Ancestors of `id` including itself, up to and including `R`.
    pub fn ancestors(&self, id: ClusterId) -> impl Iterator<Item = ClusterId> + '_ {
        std::iter::successors(Some(id), move |&c| self.nodes[c.0].parent)
    }

    /// `ν_S = v(c_f) + d_R|R| + Σ_{S ⊆ S' ≠ R} δ_{S'}|S'|`.
    pub fn nu(&self, id: ClusterId) -> Result<Rational> {
        self.require_proper(id)?;
        let top = self.top();
        let mut nu = &self.vcf + self.top_depth() * self.num_roots() as i64;
        for c in self.ancestors(id).filter(|&c| c != top) {
            nu += &(self.rel_depth(c)? * self.node(c).size() as i64);
        }
        Ok(nu)
    }

    /// `ν_S = v(c_f) + Σ_{r ∈ R} d_{r∧S}`, summed root by root.
    pub fn nu_direct(&self, id: ClusterId) -> Result<Rational> {
        self.require_proper(id)?;
        let mut nu = self.vcf.clone();
        for r in 0..self.num_roots() {
            nu += self.depth(self.meet(self.leaf(r), id));
        }
        Ok(nu)
    }

    /// Canonical centre: the smallest-index root of the cluster, or `z(<label>)`.
    pub fn centre(&self, id: ClusterId) -> Centre {
        match &self.roots {
            Some(roots) => Centre::Value(roots[self.node(id).leaves[0]].clone()),
            None => Centre::Symbol(format!("z({})", self.label(id))),
        }
    }

    pub fn is_principal(&self, id: ClusterId) -> bool {
        let node = self.node(id);
        if node.size() < 3 {
            return false;
        }
        if id == self.top() && node.size().is_multiple_of(2) && node.children.len() == 2 {
            return false;
        }
        let two_g = 2 * self.genus();
        !node.children.iter().any(|&c| self.node(c).size() == two_g)
    }

    /// Canonical text of the subtree at `id`. The subscript of `id` itself is
    /// its absolute depth when `id` is the top and its relative depth otherwise.
    pub fn subtree_text(&self, id: ClusterId) -> String {
        notation::render(
            &self.shape_of(id),
            self.node(id).parent.map(|p| self.depth(p)),
        )
    }

    /// Resolves a `/`-separated path of child indices starting at `R`.
    pub fn resolve_path(&self, path: &str) -> Result<ClusterId> {
        let mut id = self.top();
        for part in path.split('/').filter(|s| !s.is_empty()) {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad cluster path component {part:?}")))?;
            id =
                *self.node(id).children.get(k).ok_or_else(|| {
                    Error::Input(format!("cluster path {path:?} leaves the tree"))
                })?;
        }
        Ok(id)
    }

    fn require_proper(&self, id: ClusterId) -> Result<()> {
        if self.node(id).is_proper() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{} is not a proper cluster",
                self.label(id)
            )))
        }
    }
}

/// Builds the picture of `f = c_f Π (x − r)` from its roots; requires at least
/// five roots (genus ≥ 2).
pub fn build_picture_from_roots(
    roots: Vec<Rational>,
    leading_coeff: &Rational,
    p: OddPrime,
) -> Result<ClusterPicture> {
    if roots.len() < 5 {
        return Err(Error::GenusTooSmall(roots.len()));
    }
    let vcf = match p.valuation(leading_coeff) {
        Valuation::Finite(v) => v,
        Valuation::Infinity => return Err(Error::ZeroLeadingCoefficient),
    };
    ClusterPicture::from_roots(roots, vcf, p)
}

fn validate_shape(shape: &Shape, parent_depth: Option<&Rational>) -> Result<()> {
    if let Shape::Cluster { depth, children } = shape {
        if children.len() < 2 {
            return Err(Error::Input(
                "every cluster needs at least two children".into(),
            ));
        }
        if let Some(pd) = parent_depth {
            if depth <= pd {
                return Err(Error::Input(format!(
                    "child depth {depth} must exceed parent depth {pd}"
                )));
            }
        }
        for c in children {
            validate_shape(c, Some(depth))?;
        }
    }
    Ok(())
}

/// Sorts children canonically, bottom-up. Returns the rearranged shape and
/// its canonical text (relative subscript when `parent_depth` is given).
fn canonicalize(shape: Shape, parent_depth: Option<&Rational>) -> (Shape, String) {
    match shape {
        Shape::Leaf(i) => (Shape::Leaf(i), "*".to_string()),
        Shape::Cluster { depth, children } => {
            let mut keyed: Vec<(usize, Option<Rational>, String, Shape)> = children
                .into_iter()
                .map(|c| {
                    let size = c.size();
                    let rel = match &c {
                        Shape::Cluster { depth: cd, .. } => Some(cd - &depth),
                        Shape::Leaf(_) => None,
                    };
                    let (c, text) = canonicalize(c, Some(&depth));
                    (size, rel, text, c)
                })
                .collect();
            keyed.sort_by(|a, b| canonical_order((a.0, &a.1, &a.2), (b.0, &b.1, &b.2)));
            let sub = match parent_depth {
                Some(pd) => &depth - pd,
                None => depth.clone(),
            };
            let text = format!(
                "({})_{}",
                keyed
                    .iter()
                    .map(|k| k.2.as_str())
                    .collect::<Vec<_>>()
                    .join(" "),
                sub
            );
            let children = keyed.into_iter().map(|k| k.3).collect();
            (Shape::Cluster { depth, children }, text)
        }
    }
}

fn canonical_order(
    a: (usize, &Option<Rational>, &String),
    b: (usize, &Option<Rational>, &String),
) -> Ordering {
    b.0.cmp(&a.0)
        .then_with(|| b.1.cmp(a.1))
        .then_with(|| a.2.cmp(b.2))
}

/// Groups roots into clusters by merging at each pairwise valuation, from the
/// largest down. Every merge at threshold `d` yields a cluster of depth `d`.
fn cluster_roots(roots: &[Rational], p: OddPrime) -> Shape {
    let n = roots.len();
    let mut pairs: Vec<(Rational, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let v = p.valuation(&(&roots[i] - &roots[j]));
            let v = v.finite().expect("distinct roots").clone();
            pairs.push((v, i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0));

    let mut uf = UnionFind::new(n);
    let mut shapes: Vec<Option<Shape>> = (0..n).map(|i| Some(Shape::Leaf(i))).collect();
    let mut start = 0;
    while start < pairs.len() {
        let level = pairs[start].0.clone();
        let end = start + pairs[start..].iter().take_while(|e| e.0 == level).count();
        let mut touched = Vec::new();
        for &(_, i, j) in &pairs[start..end] {
            let (a, b) = (uf.find(i), uf.find(j));
            if a != b {
                touched.push(a);
                touched.push(b);
                uf.union(a, b);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut merged: HashMap<usize, Vec<Shape>> = HashMap::new();
        for old in touched {
            let rep = uf.find(old);
            merged
                .entry(rep)
                .or_default()
                .push(shapes[old].take().expect("component shape"));
        }
        for (rep, children) in merged {
            shapes[rep] = Some(Shape::Cluster {
                depth: level.clone(),
                children,
            });
        }
        start = end;
    }
    let rep = uf.find(0);
    shapes[rep].take().expect("single component")
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[b.max(a)] = a.min(b);
        }
    }
}

/// Necessary conditions for a semistable curve with an integral equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub depths_integral: bool,
    pub principal_nu_even: bool,
    pub integral_equation: bool,
    pub lambda_integral: bool,
    pub issues: Vec<String>,
}

impl IntegralityReport {
    pub fn passes(&self) -> bool {
        self.depths_integral
            && self.principal_nu_even
            && self.integral_equation
            && self.lambda_integral
    }
}

pub fn validate_integrality(p: &ClusterPicture) -> IntegralityReport {
    let mut issues = Vec::new();
    let mut depths_integral = true;
    let mut principal_nu_even = true;
    for id in p.proper_clusters() {
        let d = p.depth(id);
        if !d.is_integer() {
            depths_integral = false;
            issues.push(format!("depth of {} is {d}, not an integer", p.label(id)));
        }
        if p.is_principal(id) {
            let nu = p.nu(id).expect("proper");
            if !nu.is_even_integer() {
                principal_nu_even = false;
                issues.push(format!(
                    "nu of principal cluster {} is {nu}, not even",
                    p.label(id)
                ));
            }
        }
    }
    let integral_equation = !p.top_depth().is_negative() && !p.vcf().is_negative();
    if !integral_equation {
        issues.push(format!(
            "d_R = {} and v(c_f) = {} must be non-negative",
            p.top_depth(),
            p.vcf()
        ));
    }
    let eight = crate::lambda::lambda8_formula(p);
    let lambda_integral = eight
        .checked_div(&Rational::from(8))
        .is_ok_and(|v| v.is_integer());
    if !lambda_integral {
        issues.push(format!("8 v(lambda) = {eight} is not divisible by 8"));
    }
    IntegralityReport {
        depths_integral,
        principal_nu_even,
        integral_equation,
        lambda_integral,
        issues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_picture;
    use crate::pexpr::eval_p_expr;
    use std::collections::BTreeSet;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    pub(crate) fn example_roots(p: u64) -> Vec<Rational> {
        [
            "0", "p^6", "2*p^6", "p^4", "2*p^4", "3*p^4", "1", "1+p^8", "1+2*p^8", "1+3*p^8", "2",
            "3",
        ]
        .iter()
        .map(|s| eval_p_expr(s, p).unwrap())
        .collect()
    }

    fn example() -> ClusterPicture {
        let p = OddPrime::new(5).unwrap();
        build_picture_from_roots(example_roots(5), &Rational::one(), p).unwrap()
    }

    fn by_leaves(pic: &ClusterPicture, leaves: &[usize]) -> ClusterId {
        pic.proper_clusters()
            .find(|&c| pic.node(c).leaves() == leaves)
            .unwrap()
    }

    #[test]
    fn example_depths_relative_depths_nu() {
        let pic = example();
        let r = pic.top();
        let t1 = by_leaves(&pic, &[0, 1, 2, 3, 4, 5]);
        let t2 = by_leaves(&pic, &[0, 1, 2]);
        let t3 = by_leaves(&pic, &[6, 7, 8, 9]);
        assert_eq!(pic.proper_clusters().count(), 4);
        assert_eq!(
            [pic.depth(r), pic.depth(t1), pic.depth(t2), pic.depth(t3)],
            [&q("0"), &q("4"), &q("6"), &q("8")]
        );
        assert_eq!(pic.rel_depth(t1).unwrap(), q("4"));
        assert_eq!(pic.rel_depth(t2).unwrap(), q("2"));
        assert_eq!(pic.rel_depth(t3).unwrap(), q("8"));
        assert_eq!(pic.rel_depth(r), Err(Error::TopCluster));
        for (c, nu) in [(r, 0), (t1, 24), (t2, 30), (t3, 32)] {
            assert_eq!(pic.nu(c).unwrap(), Rational::from(nu));
            assert_eq!(pic.nu_direct(c).unwrap(), Rational::from(nu));
        }
        assert_eq!(
            [pic.label(t1), pic.label(t2), pic.label(t3)],
            ["t1", "t2", "t3"]
        );
        assert_eq!(pic.centre(t3), Centre::Value(q("1")));
        assert_eq!(pic.centre(t2), Centre::Value(q("0")));
        assert_eq!(pic.meet(t2, t3), r);
        assert_eq!(pic.meet(t2, t1), t1);
        assert_eq!(pic.meet(pic.leaf(7), t3), t3);
        assert!(pic.is_principal(t1));
        assert!(validate_integrality(&pic).passes());
    }

    #[test]
    fn all_unit_differences_give_one_cluster() {
        let roots = (0..6).map(Rational::from).collect();
        let pic =
            build_picture_from_roots(roots, &Rational::one(), OddPrime::new(7).unwrap()).unwrap();
        assert_eq!(pic.proper_clusters().count(), 1);
        assert_eq!(pic.top_depth(), &Rational::zero());
        assert_eq!(pic.nu(pic.top()).unwrap(), Rational::zero());
        assert!(validate_integrality(&pic).passes());
    }

    /// Oracle: pairwise valuation matrix and single-linkage grouping at every
    /// threshold, independent of the union-find construction.
    #[allow(clippy::needless_range_loop)]
    fn single_linkage(roots: &[Rational], p: OddPrime) -> BTreeSet<(Vec<usize>, Rational)> {
        let n = roots.len();
        let v = |i: usize, j: usize| {
            p.valuation(&(&roots[i] - &roots[j]))
                .finite()
                .unwrap()
                .clone()
        };
        let mut thresholds: Vec<Rational> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| v(i, j))
            .collect();
        thresholds.sort();
        thresholds.dedup();
        let mut out = BTreeSet::new();
        for t in thresholds {
            let mut seen = vec![false; n];
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut comp = vec![s];
                seen[s] = true;
                let mut k = 0;
                while k < comp.len() {
                    let a = comp[k];
                    for b in 0..n {
                        if !seen[b] && v(a, b) >= t {
                            seen[b] = true;
                            comp.push(b);
                        }
                    }
                    k += 1;
                }
                if comp.len() >= 2 {
                    comp.sort();
                    let d = comp
                        .iter()
                        .flat_map(|&a| comp.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
                        .map(|(a, b)| v(a, b))
                        .min()
                        .unwrap();
                    out.insert((comp, d));
                }
            }
        }
        out
    }

    fn clusters_of(pic: &ClusterPicture) -> BTreeSet<(Vec<usize>, Rational)> {
        pic.proper_clusters()
            .map(|c| (pic.node(c).leaves().to_vec(), pic.depth(c).clone()))
            .collect()
    }

    #[test]
    fn construction_matches_single_linkage() {
        let p5 = OddPrime::new(5).unwrap();
        let two_pairs: Vec<Rational> = ["0", "p", "1", "1+p", "2", "3"]
            .iter()
            .map(|s| eval_p_expr(s, 5).unwrap())
            .collect();
        let pic = ClusterPicture::from_roots(two_pairs.clone(), Rational::zero(), p5).unwrap();
        let expected = single_linkage(&two_pairs, p5);
        assert_eq!(clusters_of(&pic), expected);
        assert_eq!(pic.proper_clusters().count(), 3);
        assert_eq!(pic.node(pic.top()).children().len(), 4);
        for c in pic.proper_clusters().skip(1) {
            assert_eq!(pic.node(c).size(), 2);
            assert_eq!(pic.depth(c), &Rational::one());
        }
        assert_eq!(
            clusters_of(&example()),
            single_linkage(&example_roots(5), p5)
        );

        let p3 = OddPrime::new(3).unwrap();
        let odd: Vec<Rational> = ["1/3", "1/3 + 1/9", "5", "5 + 27", "5 + 54", "14", "-4"]
            .iter()
            .map(|s| eval_p_expr(s, 3).unwrap())
            .collect();
        let pic = ClusterPicture::from_roots(odd.clone(), Rational::from(-2), p3).unwrap();
        assert_eq!(clusters_of(&pic), single_linkage(&odd, p3));
        assert_eq!(pic.top_depth(), &Rational::from(-2));
    }

    #[test]
    fn rejects_bad_root_sets() {
        let p = OddPrime::new(5).unwrap();
        let dup = vec![q("0"), q("1"), q("2"), q("1"), q("3")];
        assert_eq!(
            build_picture_from_roots(dup, &q("1"), p),
            Err(Error::DuplicateRoot(1, 3))
        );
        let four = vec![q("0"), q("1"), q("2"), q("3")];
        assert_eq!(
            build_picture_from_roots(four.clone(), &q("1"), p),
            Err(Error::GenusTooSmall(4))
        );
        assert!(ClusterPicture::from_roots(four, Rational::zero(), p).is_ok());
        let five: Vec<Rational> = (0..5).map(Rational::from).collect();
        assert_eq!(
            build_picture_from_roots(five, &q("0"), p),
            Err(Error::ZeroLeadingCoefficient)
        );
        assert_eq!(
            build_picture_from_roots(example_roots(5), &q("50"), p)
                .unwrap()
                .vcf(),
            &q("2")
        );
    }

    #[test]
    fn principal_exceptions() {
        let pic = parse_picture("((* * *)_1 (* * *)_1)_0", Rational::zero()).unwrap();
        assert!(!pic.is_principal(pic.top()));
        let t1 = pic.resolve_path("0").unwrap();
        assert!(pic.is_principal(t1));
        let pic = parse_picture("((* *)_1 * * * *)_0", Rational::zero()).unwrap();
        assert!(!pic.is_principal(pic.resolve_path("0").unwrap()));
        assert!(pic.is_principal(pic.top()));
        // child of size 2g = 4 inside a 6-root picture
        let pic = parse_picture("((* * * *)_1 * *)_0", Rational::zero()).unwrap();
        assert!(!pic.is_principal(pic.top()));
        assert!(pic.is_principal(pic.resolve_path("0").unwrap()));
    }

    #[test]
    fn odd_nu_flagged() {
        let pic = parse_picture("((* * *)_1 * * *)_0", Rational::zero()).unwrap();
        let s = pic.resolve_path("0").unwrap();
        assert_eq!(pic.nu(s).unwrap(), Rational::from(3));
        let report = validate_integrality(&pic);
        assert!(!report.principal_nu_even);
        assert!(!report.lambda_integral);
        assert!(!report.passes());
        let single = parse_picture("(* * * * * *)_0", Rational::zero()).unwrap();
        assert!(validate_integrality(&single).passes());
        assert_eq!(single.centre(single.top()), Centre::Symbol("z(R)".into()));
        let abs =
            parse_picture("(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0", Rational::zero()).unwrap();
        assert_eq!(
            abs.centre(abs.resolve_path("0/0").unwrap()),
            Centre::Symbol("z(t2)".into())
        );
    }

    #[test]
    fn remark_path_sum_for_every_root_and_cluster() {
        let pic = example();
        for s in pic.proper_clusters() {
            for r in 0..pic.num_roots() {
                let m = pic.meet(pic.leaf(r), s);
                let via_path: Rational = pic
                    .ancestors(m)
                    .filter(|&c| c != pic.top())
                    .map(|c| pic.rel_depth(c).unwrap())
                    .sum();
                assert_eq!(pic.depth(m), &(pic.top_depth() + via_path));
            }
        }
    }

    #[test]
    fn rejects_malformed_shapes() {
        let leaf = |i| Shape::Leaf(i);
        let bad_depth = Shape::Cluster {
            depth: q("1"),
            children: vec![
                Shape::Cluster {
                    depth: q("1"),
                    children: vec![leaf(0), leaf(1)],
                },
                leaf(2),
            ],
        };
        assert!(ClusterPicture::from_shape(bad_depth, q("0"), None, None).is_err());
        let unary = Shape::Cluster {
            depth: q("0"),
            children: vec![Shape::Cluster {
                depth: q("1"),
                children: vec![leaf(0), leaf(1)],
            }],
        };
        assert!(ClusterPicture::from_shape(unary, q("0"), None, None).is_err());
        let gap = Shape::Cluster {
            depth: q("0"),
            children: vec![leaf(0), leaf(2)],
        };
        assert!(ClusterPicture::from_shape(gap, q("0"), None, None).is_err());
    }
}
