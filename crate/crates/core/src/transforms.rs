//! Cluster-picture manipulations and equation changes, each paired with the
//! change in `8 v(λ)` it is expected to cause.

use std::fmt;
use std::str::FromStr;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lambda::{hyperdisc_order, lambda8};
use crate::pexpr::PExpr;
use crate::picture::{ClusterId, ClusterPicture, Shape};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformSpec {
    Deepen(i64),
    AddRoot,
    /// Child of `R` given as a `/`-separated canonical child-index path.
    Redistribute {
        path: String,
        t: i64,
    },
    ScaleLeading(i64),
    Rescale {
        t: i64,
        s: i64,
    },
    Shift(PExpr),
}

impl FromStr for TransformSpec {
    type Err = Error;

    /// `deepen:t | add-root | redistribute:<path>:t | scale-leading:m |
    /// rescale:t,s | shift:z`
    fn from_str(src: &str) -> Result<Self> {
        let bad = |why: &str| Error::Input(format!("bad transform {src:?}: {why}"));
        let int = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| bad("expected an integer"))
        };
        let (kind, args) = src.split_once(':').unwrap_or((src, ""));
        Ok(match kind.trim() {
            "deepen" => TransformSpec::Deepen(int(args)?),
            "add-root" if args.is_empty() => TransformSpec::AddRoot,
            "redistribute" => {
                let (path, t) = args
                    .rsplit_once(':')
                    .ok_or_else(|| bad("expected <path>:t"))?;
                TransformSpec::Redistribute {
                    path: path.trim().to_string(),
                    t: int(t)?,
                }
            }
            "scale-leading" => TransformSpec::ScaleLeading(int(args)?),
            "rescale" => {
                let (t, s) = args.split_once(',').ok_or_else(|| bad("expected t,s"))?;
                TransformSpec::Rescale {
                    t: int(t)?,
                    s: int(s)?,
                }
            }
            "shift" => TransformSpec::Shift(PExpr::parse(args)?),
            _ => return Err(bad("unknown operation")),
        })
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::Deepen(t) => write!(f, "deepen:{t}"),
            TransformSpec::AddRoot => f.write_str("add-root"),
            TransformSpec::Redistribute { path, t } => write!(f, "redistribute:{path}:{t}"),
            TransformSpec::ScaleLeading(m) => write!(f, "scale-leading:{m}"),
            TransformSpec::Rescale { t, s } => write!(f, "rescale:{t},{s}"),
            TransformSpec::Shift(z) => write!(f, "shift:{z}"),
        }
    }
}

fn shift_depths(shape: Shape, by: &Rational) -> Shape {
    match shape {
        Shape::Leaf(i) => Shape::Leaf(i),
        Shape::Cluster { depth, children } => Shape::Cluster {
            depth: depth + by,
            children: children.into_iter().map(|c| shift_depths(c, by)).collect(),
        },
    }
}

fn top_parts(p: &ClusterPicture) -> (Rational, Vec<Shape>) {
    match p.to_shape() {
        Shape::Cluster { depth, children } => (depth, children),
        Shape::Leaf(_) => unreachable!("top is a cluster"),
    }
}

fn abstract_picture(shape: Shape, vcf: Rational) -> Result<ClusterPicture> {
    ClusterPicture::from_shape(shape, vcf, None, None)
}

/// Adds `t` to every absolute depth.
pub fn deepen(p: &ClusterPicture, t: i64) -> ClusterPicture {
    let shape = shift_depths(p.to_shape(), &Rational::from(t));
    abstract_picture(shape, p.vcf().clone()).expect("relative depths unchanged")
}

/// Attaches one more root directly to `R`; needs `|R|` odd and `d_R ∈ ℤ`.
pub fn add_root(p: &ClusterPicture) -> Result<ClusterPicture> {
    if p.num_roots().is_multiple_of(2) {
        return Err(Error::InvalidTransform(
            "add-root needs an odd number of roots".into(),
        ));
    }
    if !p.top_depth().is_integer() {
        return Err(Error::InvalidTransform(
            "add-root needs an integral d_R".into(),
        ));
    }
    let (depth, mut children) = top_parts(p);
    children.push(Shape::Leaf(p.num_roots()));
    abstract_picture(Shape::Cluster { depth, children }, p.vcf().clone())
}

/// Lowers the depth of the child `s` of `R` (and everything inside it) by `t`
/// and raises `R ∖ s` by `t`, creating `R ∖ s` as a cluster when needed.
/// A cluster whose relative depth reaches 0 is dissolved into its parent.
pub fn redistribute(p: &ClusterPicture, s: ClusterId, t: i64) -> Result<ClusterPicture> {
    if !p.num_roots().is_multiple_of(2) {
        return Err(Error::InvalidTransform(
            "redistribute needs an even number of roots".into(),
        ));
    }
    let top = p.top();
    if s == top {
        return Err(Error::InvalidTransform(
            "cannot redistribute R against itself".into(),
        ));
    }
    let k = p
        .node(top)
        .children()
        .iter()
        .position(|&c| c == s)
        .ok_or_else(|| Error::InvalidTransform(format!("{} is not a child of R", p.label(s))))?;
    if !p.node(s).is_proper() {
        return Err(Error::InvalidTransform(
            "redistribute needs a proper cluster".into(),
        ));
    }
    if t == 0 {
        return Ok(p.clone());
    }
    let (d_r, mut children) = top_parts(p);
    let s_shape = children.remove(k);
    let by = Rational::from(t);

    let mut out = Vec::new();
    lower_or_dissolve(shift_depths(s_shape, &-&by), &d_r, &mut out)?;
    match children.len() {
        1 if matches!(children[0], Shape::Leaf(_)) => out.push(children.pop().expect("one child")),
        1 => {
            let other = children.pop().expect("one child");
            lower_or_dissolve(shift_depths(other, &by), &d_r, &mut out)?;
        }
        _ if t > 0 => out.push(Shape::Cluster {
            depth: &d_r + &by,
            children: children.into_iter().map(|c| shift_depths(c, &by)).collect(),
        }),
        _ => {
            return Err(Error::InvalidTransform(format!(
                "R \\ {} would get negative relative depth {t}",
                p.label(s)
            )))
        }
    }
    abstract_picture(
        Shape::Cluster {
            depth: d_r,
            children: out,
        },
        p.vcf().clone(),
    )
}

fn lower_or_dissolve(shape: Shape, parent_depth: &Rational, out: &mut Vec<Shape>) -> Result<()> {
    match shape {
        Shape::Cluster { depth, children } if &depth == parent_depth => {
            out.extend(children);
            Ok(())
        }
        Shape::Cluster { depth, .. } if &depth < parent_depth => Err(Error::InvalidTransform(
            format!("relative depth would become {}", depth - parent_depth),
        )),
        other => {
            out.push(other);
            Ok(())
        }
    }
}

/// Multiplies `c_f` by `π^{2m}`.
pub fn scale_leading(p: &ClusterPicture, m: i64) -> ClusterPicture {
    p.with_vcf(p.vcf() + Rational::from(2 * m))
}

/// Substitutes `x = π^t x'`, `y = π^s y'`: roots become `r/π^t` and
/// `v(c_f)` becomes `v(c_f) + t|R| − 2s`.
pub fn rescale_equation(p: &ClusterPicture, t: i64, s: i64) -> Result<ClusterPicture> {
    let (roots, prime) = p.roots().zip(p.prime()).ok_or(Error::MissingRoots)?;
    let scale = prime.as_rational().pow(t.unsigned_abs() as u32);
    let roots = roots
        .iter()
        .map(|r| {
            if t >= 0 {
                r.checked_div(&scale)
            } else {
                Ok(r * &scale)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let vcf = p.vcf() + Rational::from(t * p.num_roots() as i64 - 2 * s);
    ClusterPicture::from_roots(roots, vcf, prime)
}

/// Substitutes `x ↦ x − z`: every root moves by `z`.
pub fn shift(p: &ClusterPicture, z: &Rational) -> Result<ClusterPicture> {
    let (roots, prime) = p.roots().zip(p.prime()).ok_or(Error::MissingRoots)?;
    let roots = roots.iter().map(|r| r + z).collect();
    ClusterPicture::from_roots(roots, p.vcf().clone(), prime)
}

pub fn apply(p: &ClusterPicture, spec: &TransformSpec) -> Result<ClusterPicture> {
    match spec {
        TransformSpec::Deepen(t) => Ok(deepen(p, *t)),
        TransformSpec::AddRoot => add_root(p),
        TransformSpec::Redistribute { path, t } => redistribute(p, p.resolve_path(path)?, *t),
        TransformSpec::ScaleLeading(m) => Ok(scale_leading(p, *m)),
        TransformSpec::Rescale { t, s } => rescale_equation(p, *t, *s),
        TransformSpec::Shift(z) => {
            let prime = p.prime().ok_or(Error::MissingRoots)?;
            shift(p, &z.eval(prime)?)
        }
    }
}

/// Weight of `R` in `8 v(λ)`: `(|R|−2)|R|` for even `|R|`, `(|R|−1)²` for odd.
fn top_weight(p: &ClusterPicture) -> i64 {
    let n = p.num_roots() as i64;
    if n % 2 == 0 {
        (n - 2) * n
    } else {
        (n - 1) * (n - 1)
    }
}

/// Expected `lambda8(apply(p, spec)) − lambda8(p)`.
pub fn predicted_lambda8_change(p: &ClusterPicture, spec: &TransformSpec) -> Result<Rational> {
    let n = p.num_roots() as i64;
    let g = p.genus() as i64;
    Ok(match spec {
        TransformSpec::Deepen(t) => Rational::from(t * top_weight(p)),
        TransformSpec::AddRoot => p.top_depth() * (2 * (n - 1)),
        TransformSpec::Redistribute { path, t } => {
            let s = p.node(p.resolve_path(path)?).size() as i64;
            Rational::from(t * (n - 2) * (n - 2 * s))
        }
        TransformSpec::ScaleLeading(m) => Rational::from(8 * g * m),
        TransformSpec::Rescale { t, s } => {
            Rational::from(4 * g * (t * n - 2 * s) - t * top_weight(p))
        }
        TransformSpec::Shift(_) => Rational::zero(),
    })
}

/// Result of applying a transform together with its consistency data.
#[derive(Clone, Debug)]
pub struct TransformOutcome {
    pub picture: ClusterPicture,
    pub predicted_lambda8_change: Rational,
    pub actual_lambda8_change: Rational,
    /// `(before, after)` for the equation changes, which must leave it fixed.
    pub hyperdisc_order: Option<(Rational, Rational)>,
}

impl TransformOutcome {
    pub fn consistent(&self) -> bool {
        self.predicted_lambda8_change == self.actual_lambda8_change
            && self.hyperdisc_order.as_ref().is_none_or(|(a, b)| a == b)
    }
}

pub fn transform(p: &ClusterPicture, spec: &TransformSpec) -> Result<TransformOutcome> {
    let picture = apply(p, spec)?;
    let actual_lambda8_change = lambda8(&picture)? - lambda8(p)?;
    let predicted_lambda8_change = predicted_lambda8_change(p, spec)?;
    let hyperdisc = match spec {
        TransformSpec::Rescale { .. } | TransformSpec::Shift(_) => {
            Some((hyperdisc_order(p)?, hyperdisc_order(&picture)?))
        }
        _ => None,
    };
    Ok(TransformOutcome {
        picture,
        predicted_lambda8_change,
        actual_lambda8_change,
        hyperdisc_order: hyperdisc,
    })
}
