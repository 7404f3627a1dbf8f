//! JSON renderings of results shared by the command line and the C ABI.
//! Every number is an exact decimal string.

use serde_json::{json, Value};

use crate::basis::BasisResult;
use crate::error::{Error, Result};
use crate::lambda::{disc, disc_valuation_from_roots, lambda};
use crate::notation::print_picture;
use crate::picture::{validate_integrality, ClusterPicture};
use crate::transforms::{TransformOutcome, TransformSpec};

pub fn cluster_json(p: &ClusterPicture) -> Result<Value> {
    let clusters: Vec<Value> = p
        .proper_clusters()
        .map(|s| {
            let nu = p.nu(s).expect("proper");
            json!({
                "label": p.label(s),
                "cluster": p.subtree_text(s),
                "size": p.node(s).size(),
                "depth": p.depth(s),
                "rel_depth": p.rel_depth(s).ok(),
                "nu": nu,
                "principal": p.is_principal(s),
            })
        })
        .collect();
    let report = validate_integrality(p);
    Ok(json!({
        "picture": print_picture(p),
        "vcf": p.vcf(),
        "genus": p.genus(),
        "clusters": clusters,
        "integrality": {
            "depths_integral": report.depths_integral,
            "principal_nu_even": report.principal_nu_even,
            "integral_equation": report.integral_equation,
            "lambda_integral": report.lambda_integral,
            "issues": report.issues,
        },
    }))
}

pub fn basis_json(p: &ClusterPicture, b: &BasisResult, trace: bool) -> Value {
    let steps: Vec<Value> = b
        .steps
        .iter()
        .map(|s| {
            json!({
                "i": s.index,
                "cluster": p.subtree_text(s.cluster),
                "label": p.label(s.cluster),
                "e": s.exponent,
                "centre": s.centre,
            })
        })
        .collect();
    let mut v = json!({
        "genus": p.genus(),
        "steps": steps,
        "mu": b.differentials.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "sum_e": b.exponent_sum(),
        "warnings": b.warnings,
    });
    if trace {
        let labels: Vec<&str> = p.proper_clusters().map(|s| p.label(s)).collect();
        v["trace"] = json!({ "clusters": labels, "rows": b.trace });
    }
    v
}

pub fn lambda_json(p: &ClusterPicture) -> Result<Value> {
    let l = lambda(p)?;
    let d = disc(p)?;
    Ok(json!({
        "eight_v_lambda": l.eight_v_lambda,
        "v_lambda": l.v_lambda,
        "integral": l.integral,
        "v_disc": d.v_disc,
        "hyperdisc_order": d.hyperdisc_order,
    }))
}

pub fn disc_json(p: &ClusterPicture) -> Result<Value> {
    let (roots, prime) = p.roots().zip(p.prime()).ok_or(Error::MissingRoots)?;
    let d = disc(p)?;
    // the leading coefficient only enters through its valuation
    let k = p
        .vcf()
        .to_i64()
        .ok_or_else(|| Error::Precondition(format!("v(c_f) = {} is not an integer", p.vcf())))?;
    let c_f = prime.as_rational().pow(k.unsigned_abs() as u32);
    let c_f = if k < 0 { c_f.recip()? } else { c_f };
    let from_roots = disc_valuation_from_roots(roots, &c_f, prime)?;
    Ok(json!({
        "v_disc": d.v_disc,
        "v_disc_from_roots": from_roots,
        "hyperdisc_order": d.hyperdisc_order,
    }))
}

pub fn transform_json(before: &ClusterPicture, op: &TransformSpec, t: &TransformOutcome) -> Value {
    let mut v = json!({
        "op": op.to_string(),
        "before": print_picture(before),
        "vcf": t.picture.vcf(),
        "picture": print_picture(&t.picture),
        "predicted_lambda8_change": t.predicted_lambda8_change,
        "actual_lambda8_change": t.actual_lambda8_change,
        "consistent": t.consistent(),
    });
    if let Some((before, after)) = &t.hyperdisc_order {
        v["hyperdisc_order"] = json!({ "before": before, "after": after });
    }
    if let Some(roots) = t.picture.roots() {
        v["roots"] = json!(roots);
    }
    v
}
