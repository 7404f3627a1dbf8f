//! Reading pictures from the three accepted input forms: roots JSON,
//! abstract-picture JSON, or bare picture notation.

use serde::Deserialize;
use serde_json::Value;

use crate::arith::{OddPrime, Rational};
use crate::error::{Error, Result};
use crate::notation::{parse_picture, picture_from_json};
use crate::pexpr::PExpr;
use crate::picture::{build_picture_from_roots, ClusterPicture};

/// `{"p": <int>, "leading_coeff": "<PExpr>", "roots": ["<PExpr>", ...]}`.
#[derive(Clone, Debug, Deserialize)]
pub struct RootsInput {
    #[serde(default)]
    pub p: Option<Value>,
    #[serde(default = "one")]
    pub leading_coeff: String,
    pub roots: Vec<String>,
}

fn one() -> String {
    "1".into()
}

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub p: Option<u64>,
    pub vcf: Option<Rational>,
}

fn json_prime(v: &Value) -> Result<OddPrime> {
    let n = match v {
        Value::Number(n) => n.as_i64().map(i128::from),
        Value::String(s) => s.trim().parse::<i128>().ok(),
        _ => None,
    };
    let n = n.ok_or_else(|| Error::Input(format!("\"p\" must be an integer, got {v}")))?;
    OddPrime::from_i128(n)
}

impl RootsInput {
    pub fn to_picture(&self, p_override: Option<u64>) -> Result<ClusterPicture> {
        let p = match (p_override, &self.p) {
            (Some(p), _) => OddPrime::new(p)?,
            (None, Some(v)) => json_prime(v)?,
            (None, None) => return Err(Error::Input("roots input needs \"p\" or --p".into())),
        };
        let eval = |src: &str| PExpr::parse(src)?.eval(p);
        let roots = self
            .roots
            .iter()
            .map(|r| eval(r))
            .collect::<Result<Vec<_>>>()?;
        build_picture_from_roots(roots, &eval(&self.leading_coeff)?, p)
    }
}

/// Reads any accepted form. `--vcf` applies to abstract pictures only: for
/// roots input the leading coefficient fixes `v(c_f)`.
pub fn load_picture(text: &str, ov: &Overrides) -> Result<ClusterPicture> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Input("empty input".into()));
    }
    if !trimmed.starts_with('{') {
        return parse_picture(trimmed, ov.vcf.clone().unwrap_or_default());
    }
    let value: Value = serde_json::from_str(trimmed)?;
    if value.get("roots").is_some() {
        if ov.vcf.is_some() {
            return Err(Error::Input(
                "--vcf cannot be combined with a roots input".into(),
            ));
        }
        let input: RootsInput = serde_json::from_value(value)?;
        return input.to_picture(ov.p);
    }
    match &ov.vcf {
        // an explicit flag wins over the document
        Some(vcf) => Ok(picture_from_json(&value, None)?.with_vcf(vcf.clone())),
        None => picture_from_json(&value, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::print_picture;

    const EXAMPLE_ROOTS: &str = r#"{"p": 5, "leading_coeff": "1",
        "roots": ["0", "p^6", "2*p^6", "p^4", "2*p^4", "3*p^4", "1", "1+p^8", "1+2*p^8", "1+3*p^8", "2", "3"]}"#;
    const EXAMPLE: &str = "(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0";

    #[test]
    fn all_forms_agree() {
        let roots = load_picture(EXAMPLE_ROOTS, &Overrides::default()).unwrap();
        assert!(roots.roots().is_some());
        let text = load_picture(EXAMPLE, &Overrides::default()).unwrap();
        let json = load_picture(
            &format!(r#"{{"vcf": "0", "picture": "{EXAMPLE}"}}"#),
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(roots.to_abstract(), text);
        assert_eq!(json, text);
        assert_eq!(print_picture(&roots), EXAMPLE);
    }

    #[test]
    fn overrides() {
        let ov = Overrides {
            p: None,
            vcf: Some(Rational::from(2)),
        };
        assert_eq!(
            load_picture(EXAMPLE, &ov).unwrap().vcf(),
            &Rational::from(2)
        );
        let json = format!(r#"{{"vcf": "4", "picture": "{EXAMPLE}"}}"#);
        assert_eq!(load_picture(&json, &ov).unwrap().vcf(), &Rational::from(2));
        assert_eq!(
            load_picture(&json, &Overrides::default()).unwrap().vcf(),
            &Rational::from(4)
        );
        assert!(load_picture(EXAMPLE_ROOTS, &ov).is_err());

        // --p changes the evaluation prime
        let at3 = load_picture(
            EXAMPLE_ROOTS,
            &Overrides {
                p: Some(3),
                vcf: None,
            },
        )
        .unwrap();
        assert_eq!(at3.prime().unwrap().get(), 3);
        let no_p = r#"{"roots": ["0", "1", "2", "3", "4"]}"#;
        assert!(matches!(
            load_picture(no_p, &Overrides::default()),
            Err(Error::Input(_))
        ));
        assert!(load_picture(
            no_p,
            &Overrides {
                p: Some(7),
                vcf: None
            }
        )
        .is_ok());
    }

    #[test]
    fn bad_inputs() {
        let d = Overrides::default();
        assert!(matches!(load_picture("", &d), Err(Error::Input(_))));
        assert!(matches!(
            load_picture("{not json", &d),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            load_picture(r#"{"p": 2, "roots": ["0","1","2","3","4"]}"#, &d),
            Err(Error::NotOddPrime(_))
        ));
        assert!(matches!(
            load_picture(r#"{"p": "5", "roots": ["0","1","2","1","4"]}"#, &d),
            Err(Error::DuplicateRoot(1, 3))
        ));
        assert!(matches!(
            load_picture(r#"{"p": 5, "roots": ["0","1","2","3"]}"#, &d),
            Err(Error::GenusTooSmall(4))
        ));
        assert!(matches!(
            load_picture(r#"{"p": 5, "roots": ["0","1","2","3","p^"]}"#, &d),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            load_picture("(* *", &d),
            Err(Error::Syntax { .. })
        ));
    }
}
