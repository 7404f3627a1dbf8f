//! Small arithmetic expressions in the uniformiser `p`, used to write root
//! values such as `1 + 2*p^8`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := int | 'p' | '(' expr ')'
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::arith::{OddPrime, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PExpr {
    Int(BigInt),
    P,
    Neg(Box<PExpr>),
    Add(Box<PExpr>, Box<PExpr>),
    Sub(Box<PExpr>, Box<PExpr>),
    Mul(Box<PExpr>, Box<PExpr>),
    Div(Box<PExpr>, Box<PExpr>),
    Pow(Box<PExpr>, u32),
}

impl PExpr {
    pub fn parse(src: &str) -> Result<PExpr> {
        let mut parser = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Evaluates with `p` bound to the given value.
    pub fn eval_at(&self, p: &Rational) -> Result<Rational> {
        Ok(match self {
            PExpr::Int(n) => Rational::from_integer(n.clone()),
            PExpr::P => p.clone(),
            PExpr::Neg(a) => -a.eval_at(p)?,
            PExpr::Add(a, b) => a.eval_at(p)? + b.eval_at(p)?,
            PExpr::Sub(a, b) => a.eval_at(p)? - b.eval_at(p)?,
            PExpr::Mul(a, b) => a.eval_at(p)? * b.eval_at(p)?,
            PExpr::Div(a, b) => a.eval_at(p)?.checked_div(&b.eval_at(p)?)?,
            PExpr::Pow(a, k) => a.eval_at(p)?.pow(*k),
        })
    }

    pub fn eval(&self, p: OddPrime) -> Result<Rational> {
        self.eval_at(&p.as_rational())
    }
}

impl FromStr for PExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<PExpr> {
        PExpr::parse(s)
    }
}

/// Parses `src` and evaluates it at the prime `p`.
pub fn eval_p_expr(src: &str, p: u64) -> Result<Rational> {
    let p = OddPrime::new(p)?;
    PExpr::parse(src)?.eval(p)
}

/// Fully parenthesised rendering; parses back to the same tree.
impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExpr::Int(n) if n.sign() == num_bigint::Sign::Minus => write!(f, "(0{n})"),
            PExpr::Int(n) => write!(f, "{n}"),
            PExpr::P => f.write_str("p"),
            PExpr::Neg(a) => write!(f, "-({a})"),
            PExpr::Add(a, b) => write!(f, "({a} + {b})"),
            PExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            PExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            PExpr::Div(a, b) => write!(f, "({a} / {b})"),
            PExpr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = PExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = PExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PExpr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = PExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = PExpr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<PExpr> {
        if self.eat(b'-') {
            return Ok(PExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let k = digits
                .parse::<u32>()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(PExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<PExpr> {
        match self.peek() {
            Some(b'p') => {
                self.pos += 1;
                Ok(PExpr::P)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(PExpr::Int(digits.parse().expect("ascii digits")))
            }
            Some(_) => Err(self.error("expected an integer, 'p' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn evaluates_examples() {
        assert_eq!(eval_p_expr("2*p^6", 5).unwrap(), Rational::from(31250));
        // 1 + 2*3^8 = 1 + 2*6561
        let expected = BigInt::from(1) + BigInt::from(2) * num_traits::pow(BigInt::from(3), 8);
        assert_eq!(expected, BigInt::from(13123));
        assert_eq!(eval_p_expr("1 + 2*p^8", 3).unwrap(), Rational::from(13123));
        assert_eq!(eval_p_expr("p^0", 7).unwrap(), Rational::one());
        assert_eq!(
            eval_p_expr("1/p - (3)", 5).unwrap(),
            "-14/5".parse().unwrap()
        );
        assert_eq!(eval_p_expr("-p^2", 3).unwrap(), Rational::from(-9));
        assert_eq!(
            eval_p_expr(" ( p + 1 ) ^ 2 ", 3).unwrap(),
            Rational::from(16)
        );
    }

    #[test]
    fn reports_errors() {
        assert_eq!(eval_p_expr("1/(p-5)", 5), Err(Error::DivisionByZero));
        assert!(matches!(
            eval_p_expr("2*", 5),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(eval_p_expr("(1+p", 5), Err(Error::Syntax { .. })));
        assert!(matches!(eval_p_expr("p^x", 5), Err(Error::Syntax { .. })));
        assert!(matches!(
            eval_p_expr("1 2", 5),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            eval_p_expr("q", 5),
            Err(Error::Syntax { pos: 0, .. })
        ));
        assert!(matches!(eval_p_expr("1", 2), Err(Error::NotOddPrime(_))));
    }

    // Independent oracle: evaluate the generated tree directly with num's
    // BigRational, never touching the parser or `eval_at`.
    fn oracle(e: &PExpr, p: &BigRational) -> Option<BigRational> {
        use num_traits::Zero;
        Some(match e {
            PExpr::Int(n) => BigRational::from_integer(n.clone()),
            PExpr::P => p.clone(),
            PExpr::Neg(a) => -oracle(a, p)?,
            PExpr::Add(a, b) => oracle(a, p)? + oracle(b, p)?,
            PExpr::Sub(a, b) => oracle(a, p)? - oracle(b, p)?,
            PExpr::Mul(a, b) => oracle(a, p)? * oracle(b, p)?,
            PExpr::Div(a, b) => {
                let d = oracle(b, p)?;
                if d.is_zero() {
                    return None;
                }
                oracle(a, p)? / d
            }
            PExpr::Pow(a, k) => {
                let base = oracle(a, p)?;
                (0..*k).fold(BigRational::from_integer(1.into()), |acc, _| acc * &base)
            }
        })
    }

    fn arb_expr() -> impl Strategy<Value = PExpr> {
        let leaf = prop_oneof![
            (0i64..50).prop_map(|n| PExpr::Int(n.into())),
            Just(PExpr::P),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| PExpr::Neg(Box::new(a))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| PExpr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| PExpr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| PExpr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| PExpr::Div(Box::new(a), Box::new(b))),
                (inner, 0u32..4).prop_map(|(a, k)| PExpr::Pow(Box::new(a), k)),
            ]
        })
    }

    proptest! {
        #[test]
        fn agrees_with_independent_evaluator(e in arb_expr(), pi in 0usize..3) {
            let p = OddPrime::new([3, 5, 7][pi]).unwrap();
            let text = e.to_string();
            let parsed = PExpr::parse(&text).unwrap();
            prop_assert_eq!(&parsed, &e);
            let expected = oracle(&e, &BigRational::from_integer(p.as_bigint()));
            match parsed.eval(p) {
                Ok(v) => prop_assert_eq!(Some(BigRational::from(v)), expected),
                Err(err) => {
                    prop_assert_eq!(err, Error::DivisionByZero);
                    prop_assert!(expected.is_none());
                }
            }
        }
    }
}
