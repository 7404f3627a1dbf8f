//! Exact computation of integral differentials, `v(λ)` and discriminant
//! valuations of semistable hyperelliptic curves from their cluster pictures.
//!
//! ```
//! use clusterpic::{basis_sequence, lambda, parse_picture, Rational};
//!
//! let p = parse_picture("(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0", Rational::zero()).unwrap();
//! let b = basis_sequence(&p).unwrap();
//! assert_eq!(b.exponent_sum(), Rational::from(21));
//! assert_eq!(lambda(&p).unwrap().v_lambda, Rational::from(21));
//! ```

pub mod arith;
pub mod basis;
pub mod cli;
pub mod error;
pub mod harness;
pub mod input;
pub mod lambda;
pub mod notation;
pub mod pexpr;
pub mod picture;
pub mod report;
pub mod transforms;

pub use arith::{is_prime, val_p, OddPrime, Rational, Valuation};
pub use basis::{
    basis_sequence, basis_sequence_with, BasisResult, BasisStep, Differential, TieBreak,
};
pub use error::{Error, Result};
pub use harness::{cross_validate, enumerate_pictures, run_check, CheckReport, EnumSpec, Failure};
pub use lambda::{
    disc, disc_valuation_from_picture, disc_valuation_from_roots, hyperdisc_order, kausz_lambda8,
    lambda, lambda8, DiscResult, LambdaResult,
};
pub use notation::{parse_picture, print_picture};
pub use pexpr::{eval_p_expr, PExpr};
pub use picture::{
    build_picture_from_roots, validate_integrality, Centre, ClusterId, ClusterPicture,
    IntegralityReport, Shape,
};
pub use transforms::{TransformOutcome, TransformSpec};
