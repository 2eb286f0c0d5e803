//! Exact base arithmetic: rationals, polynomials and truncated Laurent
//! series in `t`, sparse multivariate polynomials and `Q(t)`.

mod curve;
pub mod linalg;
mod mpoly;
mod rat;
mod rfun;
pub mod ring;
mod tpoly;
mod tseries;

use thiserror::Error;

pub use curve::{eval_at_curve, eval_exact, substitution_degree_bound, PolyCurve};
pub use mpoly::{mpoly_gcd, MPoly, Monomial, TermJson};
pub use rat::{q, Rat};
pub use rfun::RFunT;
pub use ring::{ExactDiv, Field, Ring};
pub use tpoly::TPoly;
pub use tseries::{TSeries, Valuation};

/// Default number of guard terms beyond `r` used when truncating.
pub const DEFAULT_GUARD: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("series is not a unit (valuation {0:?})")]
    NotAUnit(Valuation),
    #[error("inverting a non-constant exact series needs a truncation order")]
    NeedsTruncation,
    #[error("truncation {trunc} must exceed offset {offset} and match {len} stored coefficients")]
    BadTruncation { offset: i64, trunc: i64, len: usize },
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("negative exponent (field inversion) is not supported")]
    NegativeExponent,
    #[error("component {component} has degree {degree}, not below r = {r}")]
    DegreeBound {
        component: usize,
        degree: usize,
        r: usize,
    },
}
