//! Exact arithmetic foundation: big rationals, number fields, univariate and
//! multivariate polynomials, rational functions, truncated power series, and a
//! complex root finder for the numeric side.

pub mod cx;
pub mod mpoly;
pub mod nf;
pub mod rational;
pub mod roots;
pub mod series;
pub mod upoly;

pub use cx::Cx;
pub use mpoly::{MPoly, RFunc, VarTable};
pub use nf::{cyclotomic_field, nf_make, solve_quadratic, NFElem, NumberField};
pub use rational::{Field, Rational};
pub use roots::roots_complex;
pub use series::{series_leading, TruncSeries};
pub use upoly::{poly_discriminant, poly_resultant, UPoly};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("divide by zero")]
    DivideByZero,
    #[error("unsupported number field: {0}")]
    UnsupportedField(String),
    #[error("reducible minimal polynomial: {0}")]
    Reducible(String),
    #[error("mixed number fields in arithmetic")]
    MixedFields,
    #[error("root finder did not converge within iteration budget")]
    NoConvergence,
    #[error("series vanishes up to truncation order {0}")]
    OrderExceedsTruncation(usize),
    #[error("non-finite floating point component")]
    NonFinite,
}
