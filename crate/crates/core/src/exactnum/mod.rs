//! Exact arithmetic: rationals, elements of the cyclotomic field Q(zeta_n),
//! rationals affine in a framing symbol, and Gamma ratios with integer shift.
//!
//! A floating-point Gamma function is included only as an independent oracle
//! for [`gamma_ratio`].

mod cyclotomic;
mod framed;
mod gamma;
mod rational;

pub use cyclotomic::{cyclotomic_polynomial, root_of_unity, Cyclotomic};
pub use framed::FramedRational;
pub use gamma::{gamma_float, gamma_ratio, Lanczos};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("Gamma pole at {0}")]
    Pole(Rational),
    #[error("Gamma arguments {a} and {b} do not differ by an integer")]
    NotIntegerShift { a: Box<Rational>, b: Box<Rational> },
    #[error("cyclotomic order mismatch: {0}")]
    OrderMismatch(String),
    #[error("framing symbol would appear with degree > 1")]
    FramingDegree,
}
