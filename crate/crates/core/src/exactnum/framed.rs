use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{ExactError, Rational};

/// `c0 + c1 * phi` where `phi` is a framing symbol that has not been bound yet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FramedRational {
    pub c0: Rational,
    #[serde(default)]
    pub c1: Rational,
}

impl FramedRational {
    pub fn new(c0: Rational, c1: Rational) -> Self {
        FramedRational { c0, c1 }
    }

    pub fn constant(c0: Rational) -> Self {
        FramedRational {
            c0,
            c1: Rational::zero(),
        }
    }

    /// The framing symbol itself.
    pub fn symbol() -> Self {
        FramedRational {
            c0: Rational::zero(),
            c1: Rational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn eval(&self, framing: &Rational) -> Rational {
        &self.c0 + &(&self.c1 * framing)
    }

    /// Rewrites in terms of a new symbol `psi` under `phi = alpha * psi + beta`.
    pub fn substitute_affine(&self, alpha: &Rational, beta: &Rational) -> Self {
        FramedRational {
            c0: &self.c0 + &(&self.c1 * beta),
            c1: &self.c1 * alpha,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FramedRational {
            c0: &self.c0 * c,
            c1: &self.c1 * c,
        }
    }

    /// Product, provided the result stays affine in the framing symbol.
    pub fn checked_mul(&self, other: &FramedRational) -> Result<Self, ExactError> {
        match (self.is_constant(), other.is_constant()) {
            (true, _) => Ok(other.scale(&self.c0)),
            (_, true) => Ok(self.scale(&other.c0)),
            _ => Err(ExactError::FramingDegree),
        }
    }
}

impl From<Rational> for FramedRational {
    fn from(c0: Rational) -> Self {
        FramedRational::constant(c0)
    }
}

impl Add for &FramedRational {
    type Output = FramedRational;
    fn add(self, rhs: &FramedRational) -> FramedRational {
        FramedRational {
            c0: &self.c0 + &rhs.c0,
            c1: &self.c1 + &rhs.c1,
        }
    }
}

impl Sub for &FramedRational {
    type Output = FramedRational;
    fn sub(self, rhs: &FramedRational) -> FramedRational {
        FramedRational {
            c0: &self.c0 - &rhs.c0,
            c1: &self.c1 - &rhs.c1,
        }
    }
}

impl Neg for &FramedRational {
    type Output = FramedRational;
    fn neg(self) -> FramedRational {
        FramedRational {
            c0: -&self.c0,
            c1: -&self.c1,
        }
    }
}

impl fmt::Display for FramedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0.is_zero(), self.c1.is_zero()) {
            (_, true) => write!(f, "{}", self.c0),
            (true, false) => write!(f, "{}*phi", self.c1),
            (false, false) => write!(f, "{} + {}*phi", self.c0, self.c1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(c0: (i64, i64), c1: (i64, i64)) -> FramedRational {
        FramedRational::new(Rational::frac(c0.0, c0.1), Rational::frac(c1.0, c1.1))
    }

    #[test]
    fn eval_is_linear() {
        // f/5 at f = 2
        let x = fr((0, 1), (1, 5));
        assert_eq!(x.eval(&Rational::from(2)), Rational::frac(2, 5));
        let y = fr((-1, 5), (-1, 5));
        let two = Rational::from(2);
        assert_eq!((&x + &y).eval(&two), &x.eval(&two) + &y.eval(&two));
    }

    #[test]
    fn affine_substitution() {
        // f/5 with f = 5 fh + 2 becomes fh + 2/5
        let x = fr((0, 1), (1, 5)).substitute_affine(&Rational::from(5), &Rational::from(2));
        assert_eq!(x, fr((2, 5), (1, 1)));
    }

    #[test]
    fn degree_two_products_rejected() {
        let f = FramedRational::symbol();
        assert_eq!(f.checked_mul(&f), Err(ExactError::FramingDegree));
        let three = FramedRational::constant(Rational::from(3));
        assert_eq!(f.checked_mul(&three).unwrap(), fr((0, 1), (3, 1)));
    }

    #[test]
    fn c1_defaults_to_zero_in_json() {
        let x: FramedRational = serde_json::from_str(r#"{"c0": "-1/5"}"#).unwrap();
        assert_eq!(x, fr((-1, 5), (0, 1)));
    }
}
