//! Superpotential series described as data: index constraints, Gamma
//! factors, a sign exponent and a monomial map. Enumerates admissible
//! indices, evaluates terms exactly, and runs the correspondence check
//! between an orbifold and its resolution.

mod bundle;
mod enumerate;
mod form;
mod verify;

pub use bundle::{parse_bundle, parse_spec, GeometryBundle};
pub use enumerate::{admissible_indices, build, build_with, term, term_in_field, BuildOptions};
pub use form::{parse_form, FormParseError, FramedLinearForm};
pub use verify::{
    index_correspondence, verify_correspondence, verify_with_scale, IndexCorrespondence, Stage,
    VerificationOutcome, VerifyError,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{ExactError, Rational};
use crate::lattice::LatticeError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("syntax error at {path} (line {line}, column {column}): {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value at {path}: {message}")]
    Semantic { path: String, message: String },
    #[error(
        "index variable {0} is not bounded by the constraints once the brane index is bounded"
    )]
    UnboundedRegion(String),
    #[error("non-generic framing: {source} at index {index}")]
    NonGenericFraming {
        index: IndexVector,
        source: ExactError,
    },
    #[error("spec invariant violated at index {index}: {message}")]
    AssertionFailure { index: IndexVector, message: String },
    #[error("index map is not a bijection: {0}")]
    NotBijective(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Values of the summation indices, keyed by index-variable name.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexVector {
    pub values: BTreeMap<String, i64>,
}

impl IndexVector {
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, i64)>) -> Self {
        IndexVector {
            values: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, var: &str) -> i64 {
        self.values.get(var).copied().unwrap_or(0)
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Exponent of -1: `linear + sum_i floor(floors_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignExpression {
    pub linear: FramedLinearForm,
    pub floors: Vec<FramedLinearForm>,
}

impl SignExpression {
    pub fn value(&self, index: &IndexVector, framing: &Rational) -> Rational {
        self.floors
            .iter()
            .map(|f| f.eval(index, framing).floor())
            .fold(self.linear.eval(index, framing), |acc, x| acc + x)
    }
}

/// One superpotential series. The general term at an admissible index `m` is
///
/// ```text
/// (-1)^sign(m) / (P(m) * prod_j D_j(m)!) * Gamma(A(m)) / Gamma(1 + B(m)) * monomial(m)
/// ```
///
/// summed over `m` with brane index >= 1, all other indices >= 0 and every
/// constraint form a nonnegative integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperpotentialSpec {
    pub variables: Vec<String>,
    pub index_vars: Vec<String>,
    pub brane_index: String,
    pub framing_symbol: String,
    pub constraints: Vec<FramedLinearForm>,
    pub prefactor: FramedLinearForm,
    pub factorial_factors: Vec<FramedLinearForm>,
    pub ratio_num: FramedLinearForm,
    pub ratio_den: FramedLinearForm,
    pub sign: SignExpression,
    /// index variable -> (series variable -> exponent per unit of the index)
    pub monomial_map: BTreeMap<String, BTreeMap<String, Rational>>,
    pub root_order: u32,
}

impl SuperpotentialSpec {
    pub fn monomial(&self, index: &IndexVector) -> crate::series::Monomial {
        let mut m = crate::series::Monomial::one();
        for (ivar, targets) in &self.monomial_map {
            let k = Rational::from(index.get(ivar));
            for (var, e) in targets {
                m.add_exponent(var.clone(), &(&k * e));
            }
        }
        m
    }

    /// Cyclotomic order 2N used when the spec is evaluated on its own.
    pub fn field_order(&self) -> u32 {
        2 * self.root_order
    }
}
