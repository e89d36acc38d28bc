//! Charge-vector systems with a symbolic framing parameter, and the exact
//! linear algebra relating two of them: transition matrix, framing relation,
//! change of variables, the scalar s1, and secondary-fan rays.

mod fan;
pub mod linalg;
mod s1;
mod system;
mod transition;

pub use fan::secondary_fan_rays;
pub use s1::determine_s1;
pub use system::{validate_system, ChargeVectorSystem, ToricData, Violation};
pub use transition::{
    change_of_variables, solve_transition, ChangeOfVariables, FramingRelation, TransitionMatrix,
};

use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("systems have different shapes: {0}")]
    ShapeMismatch(String),
    #[error("framing-free columns do not determine the transition matrix uniquely (rank {rank} < {rows})")]
    RankMismatch { rank: usize, rows: usize },
    #[error("no affine framing relation makes the systems span the same subspace: {0}")]
    NoFramingRelation(String),
    #[error("framing relation is not determined by the framing columns")]
    FramingUndetermined,
    #[error("transition matrix does not preserve the brane row: {0}")]
    BraneNotPreserved(String),
    #[error("prefactor ratio is not constant: {first} at the first index, {other} at {at}")]
    NonConstantRatio {
        first: Box<Rational>,
        other: Box<Rational>,
        at: String,
    },
    #[error("prefactor ratio {0} is not a positive integer")]
    NonInteger(Rational),
    #[error("cannot determine s1 from an empty index correspondence")]
    EmptyCorrespondence,
    #[error("prefactor vanishes or is undefined at {0}")]
    BadPrefactor(String),
    #[error(
        "secondary fan needs exactly 2 independent charge rows, got rank {rank} from {rows} rows"
    )]
    WrongRank { rank: usize, rows: usize },
}
