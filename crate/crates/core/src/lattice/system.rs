use std::fmt;

use serde::{Deserialize, Serialize};

use super::linalg;
use crate::exactnum::{FramedRational, Rational};

/// Rays of the toric fan, as integer 3-vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricData {
    pub rays: Vec<[i64; 3]>,
}

impl ToricData {
    /// Rays whose last coordinate is not 1.
    pub fn non_calabi_yau_rays(&self) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&i| self.rays[i][2] != 1)
            .collect()
    }

    /// Whether `sum_i weights[i] * rays[i]` vanishes.
    pub fn is_relation(&self, weights: &[Rational]) -> bool {
        weights.len() == self.rays.len()
            && (0..3).all(|k| {
                weights
                    .iter()
                    .zip(&self.rays)
                    .map(|(w, ray)| w * &Rational::from(ray[k]))
                    .sum::<Rational>()
                    .is_zero()
            })
    }
}

/// Extended charge vectors: `n_toric` toric columns followed by two brane
/// columns. Entries are affine in the framing symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeVectorSystem {
    pub rows: Vec<Vec<FramedRational>>,
    pub n_toric: usize,
    pub brane_row_index: usize,
    pub framing_symbol: String,
    pub root_order: u32,
}

impl ChargeVectorSystem {
    /// Builds a system, locating the brane row as the one whose first brane
    /// column is 1 (the last row if there is no such row).
    pub fn new(
        rows: Vec<Vec<FramedRational>>,
        n_toric: usize,
        framing_symbol: impl Into<String>,
        root_order: u32,
    ) -> Self {
        let one = FramedRational::constant(Rational::one());
        let brane_row_index = rows
            .iter()
            .position(|r| r.get(n_toric) == Some(&one))
            .unwrap_or(rows.len().saturating_sub(1));
        ChargeVectorSystem {
            rows,
            n_toric,
            brane_row_index,
            framing_symbol: framing_symbol.into(),
            root_order,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_toric + 2
    }

    pub fn entry(&self, row: usize, col: usize) -> &FramedRational {
        &self.rows[row][col]
    }

    pub fn is_framing_free_column(&self, col: usize) -> bool {
        self.rows.iter().all(|r| r[col].is_constant())
    }

    /// Rank over Q(framing). A nonzero r x r minor is a polynomial of degree
    /// at most r in the framing, so it is nonzero at one of r + 1 points.
    pub fn generic_rank(&self) -> usize {
        let r = self.n_rows();
        (0..=r as i64)
            .map(|f| {
                let f = Rational::from(f);
                let m: linalg::Matrix = self
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|x| x.eval(&f)).collect())
                    .collect();
                linalg::rank(&m)
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    CalabiYau {
        row: usize,
        sum: FramedRational,
    },
    BraneColumns {
        row: usize,
        found: (FramedRational, FramedRational),
    },
    LinearlyDependent {
        rank: usize,
        rows: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowLength { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::CalabiYau { row, sum } => {
                write!(f, "row {row}: toric entries sum to {sum}, not 0")
            }
            Violation::BraneColumns { row, found } => {
                write!(f, "row {row}: brane columns are ({}, {})", found.0, found.1)
            }
            Violation::LinearlyDependent { rank, rows } => {
                write!(f, "rows are dependent (rank {rank} of {rows})")
            }
        }
    }
}

/// Lists every violated invariant of `sys`; empty means valid.
pub fn validate_system(sys: &ChargeVectorSystem) -> Vec<Violation> {
    let expected = sys.n_cols();
    let mut out: Vec<Violation> = sys
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.len() != expected)
        .map(|(row, r)| Violation::RowLength {
            row,
            len: r.len(),
            expected,
        })
        .collect();
    if !out.is_empty() {
        return out;
    }

    for (i, row) in sys.rows.iter().enumerate() {
        let sum = row[..sys.n_toric]
            .iter()
            .fold(FramedRational::zero(), |acc, x| &acc + x);
        if !sum.is_zero() {
            out.push(Violation::CalabiYau { row: i, sum });
        }
        let w = if i == sys.brane_row_index {
            Rational::one()
        } else {
            Rational::zero()
        };
        let (b1, b2) = (&row[sys.n_toric], &row[sys.n_toric + 1]);
        if *b1 != FramedRational::constant(w.clone()) || *b2 != FramedRational::constant(-w) {
            out.push(Violation::BraneColumns {
                row: i,
                found: (b1.clone(), b2.clone()),
            });
        }
    }

    let rank = sys.generic_rank();
    if rank < sys.n_rows() {
        out.push(Violation::LinearlyDependent {
            rank,
            rows: sys.n_rows(),
        });
    }
    out
}
