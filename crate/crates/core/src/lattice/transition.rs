use serde::{Deserialize, Serialize};

use super::linalg::{self, Matrix, Solution};
use super::{ChargeVectorSystem, LatticeError};
use crate::exactnum::{FramedRational, Rational};

/// Square matrix `T` with `source row a = sum_b T[a][b] * target row b`.
/// Serializes row-major as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransitionMatrix {
    pub entries: Matrix,
}

impl TransitionMatrix {
    pub fn identity(n: usize) -> Self {
        TransitionMatrix {
            entries: linalg::identity(n),
        }
    }

    pub fn compose(&self, next: &TransitionMatrix) -> Self {
        TransitionMatrix {
            entries: linalg::mul(&self.entries, &next.entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

/// `f = alpha * f_target + beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramingRelation {
    pub alpha: Rational,
    pub beta: Rational,
}

impl FramingRelation {
    pub fn identity() -> Self {
        FramingRelation {
            alpha: Rational::one(),
            beta: Rational::zero(),
        }
    }

    /// Source framing for a given target framing.
    pub fn apply(&self, target_framing: &Rational) -> Rational {
        &(&self.alpha * target_framing) + &self.beta
    }

    /// `self` relates A to B and `next` relates B to C; the result relates A to C.
    pub fn compose(&self, next: &FramingRelation) -> Self {
        FramingRelation {
            alpha: &self.alpha * &next.alpha,
            beta: &(&self.alpha * &next.beta) + &self.beta,
        }
    }

    pub fn describe(&self, source_symbol: &str, target_symbol: &str) -> String {
        let mut s = format!("{source_symbol} = ");
        if !self.alpha.is_one() {
            s.push_str(&format!("{}*", self.alpha));
        }
        s.push_str(target_symbol);
        if self.beta.is_positive() {
            s.push_str(&format!(" + {}", self.beta));
        } else if self.beta.is_negative() {
            s.push_str(&format!(" - {}", self.beta.abs()));
        }
        s
    }
}

/// Monomial substitution: source variable `a` becomes
/// `prod_b target_var[b] ^ exponents[a][b]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeOfVariables {
    pub source_vars: Vec<String>,
    pub target_vars: Vec<String>,
    pub exponents: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<u64>,
}

impl ChangeOfVariables {
    pub fn identity(vars: &[String]) -> Self {
        ChangeOfVariables {
            source_vars: vars.to_vec(),
            target_vars: vars.to_vec(),
            exponents: linalg::identity(vars.len()),
            s1: None,
        }
    }

    /// The substitution going the other way, when the exponent matrix is invertible.
    pub fn inverse(&self) -> Option<Self> {
        Some(ChangeOfVariables {
            source_vars: self.target_vars.clone(),
            target_vars: self.source_vars.clone(),
            exponents: linalg::inverse(&self.exponents)?,
            s1: None,
        })
    }

    /// Human-readable rules such as `q5 = qh1^(-3/5)*qh5`.
    pub fn rules(&self) -> Vec<String> {
        self.source_vars
            .iter()
            .zip(&self.exponents)
            .map(|(src, row)| {
                let factors: Vec<String> = self
                    .target_vars
                    .iter()
                    .zip(row)
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(v, e)| {
                        if e.is_one() {
                            v.clone()
                        } else {
                            format!("{v}^({e})")
                        }
                    })
                    .collect();
                let rhs = if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                };
                format!("{src} = {rhs}")
            })
            .collect()
    }
}

/// Solves `src = T * tgt` with `f_src = alpha * f_tgt + beta`.
///
/// `T` comes from the framing-free columns; the framing relation and every
/// remaining column must then be consistent with it. The full identity is
/// re-checked symbolically in the target framing before returning.
pub fn solve_transition(
    src: &ChargeVectorSystem,
    tgt: &ChargeVectorSystem,
) -> Result<(TransitionMatrix, FramingRelation), LatticeError> {
    let rows = src.n_rows();
    let cols = src.n_cols();
    if rows != tgt.n_rows() || cols != tgt.n_cols() || src.n_toric != tgt.n_toric {
        return Err(LatticeError::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            rows,
            cols,
            tgt.n_rows(),
            tgt.n_cols()
        )));
    }
    if let Some(r) = src.rows.iter().chain(&tgt.rows).find(|r| r.len() != cols) {
        return Err(LatticeError::ShapeMismatch(format!(
            "row of length {} in a system with {} columns",
            r.len(),
            cols
        )));
    }

    let free_cols: Vec<usize> = (0..cols)
        .filter(|&j| src.is_framing_free_column(j) && tgt.is_framing_free_column(j))
        .collect();

    // Each source row gives x^T A = s with A[b][j] = tgt[b][j]; transpose to A^T x = s.
    let system: Matrix = free_cols
        .iter()
        .map(|&j| (0..rows).map(|b| tgt.entry(b, j).c0.clone()).collect())
        .collect();
    let rank = linalg::rank(&system);
    if rank < rows {
        return Err(LatticeError::RankMismatch { rank, rows });
    }
    let mut entries = Vec::with_capacity(rows);
    for a in 0..rows {
        let rhs: Vec<Rational> = free_cols
            .iter()
            .map(|&j| src.entry(a, j).c0.clone())
            .collect();
        match linalg::solve(&system, &rhs, rows) {
            Solution::Unique(x) => entries.push(x),
            Solution::Inconsistent => {
                return Err(LatticeError::NoFramingRelation(format!(
                "source row {a} is not in the span of the target rows on the framing-free columns"
            )))
            }
            Solution::Underdetermined => unreachable!("full column rank"),
        }
    }
    let t = TransitionMatrix { entries };

    // Framing columns: s0 + s1 (alpha g + beta) = t0 + t1 g, so s1 alpha = t1 and s1 beta = t0 - s0.
    let combo = |a: usize, j: usize| -> FramedRational {
        (0..rows).fold(FramedRational::zero(), |acc, b| {
            &acc + &tgt.entry(b, j).scale(&t.entries[a][b])
        })
    };
    let mut eq_lhs: Matrix = Vec::new();
    let mut eq_rhs = Vec::new();
    for j in (0..cols).filter(|j| !free_cols.contains(j)) {
        for a in 0..rows {
            let s = src.entry(a, j);
            let image = combo(a, j);
            eq_lhs.push(vec![s.c1.clone(), Rational::zero()]);
            eq_rhs.push(image.c1.clone());
            eq_lhs.push(vec![Rational::zero(), s.c1.clone()]);
            eq_rhs.push(&image.c0 - &s.c0);
        }
    }
    let relation = match linalg::solve(&eq_lhs, &eq_rhs, 2) {
        Solution::Unique(x) => FramingRelation {
            alpha: x[0].clone(),
            beta: x[1].clone(),
        },
        Solution::Inconsistent => {
            return Err(LatticeError::NoFramingRelation(
                "framing-dependent columns are inconsistent for every affine relation".into(),
            ))
        }
        Solution::Underdetermined => return Err(LatticeError::FramingUndetermined),
    };

    for a in 0..rows {
        for j in 0..cols {
            let lhs = src
                .entry(a, j)
                .substitute_affine(&relation.alpha, &relation.beta);
            if lhs != combo(a, j) {
                return Err(LatticeError::NoFramingRelation(format!(
                    "entry ({a}, {j}) differs after substituting the framing relation"
                )));
            }
        }
    }

    let (sb, tb) = (src.brane_row_index, tgt.brane_row_index);
    for a in 0..rows {
        let expected = if a == sb {
            Rational::one()
        } else {
            Rational::zero()
        };
        if t.entries[a][tb] != expected {
            return Err(LatticeError::BraneNotPreserved(format!(
                "T[{a}][{tb}] = {}, expected {expected}",
                t.entries[a][tb]
            )));
        }
    }

    Ok((t, relation))
}

/// Reads the monomial substitution off the transition matrix. The framing
/// relation does not enter the exponents; it is accepted so callers pass the
/// pair that `solve_transition` produced together.
pub fn change_of_variables(
    t: &TransitionMatrix,
    _relation: &FramingRelation,
    source_vars: &[String],
    target_vars: &[String],
) -> ChangeOfVariables {
    assert_eq!(source_vars.len(), t.dim(), "one source variable per row");
    assert_eq!(target_vars.len(), t.dim(), "one target variable per column");
    ChangeOfVariables {
        source_vars: source_vars.to_vec(),
        target_vars: target_vars.to_vec(),
        exponents: t.entries.clone(),
        s1: None,
    }
}
