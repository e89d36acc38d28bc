//! Gaussian elimination over Q.

use crate::exactnum::Rational;

pub type Matrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    /// Consistent but with free variables.
    Underdetermined,
}

/// Row-reduces in place and returns the pivot columns.
fn row_reduce(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip().expect("nonzero pivot");
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &(&factor * p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut work = m.clone();
    row_reduce(&mut work, ncols).len()
}

/// Solves `a x = b` for `a` with `a.len()` equations and `nvars` unknowns.
pub fn solve(a: &Matrix, b: &[Rational], nvars: usize) -> Solution {
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, nvars + 1);
    if pivots.last() == Some(&nvars) {
        return Solution::Inconsistent;
    }
    if pivots.len() < nvars {
        return Solution::Underdetermined;
    }
    Solution::Unique(aug[..nvars].iter().map(|r| r[nvars].clone()).collect())
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn solve_cases() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let b = [Rational::from(3), Rational::from(1), Rational::from(4)];
        assert_eq!(
            solve(&a, &b, 2),
            Solution::Unique(vec![Rational::from(2), Rational::from(1)])
        );
        let b = [Rational::from(3), Rational::from(1), Rational::from(5)];
        assert_eq!(solve(&a, &b, 2), Solution::Inconsistent);
        let a = m(&[&[1, 1]]);
        assert_eq!(solve(&a, &[Rational::one()], 2), Solution::Underdetermined);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
