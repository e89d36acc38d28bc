use std::collections::BTreeSet;

use num_integer::Integer;

use super::{linalg, LatticeError};
use crate::exactnum::Rational;

/// Rays of the secondary fan of a rank-2 charge matrix: the columns, each
/// scaled to a primitive vector, deduplicated. Zero columns are skipped.
pub fn secondary_fan_rays(charge_rows: &[Vec<i64>]) -> Result<BTreeSet<(i64, i64)>, LatticeError> {
    let as_matrix: linalg::Matrix = charge_rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
        .collect();
    let rank = linalg::rank(&as_matrix);
    if charge_rows.len() != 2 || rank != 2 || charge_rows[0].len() != charge_rows[1].len() {
        return Err(LatticeError::WrongRank {
            rank,
            rows: charge_rows.len(),
        });
    }
    Ok(charge_rows[0]
        .iter()
        .zip(&charge_rows[1])
        .filter(|(x, y)| (**x, **y) != (0, 0))
        .map(|(&x, &y)| {
            let g = x.gcd(&y);
            (x / g, y / g)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_charge_vectors() {
        let rays = secondary_fan_rays(&[vec![1, 0, 0, 1, -2], vec![0, 1, 1, -3, 1]]).unwrap();
        assert_eq!(rays, BTreeSet::from([(1, 0), (0, 1), (1, -3), (-2, 1)]));
    }

    #[test]
    fn small_cases() {
        assert_eq!(
            secondary_fan_rays(&[vec![1, 0], vec![0, 1]]).unwrap(),
            BTreeSet::from([(1, 0), (0, 1)])
        );
        assert_eq!(
            secondary_fan_rays(&[vec![2, 0, 0], vec![0, 2, 0]]).unwrap(),
            BTreeSet::from([(1, 0), (0, 1)])
        );
        assert_eq!(
            secondary_fan_rays(&[vec![-4, 2], vec![6, -3]]).unwrap_err(),
            LatticeError::WrongRank { rank: 1, rows: 2 }
        );
        assert!(secondary_fan_rays(&[vec![1, 0]]).is_err());
    }

    #[test]
    fn negative_entries_keep_direction() {
        let rays = secondary_fan_rays(&[vec![-4, 3], vec![6, 0]]).unwrap();
        assert_eq!(rays, BTreeSet::from([(-2, 3), (1, 0)]));
    }
}
