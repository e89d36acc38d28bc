use super::LatticeError;
use crate::exactnum::Rational;
use crate::potential::{IndexCorrespondence, SuperpotentialSpec};

/// The constant `c` with `P_target(m_hat) = c * P_source(m)` on every pair of
/// corresponding indices, where `P` is each spec's prefactor form. It must be
/// a positive integer.
pub fn determine_s1(
    source: &SuperpotentialSpec,
    target: &SuperpotentialSpec,
    correspondence: &IndexCorrespondence,
) -> Result<u64, LatticeError> {
    let mut ratio: Option<Rational> = None;
    for (m, m_hat) in &correspondence.pairs {
        let p = source.prefactor.eval(m, &correspondence.source_framing);
        let p_hat = target.prefactor.eval(m_hat, &correspondence.target_framing);
        if p.is_zero() || p_hat.is_zero() {
            return Err(LatticeError::BadPrefactor(format!("{m} / {m_hat}")));
        }
        let r = &p_hat / &p;
        match &ratio {
            None => ratio = Some(r),
            Some(first) if *first != r => {
                return Err(LatticeError::NonConstantRatio {
                    first: Box::new(first.clone()),
                    other: Box::new(r),
                    at: m.to_string(),
                })
            }
            Some(_) => {}
        }
    }
    let ratio = ratio.ok_or(LatticeError::EmptyCorrespondence)?;
    match ratio.to_i64() {
        Some(n) if n > 0 => Ok(n as u64),
        _ => Err(LatticeError::NonInteger(ratio)),
    }
}
