//! Sparse series in several variables with rational exponents and
//! cyclotomic coefficients, with monomial substitution and exact comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{Cyclotomic, Rational};
use crate::lattice::ChangeOfVariables;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable {0} is not a source variable of the substitution")]
    UnknownVariable(String),
    #[error("series regions differ: {0}")]
    RegionMismatch(String),
    #[error("coefficient order {found} differs from series order {expected}")]
    OrderMismatch { expected: u32, found: u32 },
}

/// Product of variables raised to rational powers. Zero exponents are never
/// stored, so equal monomials compare equal. Ordered lexicographically over
/// the sorted `(variable, exponent)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(BTreeMap<String, Rational>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exponents<S: Into<String>>(exps: impl IntoIterator<Item = (S, Rational)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in exps {
            m.add_exponent(v.into(), &e);
        }
        m
    }

    pub fn add_exponent(&mut self, var: String, e: &Rational) {
        if e.is_zero() {
            return;
        }
        let slot = self.0.entry(var).or_insert_with(Rational::zero);
        *slot += e;
        if slot.is_zero() {
            self.0.retain(|_, x| !x.is_zero());
        }
    }

    pub fn exponent(&self, var: &str) -> Rational {
        self.0.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn exponents(&self) -> &BTreeMap<String, Rational> {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in &other.0 {
            out.add_exponent(v.clone(), e);
        }
        out
    }

    /// Image under `cov`: `prod_a q_a^{e_a}` becomes `prod_b qhat_b^{sum_a e_a T[a][b]}`.
    pub fn substitute(&self, cov: &ChangeOfVariables) -> Result<Monomial, SeriesError> {
        let mut out = Monomial::one();
        for (var, e) in &self.0 {
            let a = cov
                .source_vars
                .iter()
                .position(|s| s == var)
                .ok_or_else(|| SeriesError::UnknownVariable(var.clone()))?;
            for (target, t) in cov.target_vars.iter().zip(&cov.exponents[a]) {
                out.add_exponent(target.clone(), &(e * t));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if e.is_one() {
                    v.clone()
                } else if e.is_integer() && e.is_positive() {
                    format!("{v}^{e}")
                } else {
                    format!("{v}^({e})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Truncation descriptor: brane-index bound and the variable set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub m0_max: u64,
    pub variables: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub monomial: Monomial,
    pub coeff: Cyclotomic,
}

/// Finite sum of monomials with nonzero coefficients, all in one cyclotomic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    order: u32,
    region: Region,
    terms: BTreeMap<Monomial, Cyclotomic>,
}

impl PuiseuxSeries {
    pub fn new(order: u32, region: Region) -> Self {
        PuiseuxSeries {
            order,
            region,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        order: u32,
        region: Region,
        terms: impl IntoIterator<Item = (Monomial, Cyclotomic)>,
    ) -> Result<Self, SeriesError> {
        let mut s = PuiseuxSeries::new(order, region);
        for (m, c) in terms {
            s.add_term(m, c)?;
        }
        Ok(s)
    }

    /// Adds `c * m`, merging with an existing term. Returns whether the
    /// monomial was already present.
    pub fn add_term(&mut self, m: Monomial, c: Cyclotomic) -> Result<bool, SeriesError> {
        if c.order() != self.order {
            return Err(SeriesError::OrderMismatch {
                expected: self.order,
                found: c.order(),
            });
        }
        let collided = match self.terms.remove(&m) {
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
                true
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(m, c);
                }
                false
            }
        };
        Ok(collided)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Cyclotomic> {
        self.terms.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn to_terms(&self) -> Vec<SeriesTerm> {
        self.terms
            .iter()
            .map(|(m, c)| SeriesTerm {
                monomial: m.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn substitute(&self, cov: &ChangeOfVariables) -> Result<PuiseuxSeries, SeriesError> {
        self.substitute_counted(cov).map(|(s, _)| s)
    }

    /// Substitutes and also returns how many images landed on an existing monomial.
    pub fn substitute_counted(
        &self,
        cov: &ChangeOfVariables,
    ) -> Result<(PuiseuxSeries, usize), SeriesError> {
        let region = Region {
            m0_max: self.region.m0_max,
            variables: cov.target_vars.iter().cloned().collect(),
        };
        let mut out = PuiseuxSeries::new(self.order, region);
        let mut collisions = 0;
        for (m, c) in &self.terms {
            if out.add_term(m.substitute(cov)?, c.clone())? {
                collisions += 1;
            }
        }
        Ok((out, collisions))
    }

    pub fn scale(&self, c: i64) -> PuiseuxSeries {
        let c = Rational::from(c);
        PuiseuxSeries {
            order: self.order,
            region: self.region.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.scale(&c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }
}

impl Serialize for PuiseuxSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_terms().serialize(serializer)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub monomial: Monomial,
    pub left: Cyclotomic,
    pub right: Cyclotomic,
}

/// Exact difference of two series over a common region.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub mismatches: Vec<Mismatch>,
    pub left_only: Vec<Monomial>,
    pub right_only: Vec<Monomial>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty() && self.left_only.is_empty() && self.right_only.is_empty()
    }

    pub fn total(&self) -> usize {
        self.mismatches.len() + self.left_only.len() + self.right_only.len()
    }

    /// Keeps at most `cap` entries across the three lists, in order.
    pub fn truncated(&self, cap: usize) -> DiffReport {
        let mismatches: Vec<_> = self.mismatches.iter().take(cap).cloned().collect();
        let left_cap = cap - mismatches.len();
        let left_only: Vec<_> = self.left_only.iter().take(left_cap).cloned().collect();
        let right_cap = left_cap - left_only.len();
        DiffReport {
            mismatches,
            left_only,
            right_only: self.right_only.iter().take(right_cap).cloned().collect(),
        }
    }
}

/// Compares two series term by term. Both must cover the same region.
pub fn compare(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<DiffReport, SeriesError> {
    if a.region != b.region {
        return Err(SeriesError::RegionMismatch(format!(
            "m0 <= {} over {:?} vs m0 <= {} over {:?}",
            a.region.m0_max, a.region.variables, b.region.m0_max, b.region.variables
        )));
    }
    if a.order != b.order {
        return Err(SeriesError::OrderMismatch {
            expected: a.order,
            found: b.order,
        });
    }
    let mut report = DiffReport::default();
    for (m, x) in &a.terms {
        match b.terms.get(m) {
            None => report.left_only.push(m.clone()),
            Some(y) if x != y => report.mismatches.push(Mismatch {
                monomial: m.clone(),
                left: x.clone(),
                right: y.clone(),
            }),
            Some(_) => {}
        }
    }
    report.right_only = b
        .terms
        .keys()
        .filter(|m| !a.terms.contains_key(*m))
        .cloned()
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::frac(p, d)
    }

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn z5_cov() -> ChangeOfVariables {
        ChangeOfVariables {
            source_vars: vars(&["q4", "q5", "q0"]),
            target_vars: vars(&["qh1", "qh5", "qh0"]),
            exponents: vec![
                vec![q(-1, 5), q(0, 1), q(0, 1)],
                vec![q(-3, 5), q(1, 1), q(0, 1)],
                vec![q(1, 5), q(0, 1), q(1, 1)],
            ],
            s1: None,
        }
    }

    fn region(m0_max: u64, names: &[&str]) -> Region {
        Region {
            m0_max,
            variables: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn mono(exps: &[(&str, i64, i64)]) -> Monomial {
        Monomial::from_exponents(exps.iter().map(|&(v, p, d)| (v, q(p, d))))
    }

    fn sample_series() -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            10,
            region(5, &["q0", "q4", "q5"]),
            [
                (
                    mono(&[("q0", 1, 1), ("q4", 1, 1)]),
                    Cyclotomic::zeta_pow(10, 7),
                ),
                (mono(&[("q0", 5, 1)]), Cyclotomic::one(10)),
                (
                    mono(&[("q0", 3, 1), ("q5", 1, 1)]),
                    Cyclotomic::zeta_pow(10, 3).scale(&q(-2, 3)),
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn substitution_examples() {
        let cov = z5_cov();
        assert_eq!(
            mono(&[("q0", 1, 1), ("q4", 1, 1)])
                .substitute(&cov)
                .unwrap(),
            mono(&[("qh0", 1, 1)])
        );
        assert_eq!(
            mono(&[("q0", 5, 1)]).substitute(&cov).unwrap(),
            mono(&[("qh1", 1, 1), ("qh0", 5, 1)])
        );
        assert_eq!(
            mono(&[("x", 1, 1)]).substitute(&cov).unwrap_err(),
            SeriesError::UnknownVariable("x".into())
        );
    }

    #[test]
    fn identity_substitution() {
        let s = sample_series();
        let id = ChangeOfVariables::identity(&vars(&["q4", "q5", "q0"]));
        assert_eq!(s.substitute(&id).unwrap(), s);
    }

    #[test]
    fn scaling() {
        let s = sample_series();
        assert_eq!(s.scale(1), s);
        assert!(s.scale(0).is_empty());
        let m = mono(&[("q0", 1, 1), ("q4", 1, 1)]);
        assert_eq!(
            s.scale(5).coefficient(&m).unwrap(),
            &Cyclotomic::zeta_pow(10, 7).scale(&q(5, 1))
        );
    }

    #[test]
    fn compare_examples() {
        let s = sample_series();
        assert!(compare(&s, &s).unwrap().is_empty());
        let report = compare(&s, &s.scale(2)).unwrap();
        assert_eq!(report.mismatches.len(), s.len());
        assert!(report.left_only.is_empty() && report.right_only.is_empty());

        let other = PuiseuxSeries::new(10, region(6, &["q0", "q4", "q5"]));
        assert!(matches!(
            compare(&s, &other),
            Err(SeriesError::RegionMismatch(_))
        ));
    }

    #[test]
    fn compare_one_sided_terms() {
        let s = sample_series();
        let empty = PuiseuxSeries::new(10, s.region().clone());
        let report = compare(&s, &empty).unwrap();
        assert_eq!(report.left_only.len(), 3);
        assert_eq!(compare(&empty, &s).unwrap().right_only.len(), 3);
        assert_eq!(report.truncated(2).total(), 2);
    }

    #[test]
    fn collisions_are_merged_and_counted() {
        // a and b both map to x
        let cov = ChangeOfVariables {
            source_vars: vars(&["a", "b"]),
            target_vars: vars(&["x"]),
            exponents: vec![vec![q(1, 1)], vec![q(1, 1)]],
            s1: None,
        };
        let s = PuiseuxSeries::from_terms(
            10,
            region(1, &["a", "b"]),
            [
                (mono(&[("a", 1, 1)]), Cyclotomic::one(10)),
                (mono(&[("b", 1, 1)]), Cyclotomic::zeta_pow(10, 2)),
                (mono(&[("a", 2, 1)]), Cyclotomic::one(10)),
                (mono(&[("b", 2, 1)]), -&Cyclotomic::one(10)),
            ],
        )
        .unwrap();
        let (out, collisions) = s.substitute_counted(&cov).unwrap();
        assert_eq!(collisions, 2);
        assert_eq!(out.len(), 1, "x^2 terms cancel");
        assert_eq!(
            out.coefficient(&mono(&[("x", 1, 1)])).unwrap(),
            &(&Cyclotomic::one(10) + &Cyclotomic::zeta_pow(10, 2))
        );
    }

    #[test]
    fn serialized_shape() {
        let s = PuiseuxSeries::from_terms(
            10,
            region(1, &["qh0"]),
            [(mono(&[("qh0", 1, 1)]), Cyclotomic::zeta_pow(10, 7))],
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"[{"monomial":{"qh0":"1"},"coeff":{"order":10,"coords":["0","0","-1","0"]}}]"#
        );
        assert_eq!(s.to_string(), "(z10^7)*qh0");
    }

    fn arb_monomial() -> impl Strategy<Value = Monomial> {
        prop::collection::vec((-12i64..=12, 1i64..=6), 3).prop_map(|e| {
            Monomial::from_exponents(
                ["q4", "q5", "q0"]
                    .iter()
                    .zip(e)
                    .map(|(v, (p, d))| (*v, q(p, d))),
            )
        })
    }

    fn arb_series() -> impl Strategy<Value = PuiseuxSeries> {
        prop::collection::vec((arb_monomial(), 0i64..10, -5i64..=5), 0..8).prop_map(|terms| {
            PuiseuxSeries::from_terms(
                10,
                region(3, &["q0", "q4", "q5"]),
                terms
                    .into_iter()
                    .map(|(m, k, c)| (m, Cyclotomic::zeta_pow(10, k).scale(&Rational::from(c)))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn substitution_is_multiplicative(a in arb_monomial(), b in arb_monomial()) {
            let cov = z5_cov();
            prop_assert_eq!(
                a.mul(&b).substitute(&cov).unwrap(),
                a.substitute(&cov).unwrap().mul(&b.substitute(&cov).unwrap())
            );
        }

        #[test]
        fn inverse_substitution_round_trips(s in arb_series()) {
            let cov = z5_cov();
            let back = s.substitute(&cov).unwrap().substitute(&cov.inverse().unwrap()).unwrap();
            prop_assert_eq!(back.to_terms(), s.to_terms());
        }

        #[test]
        fn substitute_commutes_with_scale(s in arb_series(), c in -6i64..=6) {
            let cov = z5_cov();
            prop_assert_eq!(
                s.scale(c).substitute(&cov).unwrap(),
                s.substitute(&cov).unwrap().scale(c)
            );
        }

        #[test]
        fn compare_is_symmetric(a in arb_series(), b in arb_series()) {
            let ab = compare(&a, &b).unwrap();
            let ba = compare(&b, &a).unwrap();
            prop_assert_eq!(ab.is_empty(), ba.is_empty());
            prop_assert_eq!(ab.left_only, ba.right_only);
        }
    }
}
