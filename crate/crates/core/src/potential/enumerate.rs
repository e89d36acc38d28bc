use rayon::prelude::*;

use super::{IndexVector, PotentialError, SuperpotentialSpec};
use crate::exactnum::{gamma_ratio, root_of_unity, Cyclotomic, ExactError, Rational};
use crate::series::{Monomial, PuiseuxSeries, Region};

/// Upper bound for every non-brane index once the brane index is at most
/// `m0_max`. A constraint `k + a_b m_b + sum a_i m_i >= 0` with `a_v < 0` and
/// every other non-brane `a_i <= 0` bounds `m_v`.
fn index_bounds(spec: &SuperpotentialSpec, m0_max: i64) -> Result<Vec<(i64, i64)>, PotentialError> {
    let brane = &spec.brane_index;
    let m0_cap = m0_max.max(1);
    spec.index_vars
        .iter()
        .map(|v| {
            if v == brane {
                return Ok((1, m0_max));
            }
            spec.constraints
                .iter()
                .filter_map(|c| {
                    let a_v = c.coeff(v).c0;
                    let others_ok = spec
                        .index_vars
                        .iter()
                        .filter(|w| *w != v && *w != brane)
                        .all(|w| !c.coeff(w).c0.is_positive());
                    if !a_v.is_negative() || !others_ok {
                        return None;
                    }
                    let a_b = c.coeff(brane).c0;
                    let best = std::cmp::max(a_b.clone(), &a_b * &Rational::from(m0_cap));
                    let bound = (&c.constant.c0 + &best) / (-a_v);
                    Some(bound.floor().to_i64().unwrap_or(i64::MAX))
                })
                .min()
                .map(|hi| (0, hi))
                .ok_or_else(|| PotentialError::UnboundedRegion(v.clone()))
        })
        .collect()
}

fn is_admissible(spec: &SuperpotentialSpec, index: &IndexVector, framing: &Rational) -> bool {
    spec.constraints.iter().all(|c| {
        let x = c.eval(index, framing);
        x.is_integer() && !x.is_negative()
    })
}

/// Index vectors with `1 <= brane <= m0_max`, all other indices `>= 0` and
/// every constraint a nonnegative integer, in lexicographic order over
/// `spec.index_vars`.
pub fn admissible_indices(
    spec: &SuperpotentialSpec,
    framing: &Rational,
    m0_max: u64,
) -> Result<Vec<IndexVector>, PotentialError> {
    let m0_max = i64::try_from(m0_max).unwrap_or(i64::MAX);
    let bounds = index_bounds(spec, m0_max)?;
    let mut out = Vec::new();
    let mut current = vec![0i64; bounds.len()];

    fn walk(
        depth: usize,
        bounds: &[(i64, i64)],
        current: &mut Vec<i64>,
        spec: &SuperpotentialSpec,
        framing: &Rational,
        out: &mut Vec<IndexVector>,
    ) {
        if depth == bounds.len() {
            let idx = IndexVector::from_pairs(
                spec.index_vars.iter().cloned().zip(current.iter().copied()),
            );
            if is_admissible(spec, &idx, framing) {
                out.push(idx);
            }
            return;
        }
        let (lo, hi) = bounds[depth];
        for x in lo..=hi {
            current[depth] = x;
            walk(depth + 1, bounds, current, spec, framing, out);
        }
    }

    walk(0, &bounds, &mut current, spec, framing, &mut out);
    Ok(out)
}

fn factorial(n: &Rational) -> Rational {
    let n = n.to_i64().expect("checked integer");
    (2..=n).map(Rational::from).product()
}

/// Evaluates the general term at one admissible index, with coefficients in
/// Q(zeta_order). `order` must be a multiple of `2 * spec.root_order`.
pub fn term_in_field(
    spec: &SuperpotentialSpec,
    index: &IndexVector,
    framing: &Rational,
    order: u32,
) -> Result<(Monomial, Cyclotomic), PotentialError> {
    let fail = |message: String| PotentialError::AssertionFailure {
        index: index.clone(),
        message,
    };
    if !is_admissible(spec, index, framing) {
        return Err(fail("index violates a summation constraint".into()));
    }

    let mut magnitude = Rational::one();
    for (j, d) in spec.factorial_factors.iter().enumerate() {
        let x = d.eval(index, framing);
        if !x.is_integer() || x.is_negative() {
            return Err(fail(format!("factorial argument {j} is {x}")));
        }
        magnitude *= &factorial(&x);
    }
    let p = spec.prefactor.eval(index, framing);
    if p.is_zero() {
        return Err(fail("prefactor vanishes".into()));
    }
    magnitude *= &p;

    let a = spec.ratio_num.eval(index, framing);
    let b = &Rational::one() + &spec.ratio_den.eval(index, framing);
    if !(&a - &b).is_integer() {
        return Err(fail(format!(
            "Gamma arguments {a} and {b} differ by a non-integer"
        )));
    }
    let ratio = gamma_ratio(&a, &b).map_err(|source| match source {
        ExactError::Pole(_) => PotentialError::NonGenericFraming {
            index: index.clone(),
            source,
        },
        other => fail(other.to_string()),
    })?;

    let s = spec.sign.value(index, framing);
    let n = i64::from(spec.root_order);
    let denom = s.denom().clone();
    if num_traits::ToPrimitive::to_i64(&denom).is_none_or(|d| n % d != 0) {
        return Err(fail(format!(
            "sign exponent {s} has denominator not dividing {n}"
        )));
    }
    let numer = num_traits::ToPrimitive::to_i64(s.numer())
        .ok_or_else(|| fail(format!("sign exponent {s} out of range")))?;
    let q = u32::try_from(num_traits::ToPrimitive::to_i64(&denom).unwrap_or(0))
        .map_err(|_| fail(format!("sign exponent {s} out of range")))?;
    let sign = root_of_unity(numer, q, order).map_err(|e| fail(e.to_string()))?;

    let coeff = sign.scale(&(&ratio / &magnitude));
    Ok((spec.monomial(index), coeff))
}

/// Evaluates the general term at one admissible index in the spec's own field.
pub fn term(
    spec: &SuperpotentialSpec,
    index: &IndexVector,
    framing: &Rational,
) -> Result<(Monomial, Cyclotomic), PotentialError> {
    term_in_field(spec, index, framing, spec.field_order())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Cyclotomic order for coefficients; defaults to the spec's own 2N.
    pub order: Option<u32>,
    /// Worker threads for term evaluation; 0 or 1 means sequential.
    pub jobs: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            order: None,
            jobs: 1,
        }
    }
}

/// Truncated series: the sum of all terms with brane index at most `m0_max`.
pub fn build(
    spec: &SuperpotentialSpec,
    framing: &Rational,
    m0_max: u64,
) -> Result<PuiseuxSeries, PotentialError> {
    build_with(spec, framing, m0_max, &BuildOptions::default())
}

/// As [`build`], with an explicit field and worker count. The result does
/// not depend on the worker count; the first failing index in enumeration
/// order is the one reported.
pub fn build_with(
    spec: &SuperpotentialSpec,
    framing: &Rational,
    m0_max: u64,
    options: &BuildOptions,
) -> Result<PuiseuxSeries, PotentialError> {
    let order = options.order.unwrap_or_else(|| spec.field_order());
    let indices = admissible_indices(spec, framing, m0_max)?;
    let eval = |idx: &IndexVector| term_in_field(spec, idx, framing, order);

    let results: Vec<_> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| indices.par_iter().map(eval).collect())
    } else {
        indices.iter().map(eval).collect()
    };

    let region = Region {
        m0_max,
        variables: spec.variables.iter().cloned().collect(),
    };
    let mut series = PuiseuxSeries::new(order, region);
    for r in results {
        let (m, c) = r?;
        series.add_term(m, c)?;
    }
    Ok(series)
}
