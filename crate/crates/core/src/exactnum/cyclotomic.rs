use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, Rational};

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }

    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    let p = Arc::new(num);
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// Reduces a rational polynomial modulo the monic `modulus`, returning
/// exactly `deg(modulus)` coordinates.
fn reduce(mut poly: Vec<Rational>, modulus: &[BigInt]) -> Vec<Rational> {
    let deg = modulus.len() - 1;
    for i in (deg..poly.len()).rev() {
        let c = std::mem::take(&mut poly[i]);
        if c.is_zero() {
            continue;
        }
        // x^i = x^(i-deg) * x^deg and x^deg = -sum_{j<deg} m_j x^j
        for (j, mj) in modulus[..deg].iter().enumerate() {
            if !mj.is_zero() {
                poly[i - deg + j] -= &(&c * &Rational::from_integer(mj.clone()));
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// An element of Q(zeta) with zeta = exp(2 pi i / order), stored in the
/// power basis `1, zeta, ..., zeta^(phi(order) - 1)`.
///
/// Binary operators panic when the orders differ; `checked_add` and
/// `checked_mul` report [`ExactError::OrderMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCyclotomic")]
pub struct Cyclotomic {
    order: u32,
    coords: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawCyclotomic {
    order: u32,
    coords: Vec<Rational>,
}

impl TryFrom<RawCyclotomic> for Cyclotomic {
    type Error = ExactError;

    fn try_from(raw: RawCyclotomic) -> Result<Self, Self::Error> {
        if raw.order == 0 {
            return Err(ExactError::OrderMismatch("order 0".into()));
        }
        let dim = cyclotomic_polynomial(raw.order).len() - 1;
        if raw.coords.len() != dim {
            return Err(ExactError::OrderMismatch(format!(
                "order {} needs {} coordinates, got {}",
                raw.order,
                dim,
                raw.coords.len()
            )));
        }
        Ok(Cyclotomic {
            order: raw.order,
            coords: raw.coords,
        })
    }
}

impl Cyclotomic {
    /// Canonical element from an arbitrary-length polynomial in zeta.
    pub fn from_poly(order: u32, poly: Vec<Rational>) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let mut poly = poly;
        if poly.len() < modulus.len() - 1 {
            poly.resize(modulus.len() - 1, Rational::zero());
        }
        Cyclotomic {
            order,
            coords: reduce(poly, &modulus),
        }
    }

    pub fn from_rational(order: u32, value: Rational) -> Self {
        Self::from_poly(order, vec![value])
    }

    pub fn zero(order: u32) -> Self {
        Self::from_rational(order, Rational::zero())
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// zeta^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Self::from_poly(order, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coords[1..]
            .iter()
            .all(Rational::is_zero)
            .then(|| self.coords[0].clone())
    }

    /// Finds `(c, k)` with `self = c * zeta^k`, `c` rational and `0 <= k < order`.
    /// Uses the smallest such `k` with `c > 0` when one exists.
    pub fn as_scaled_root(&self) -> Option<(Rational, u32)> {
        if self.is_zero() {
            return Some((Rational::zero(), 0));
        }
        let mut fallback = None;
        for k in 0..self.order {
            let shifted = self * &Cyclotomic::zeta_pow(self.order, -(k as i64));
            if let Some(c) = shifted.as_rational() {
                if c.is_positive() {
                    return Some((c, k));
                }
                fallback.get_or_insert((c, k));
            }
        }
        fallback
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Cyclotomic {
            order: self.order,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn checked_add(&self, other: &Cyclotomic) -> Result<Self, ExactError> {
        self.same_order(other)?;
        Ok(Cyclotomic {
            order: self.order,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Cyclotomic) -> Result<Self, ExactError> {
        self.same_order(other)?;
        let n = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.order, prod))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Cyclotomic::one(self.order);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Complex value under zeta -> exp(2 pi i / order).
    pub fn embed(&self) -> Complex64 {
        let step = 2.0 * std::f64::consts::PI / self.order as f64;
        self.coords
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(c.to_f64(), step * k as f64))
            .sum()
    }

    fn same_order(&self, other: &Cyclotomic) -> Result<(), ExactError> {
        if self.order != other.order {
            return Err(ExactError::OrderMismatch(format!(
                "{} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }
}

/// The exact value exp(i pi p / q) as an element of Q(zeta_order).
///
/// `order` must be even, `order = 2N`, and `q` must divide `N`.
pub fn root_of_unity(p: i64, q: u32, order: u32) -> Result<Cyclotomic, ExactError> {
    if q == 0 || !order.is_multiple_of(2) || !(order / 2).is_multiple_of(q) {
        return Err(ExactError::OrderMismatch(format!(
            "exp(i pi {p}/{q}) is not in Q(zeta_{order})"
        )));
    }
    let n = (order / 2) as i64;
    Ok(Cyclotomic::zeta_pow(order, p * (n / q as i64)))
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((c, k)) = self.as_scaled_root() {
            return match (c.is_one(), k) {
                (_, 0) => write!(f, "{c}"),
                (true, _) => write!(f, "z{}^{}", self.order, k),
                (false, _) => write!(f, "{c}*z{}^{}", self.order, k),
            };
        }
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                _ => format!("({c})*z{}^{k}", self.order),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({}; {:?})", self.order, self.coords)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(&Rational::from(-1))
    }
}
