use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{cyclotomic_polynomial, gamma_ratio, Cyclotomic, Lanczos, Rational};

pub const DEFAULT_SEED: u64 = 0x5eed_2011;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const GAMMA_TOLERANCE: f64 = 1e-9;

/// Cyclotomic orders whose defining identities are checked exactly.
const IDENTITY_ORDERS: [u32; 8] = [2, 3, 4, 5, 6, 10, 12, 30];
const ALGEBRA_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestResult {
    pub gamma_cases: usize,
    pub max_relative_error: f64,
    /// `(a, b, exact, float)` for each case above tolerance.
    pub gamma_failures: Vec<(Rational, Rational, f64, f64)>,
    pub identities_checked: usize,
    pub identity_failures: Vec<String>,
}

impl SelftestResult {
    pub fn passed(&self) -> bool {
        self.gamma_failures.is_empty() && self.identity_failures.is_empty()
    }
}

/// `(a, b)` pairs with `a - b` an integer in [-12, 12] and neither argument
/// a pole of Gamma. The same seed always gives the same pairs.
pub fn gamma_samples(seed: u64, n: usize) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let den: i64 = rng.random_range(1..=12);
        let num: i64 = rng.random_range(-20 * den..=20 * den);
        let shift: i64 = rng.random_range(-12..=12);
        let b = Rational::frac(num, den);
        let a = &b + &Rational::from(shift);
        let pole = |x: &Rational| x.is_integer() && !x.is_positive();
        if pole(&a) || pole(&b) {
            continue;
        }
        out.push((a, b));
    }
    out
}

fn random_element(rng: &mut ChaCha8Rng, order: u32) -> Cyclotomic {
    let degree = cyclotomic_polynomial(order).len() - 1;
    let poly = (0..degree)
        .map(|_| Rational::frac(rng.random_range(-9..=9), rng.random_range(1..=6)))
        .collect();
    Cyclotomic::from_poly(order, poly)
}

fn is_one(x: &Cyclotomic) -> bool {
    *x == Cyclotomic::one(x.order())
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + b.norm())
}

fn check_identities(rng: &mut ChaCha8Rng, failures: &mut Vec<String>) -> usize {
    let mut checked = 0;
    let mut check = |ok: bool, what: String| {
        checked += 1;
        if !ok {
            failures.push(what);
        }
    };

    for n in IDENTITY_ORDERS {
        let z = Cyclotomic::zeta_pow(n, 1);
        check(is_one(&z.pow(n)), format!("z{n}^{n} != 1"));
        let sum = (0..n as i64).fold(Cyclotomic::zero(n), |acc, k| {
            &acc + &Cyclotomic::zeta_pow(n, k)
        });
        check(sum.is_zero(), format!("sum of z{n}^k is {sum}"));
        let phi = cyclotomic_polynomial(n);
        let at_zeta = phi.iter().rev().fold(Cyclotomic::zero(n), |acc, c| {
            &(&acc * &z) + &Cyclotomic::from_rational(n, Rational::from(c.clone()))
        });
        check(at_zeta.is_zero(), format!("Phi_{n}(z{n}) is {at_zeta}"));
        for k in -(n as i64)..=(n as i64) {
            let inv = &Cyclotomic::zeta_pow(n, k) * &Cyclotomic::zeta_pow(n, -k);
            check(is_one(&inv), format!("z{n}^{k} * z{n}^{} != 1", -k));
        }
    }

    let n = 10;
    for i in 0..ALGEBRA_SAMPLES {
        let (a, b, c) = (
            random_element(rng, n),
            random_element(rng, n),
            random_element(rng, n),
        );
        check(
            &(&a * &b) * &c == &a * &(&b * &c),
            format!("associativity, sample {i}"),
        );
        check(
            &a * &(&b + &c) == &(&a * &b) + &(&a * &c),
            format!("distributivity, sample {i}"),
        );
        check(&a * &b == &b * &a, format!("commutativity, sample {i}"));
        check(
            close((&a * &b).embed(), a.embed() * b.embed()),
            format!("embedding is not multiplicative, sample {i}"),
        );
    }
    checked
}

/// Exact Gamma ratios against the floating oracle, then exact cyclotomic
/// identities and randomized field-axiom checks.
pub fn run_selftest(seed: u64, samples: usize, oracle: &Lanczos) -> SelftestResult {
    let mut max_relative_error = 0.0f64;
    let mut gamma_failures = Vec::new();
    for (a, b) in gamma_samples(seed, samples) {
        let exact = gamma_ratio(&a, &b).expect("samples avoid poles").to_f64();
        let float = match (oracle.gamma(a.to_f64()), oracle.gamma(b.to_f64())) {
            (Ok(ga), Ok(gb)) => ga / gb,
            _ => f64::NAN,
        };
        let err = ((float - exact) / exact).abs();
        if err.is_nan() || err > GAMMA_TOLERANCE {
            gamma_failures.push((a, b, exact, float));
        }
        if err.is_nan() {
            max_relative_error = f64::INFINITY;
        } else {
            max_relative_error = max_relative_error.max(err);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut identity_failures = Vec::new();
    let identities_checked = check_identities(&mut rng, &mut identity_failures);

    SelftestResult {
        gamma_cases: samples,
        max_relative_error,
        gamma_failures,
        identities_checked,
        identity_failures,
    }
}
