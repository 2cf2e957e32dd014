//! Big-integer combinatorics behind the accuracy polynomials.
//!
//! Binomials and Catalan numbers are built multiplicatively with exact
//! division, so no factorial is ever materialized. On top of them sit the
//! signed `W` coefficients (a Catalan number times a row of Pascal's triangle
//! with alternating signs) and the `alpha` coefficients of the expanded
//! accuracy polynomial
//!
//! ```text
//! pi_{2a+1}(θ) = pi_{2a+2}(θ) = 1 - θ - Σ_{t=1}^{a+2} alpha(a, t) θ^{a+t}
//! ```
//!
//! `alpha(a, t)` is obtained by collecting powers of θ in the Catalan
//! (condensed) form of the polynomial:
//!
//! ```text
//! alpha(a, t) = Σ_{i=1}^{a} W(i, a+t-i) + 2(a+1) W(a+1, t-1)  [- 1 when a = 0, t = 1]
//! ```
//!
//! The commonly reproduced coefficient table prints `alpha(5, 1) = 426`; the
//! correct value is `462` (the printed value breaks the row-sum identity
//! `Σ_t alpha(a, t) = -1`). See [`PRINTED_ALPHA_5_1`].

mod rational;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use rational::{signum, ExactRational};

/// The misprinted value of `alpha(5, 1)` found in circulating copies of the
/// coefficient table. [`alpha_coefficient`] returns 462.
pub const PRINTED_ALPHA_5_1: i64 = 426;

/// Binomial coefficient `C(n, k)`, zero-extended: 0 when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i) * (n - i) is divisible by i + 1
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Catalan number `C_n = C(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n as i64) / (n + 1)
}

/// The first `count` Catalan numbers, via `C_{m+1} = C_m · 2(2m+1) / (m+2)`.
pub fn catalan_prefix(count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    let mut c = BigInt::one();
    for m in 0..count as u64 {
        out.push(c.clone());
        c = c * (2 * (2 * m + 1)) / (m + 2);
    }
    out
}

/// `W(i, j) = (-1)^j C(i, j) C_{i-1}` for `0 <= j <= i`, zero otherwise.
///
/// # Panics
/// When `i == 0`; the coefficient family starts at `i = 1`.
pub fn w_coefficient(i: u64, j: i64) -> BigInt {
    assert!(i >= 1, "W coefficients are defined for i >= 1");
    let magnitude = binomial(i, j) * catalan(i - 1);
    if j.rem_euclid(2) == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// Coefficient of `θ^{a+t}` in the expanded accuracy polynomial for the pair
/// `pi_{2a+1} = pi_{2a+2}`, for `1 <= t <= a + 2`.
pub fn alpha_coefficient(a: u64, t: u64) -> Result<BigInt> {
    if t < 1 || t > a + 2 {
        return Err(Error::Domain(format!(
            "alpha({a}, {t}): index t must lie in 1..={}",
            a + 2
        )));
    }
    let shift = (a + t) as i64;
    let mut acc: BigInt = (1..=a).map(|i| w_coefficient(i, shift - i as i64)).sum();
    acc += w_coefficient(a + 1, t as i64 - 1) * (2 * (a + 1));
    if a == 0 && t == 1 {
        acc -= 1;
    }
    Ok(acc)
}

/// All of `alpha(a, 1..=a+2)` in one pass over Pascal's triangle.
///
/// Equivalent to calling [`alpha_coefficient`] for every `t`, but `O(a^2)`
/// big-integer operations instead of `O(a^3)`.
pub fn alpha_row(a: u64) -> Vec<BigInt> {
    let len = (a + 2) as usize;
    let mut row = vec![BigInt::zero(); len];
    let catalans = catalan_prefix(a as usize + 1);
    let mut pascal: Vec<BigInt> = vec![BigInt::one()];

    for i in 1..=a + 1 {
        // advance to row i of Pascal's triangle
        let mut next = Vec::with_capacity(pascal.len() + 1);
        next.push(BigInt::one());
        for w in pascal.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        pascal = next;

        let cat = &catalans[(i - 1) as usize];
        if i <= a {
            // W(i, j) lands on t = i + j - a; only j in [a+1-i, i] hits 1..=a+2
            let lo = (a + 1).saturating_sub(i);
            for j in lo..=i {
                let term = &pascal[j as usize] * cat;
                let t = (i + j - a) as usize;
                if j % 2 == 1 {
                    row[t - 1] -= term;
                } else {
                    row[t - 1] += term;
                }
            }
        } else {
            let scale = BigInt::from(2 * (a + 1)) * cat;
            for j in 0..=i {
                let term = &pascal[j as usize] * &scale;
                let t = (j + 1) as usize;
                if j % 2 == 1 {
                    row[t - 1] -= term;
                } else {
                    row[t - 1] += term;
                }
            }
        }
    }
    if a == 0 {
        row[0] -= 1;
    }
    row
}

/// Rows of `alpha` coefficients keyed by `a`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoefficientTable {
    rows: BTreeMap<u64, Vec<BigInt>>,
}

impl CoefficientTable {
    /// Table with every row `a = 0..=a_max`.
    pub fn build(a_max: u64) -> Self {
        let rows = (0..=a_max).map(|a| (a, alpha_row(a))).collect();
        Self { rows }
    }

    /// Adds a row after checking the length and row-sum invariants.
    pub fn insert(&mut self, a: u64, row: Vec<BigInt>) -> Result<()> {
        if row.len() as u64 != a + 2 {
            return Err(Error::Domain(format!(
                "row {a} must have {} entries, got {}",
                a + 2,
                row.len()
            )));
        }
        let sum: BigInt = row.iter().sum();
        if sum != BigInt::from(-1) {
            return Err(Error::Domain(format!("row {a} sums to {sum}, expected -1")));
        }
        self.rows.insert(a, row);
        Ok(())
    }

    pub fn row(&self, a: u64) -> Option<&[BigInt]> {
        self.rows.get(&a).map(Vec::as_slice)
    }

    pub fn get(&self, a: u64, t: u64) -> Option<&BigInt> {
        self.row(a)?.get(t.checked_sub(1)? as usize)
    }

    pub fn max_a(&self) -> Option<u64> {
        self.rows.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &[BigInt])> {
        self.rows.iter().map(|(a, r)| (*a, r.as_slice()))
    }
}

/// Catalan generating function `G(z) = Σ C_k z^k = 2 / (1 + sqrt(1 - 4z))`
/// on its closed disc of convergence `0 <= z <= 1/4`.
pub fn catalan_gf(z: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&z) {
        return Err(Error::Domain(format!(
            "catalan_gf: z = {z} outside [0, 1/4]"
        )));
    }
    Ok(2.0 / (1.0 + (1.0 - 4.0 * z).max(0.0).sqrt()))
}

/// [`catalan_gf`] for an exact argument; the range check is exact.
pub fn catalan_gf_exact(z: &ExactRational) -> Result<f64> {
    if z.is_negative() || *z > ExactRational::ratio(1, 4) {
        return Err(Error::Domain(format!(
            "catalan_gf: z = {z} outside [0, 1/4]"
        )));
    }
    let one_minus_4z = (ExactRational::one() - ExactRational::from(4) * z).to_f64();
    Ok(2.0 / (1.0 + one_minus_4z.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, i| acc * i)
    }

    #[test]
    fn binomial_small_cases_and_zero_extension() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(6, 3), BigInt::from(4) * catalan(3));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_matches_factorial_oracle() {
        for n in 0..=40u64 {
            for k in 0..=n {
                let oracle = factorial(n) / (factorial(k) * factorial(n - k));
                assert_eq!(binomial(n, k as i64), oracle, "C({n},{k})");
            }
        }
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigInt::one());
        assert_eq!(catalan(4), BigInt::from(14));
        assert_eq!(catalan(10), BigInt::from(16796));
        // (2i-2)! / (i! (i-1)!) with C_{i-1}
        for i in 1..=25u64 {
            let oracle = factorial(2 * i - 2) / (factorial(i) * factorial(i - 1));
            assert_eq!(catalan(i - 1), oracle);
        }
        let prefix = catalan_prefix(31);
        for n in 0..=30u64 {
            assert_eq!(prefix[n as usize], catalan(n));
            let segregated = binomial(2 * n, n as i64) - binomial(2 * n, n as i64 + 1);
            assert_eq!(catalan(n), segregated);
        }
    }

    #[test]
    fn w_coefficient_examples() {
        assert_eq!(w_coefficient(2, 1), BigInt::from(-2));
        assert_eq!(w_coefficient(3, 0), BigInt::from(2));
        assert_eq!(w_coefficient(2, 3), BigInt::zero());
        assert_eq!(w_coefficient(2, -1), BigInt::zero());
    }

    #[test]
    fn w_antidiagonal_sums_vanish_after_first() {
        for t in 1..=50u64 {
            let sum: BigInt = (1..=t).map(|i| w_coefficient(i, (t - i) as i64)).sum();
            let expected = if t == 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            assert_eq!(sum, expected, "t = {t}");
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_coefficient(0, 1).unwrap(), BigInt::from(1));
        assert_eq!(alpha_coefficient(0, 2).unwrap(), BigInt::from(-2));
        assert_eq!(alpha_coefficient(3, 2).unwrap(), BigInt::from(-154));
        assert_eq!(alpha_coefficient(10, 12).unwrap(), BigInt::from(-369_512));
        assert_eq!(alpha_coefficient(5, 1).unwrap(), BigInt::from(462));
        assert!(alpha_coefficient(3, 0).is_err());
        assert!(alpha_coefficient(3, 6).is_err());
    }

    #[test]
    fn alpha_row_matches_pointwise_formula() {
        for a in 0..=25u64 {
            let row = alpha_row(a);
            assert_eq!(row.len() as u64, a + 2);
            for t in 1..=a + 2 {
                assert_eq!(
                    row[(t - 1) as usize],
                    alpha_coefficient(a, t).unwrap(),
                    "a={a} t={t}"
                );
            }
        }
    }

    #[test]
    fn alpha_rows_sum_to_minus_one_and_lead_with_central_binomial() {
        for a in 0..=40u64 {
            let row = alpha_row(a);
            assert_eq!(row.iter().sum::<BigInt>(), BigInt::from(-1), "a={a}");
            if a <= 10 {
                assert_eq!(row[0], binomial(2 * a + 1, a as i64), "a={a}");
            }
        }
    }

    #[test]
    fn table_rejects_bad_rows() {
        let mut table = CoefficientTable::build(3);
        assert_eq!(table.max_a(), Some(3));
        assert_eq!(table.get(3, 5), Some(&BigInt::from(40)));
        assert_eq!(table.get(3, 0), None);
        let mut misprint = alpha_row(5);
        misprint[0] = BigInt::from(PRINTED_ALPHA_5_1);
        assert!(table.insert(5, misprint).is_err());
        assert!(table.insert(5, vec![BigInt::from(-1)]).is_err());
        assert!(table.insert(5, alpha_row(5)).is_ok());
    }

    #[test]
    fn generating_function() {
        assert_eq!(catalan_gf(0.0).unwrap(), 1.0);
        assert_eq!(catalan_gf(0.25).unwrap(), 2.0);
        assert_eq!(catalan_gf_exact(&ExactRational::ratio(1, 4)).unwrap(), 2.0);
        assert!(catalan_gf(-0.01).is_err());
        assert!(catalan_gf(0.26).is_err());
        assert!(catalan_gf_exact(&ExactRational::ratio(26, 100)).is_err());

        // partial-sum oracle of the power series
        let z: f64 = 0.21;
        let partial: f64 = catalan_prefix(201)
            .iter()
            .enumerate()
            .map(|(k, c)| ExactRational::from_integer(c.clone()).to_f64() * z.powi(k as i32))
            .sum();
        assert!((catalan_gf(z).unwrap() - partial).abs() < 1e-9);
    }

    #[test]
    fn catalan_asymptotic_ratio() {
        let a = 2000u64;
        let ratio = ExactRational::new(catalan(a), num_traits::pow(BigInt::from(4), a as usize))
            .unwrap()
            .to_f64();
        let scaled = ratio * (std::f64::consts::PI * (a as f64).powi(3)).sqrt();
        assert!((scaled - 1.0).abs() < 0.01, "ratio {scaled}");
    }
}
