//! Expanded integer form of the accuracy polynomials and the shared
//! coefficient cache.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{alpha_row, ExactRational};

/// Rows of alpha coefficients computed so far, indexed by `a`.
static ALPHA_CACHE: OnceLock<RwLock<Vec<Arc<Vec<BigInt>>>>> = OnceLock::new();

/// `alpha(a, 1..=a+2)`, computed once per process and shared afterwards.
///
/// Rows are filled in increasing order of `a`; concurrent callers may both
/// compute a missing row but only the first insertion is kept, and every row
/// is a pure function of `a`, so readers always see the same values.
pub fn cached_alpha_row(a: u64) -> Arc<Vec<BigInt>> {
    let cache = ALPHA_CACHE.get_or_init(|| RwLock::new(Vec::new()));
    let idx = a as usize;
    if let Some(row) = cache.read().expect("alpha cache poisoned").get(idx) {
        return Arc::clone(row);
    }
    let mut rows = cache.write().expect("alpha cache poisoned");
    while rows.len() <= idx {
        let next = rows.len() as u64;
        rows.push(Arc::new(alpha_row(next)));
    }
    Arc::clone(&rows[idx])
}

/// Dense integer polynomial for the pair `pi_{2a+1} = pi_{2a+2}`.
///
/// Coefficients are stored by ascending power of θ: the constant term is 1,
/// the linear term is -1 (or -2 for `a = 0`, where `alpha(0, 1)` folds into
/// it) and the powers `a+1 ..= 2a+2` carry `-alpha(a, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiPolynomial {
    a: u64,
    coefficients: Vec<BigInt>,
}

impl PiPolynomial {
    pub fn for_pair(a: u64) -> Self {
        let alpha = cached_alpha_row(a);
        let degree = (2 * a + 2) as usize;
        let mut coefficients = vec![BigInt::zero(); degree + 1];
        coefficients[0] = BigInt::one();
        coefficients[1] = BigInt::from(-1);
        for (i, alpha_i) in alpha.iter().enumerate() {
            coefficients[a as usize + 1 + i] -= alpha_i;
        }
        Self { a, coefficients }
    }

    /// Polynomial for trial count `k >= 1`; `None` for `k = 0`, where the
    /// accuracy is the constant 1/2 and no pair index exists.
    pub fn for_trials(k: u64) -> Option<Self> {
        (k >= 1).then(|| Self::for_pair((k - 1) / 2))
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficient of `θ^p` for `p = 0..=degree`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn constant(&self) -> &BigInt {
        &self.coefficients[0]
    }

    pub fn linear(&self) -> &BigInt {
        &self.coefficients[1]
    }

    /// `-alpha(a, i)` for `i = 1..=a+2`, attached to `θ^{a+i}`. For `a = 0`
    /// the first entry shares its power with the linear term.
    pub fn tail(&self) -> Vec<BigInt> {
        cached_alpha_row(self.a).iter().map(|x| -x).collect()
    }

    /// Exact Horner evaluation.
    pub fn evaluate(&self, theta: &ExactRational) -> ExactRational {
        self.coefficients
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| {
                acc * theta + ExactRational::from_integer(c.clone())
            })
    }
}
