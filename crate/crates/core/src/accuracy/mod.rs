//! The accuracy function of the frequent-outcome rule.
//!
//! `pi_k(θ)` is the probability, given the long-run proportion θ, that the
//! rule predicts `x_{k+1}` correctly after watching `k` trials. It is a
//! polynomial in θ and satisfies `pi_{2a+1} = pi_{2a+2}`, so it moves in
//! steps of two. Five evaluation routes are provided and must agree exactly:
//!
//! | route | construction |
//! |-------|--------------|
//! | [`accuracy_direct`] | sum over counts of per-count accuracy times the binomial pmf |
//! | [`accuracy_t_table`] | row-by-row recursion over the weighted pmf table |
//! | [`accuracy_recursive`] | `1/2 + Σ H_i(θ)` |
//! | [`accuracy_condensed`] | Catalan form in `u = θ(1-θ)` |
//! | [`accuracy_expanded`] | integer coefficients in θ from [`PiPolynomial`] |
//!
//! With no trials observed (`k = 0`) the rule is a fair coin flip, so
//! `pi_0 = 1/2`.

mod polynomial;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::combinatorics::{binomial, catalan_prefix, ExactRational};
use crate::error::{Error, Result};

pub use polynomial::{cached_alpha_row, PiPolynomial};

/// A long-run proportion, `0 <= θ <= 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theta(ExactRational);

impl Theta {
    pub fn new(value: ExactRational) -> Result<Self> {
        if value.is_negative() || value > 1 {
            return Err(Error::Domain(format!("theta = {value} outside [0, 1]")));
        }
        Ok(Self(value))
    }

    /// Shorthand for literals; panics outside `[0, 1]`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::new(ExactRational::ratio(numer, denom)).expect("theta literal outside [0, 1]")
    }

    /// Exact value of a double; `None` for NaN or out-of-range input.
    pub fn from_f64(value: f64) -> Option<Self> {
        ExactRational::from_f64(value).and_then(|v| Self::new(v).ok())
    }

    pub fn half() -> Self {
        Self(ExactRational::half())
    }

    pub fn value(&self) -> &ExactRational {
        &self.0
    }

    pub fn complement(&self) -> Theta {
        Theta(self.0.complement())
    }

    /// `θ(1 - θ)`, the natural variable of the condensed form (at most 1/4).
    pub fn spread(&self) -> ExactRational {
        &self.0 * self.0.complement()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Debug for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Theta({})", self.0)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Theta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

/// Pair index `a` with `pi_k = pi_{2a+1} = pi_{2a+2}`, for `k >= 1`.
fn pair_index(k: u64) -> u64 {
    (k - 1) / 2
}

fn from_big(value: BigInt) -> ExactRational {
    ExactRational::from_integer(value)
}

/// `Bin(n | k, θ) = C(k, n) θ^n (1-θ)^(k-n)`.
pub fn bin_pmf(n: u64, k: u64, theta: &Theta) -> Result<ExactRational> {
    if n > k {
        return Err(Error::Domain(format!("bin_pmf: n = {n} exceeds k = {k}")));
    }
    let p = theta.value();
    Ok(from_big(binomial(k, n as i64)) * p.pow(n as u32) * p.complement().pow((k - n) as u32))
}

/// Accuracy of the frequent-outcome prediction after observing `n` ones in
/// `k` trials: `1 - θ` when zeros lead, `θ` when ones lead, `1/2` on a tie
/// (including `k = 0`).
pub fn per_step_accuracy(k: u64, n: u64, theta: &Theta) -> Result<ExactRational> {
    if n > k {
        return Err(Error::Domain(format!(
            "per_step_accuracy: n = {n} exceeds k = {k}"
        )));
    }
    Ok(match (2 * n).cmp(&k) {
        std::cmp::Ordering::Less => theta.value().complement(),
        std::cmp::Ordering::Equal => ExactRational::half(),
        std::cmp::Ordering::Greater => theta.value().clone(),
    })
}

/// Increment from `pi_{2a}` to `pi_{2a+1}`:
/// `H_a(θ) = C(2a, a) (u^a / 2 - 2 u^(a+1))` with `u = θ(1-θ)`.
///
/// Non-negative on `[0, 1]` because `u <= 1/4`.
pub fn h_function(a: u64, theta: &Theta) -> ExactRational {
    let u = theta.spread();
    let ua = u.pow(a as u32);
    let bracket = ExactRational::half() - ExactRational::from(2) * &u;
    from_big(binomial(2 * a, a as i64)) * ua * bracket
}

/// `pi_k(θ) = Σ_n pi_{k,n}(θ) Bin(n | k, θ)`.
pub fn accuracy_direct(k: u64, theta: &Theta) -> ExactRational {
    (0..=k)
        .map(|n| {
            per_step_accuracy(k, n, theta).expect("n <= k") * bin_pmf(n, k, theta).expect("n <= k")
        })
        .sum()
}

/// Builds the table `T_{k,n} = pi_{k,n}(θ) Bin(n | k, θ)` one row at a time
/// from `T_{0,0} = 1/2` and returns the row sum.
///
/// Moving from row `k` to `k+1`, a cell is fed by its upper-left neighbour
/// with weight θ and by its upper neighbour with weight `1 - θ`; a tie cell
/// (`2n = k`) passes on `2θ²` and `2(1-θ)²` instead, which both removes the
/// tie's factor 1/2 and applies the accuracy of the now-decided count.
pub fn accuracy_t_table(k: u64, theta: &Theta) -> ExactRational {
    // With θ = p/d every weight is written over d², so row k holds integer
    // numerators over the common denominator 2 d^(2k).
    let d = theta.value().denom().clone();
    let p = theta.value().numer().clone();
    let q = &d - &p;
    let up = &p * &d;
    let down = &q * &d;
    let tie_up = BigInt::from(2) * &p * &p;
    let tie_down = BigInt::from(2) * &q * &q;

    let mut row = vec![BigInt::from(1)];
    for step in 0..k {
        let mut next = vec![BigInt::from(0); row.len() + 1];
        for (n, cell) in row.iter().enumerate() {
            let tie = 2 * n as u64 == step;
            let (u, w) = if tie {
                (&tie_up, &tie_down)
            } else {
                (&up, &down)
            };
            next[n + 1] += u * cell;
            next[n] += w * cell;
        }
        row = next;
    }
    let total: BigInt = row.into_iter().sum();
    let scale = BigInt::from(2) * num_traits::pow(d, 2 * k as usize);
    ExactRational::new(total, scale).expect("denominator is positive")
}

/// `pi_k = 1/2 + Σ_{i=0}^{a} H_i(θ)` with `a = ceil(k/2) - 1`; `pi_0 = 1/2`.
pub fn accuracy_recursive(k: u64, theta: &Theta) -> ExactRational {
    let mut acc = ExactRational::half();
    if k == 0 {
        return acc;
    }
    for i in 0..=pair_index(k) {
        acc = acc + h_function(i, theta);
    }
    acc
}

/// Catalan form: `1 - Σ_{i=1}^{a} C_{i-1} u^i - 2 C(2a, a) u^(a+1)` with
/// `u = θ(1-θ)`. Defined for `k >= 1`.
pub fn accuracy_condensed(k: u64, theta: &Theta) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::Domain(
            "accuracy_condensed is defined for k >= 1".to_string(),
        ));
    }
    let a = pair_index(k);
    let u = theta.spread();
    let catalans = catalan_prefix(a as usize);
    let mut power = ExactRational::one();
    let mut acc = ExactRational::one();
    for c in catalans {
        power = power * &u;
        acc = acc - from_big(c) * &power;
    }
    let tail = ExactRational::from(2) * from_big(binomial(2 * a, a as i64)) * power * &u;
    Ok(acc - tail)
}

/// Integer-coefficient form `1 - θ - Σ alpha(a, i) θ^(a+i)`. Defined for `k >= 1`.
pub fn accuracy_expanded(k: u64, theta: &Theta) -> Result<ExactRational> {
    let poly = PiPolynomial::for_trials(k)
        .ok_or_else(|| Error::Domain("accuracy_expanded is defined for k >= 1".to_string()))?;
    Ok(poly.evaluate(theta.value()))
}

/// Accuracy attainable with θ known: `max(θ, 1 - θ)`, the limit of `pi_k`.
pub fn ideal_accuracy(theta: &Theta) -> ExactRational {
    ExactRational::max_of(theta.value(), &theta.value().complement())
}

/// Catalan terms `C_{i-1} u^i` for `i = 1..=count`, generated by the ratio
/// `C_i / C_{i-1} = 2(2i-1)/(i+1)` so nothing overflows for large `i`.
fn catalan_terms_f64(u: f64, count: u64) -> Vec<f64> {
    let mut terms = Vec::with_capacity(count as usize);
    let mut term = u;
    for i in 1..=count {
        terms.push(term);
        term *= u * (2.0 * (2 * i - 1) as f64) / (i + 1) as f64;
    }
    terms
}

/// `Σ_{i=1}^{a} C_{i-1} (θ(1-θ))^i`, which tends to `min(θ, 1-θ)` as `a` grows.
pub fn condensed_partial_sum(a: u64, theta: f64) -> f64 {
    let u = theta * (1.0 - theta);
    // smallest terms first
    catalan_terms_f64(u, a).iter().rev().sum()
}

/// Floating-point `pi_k(θ)` through the condensed form in `u = θ(1-θ)`.
///
/// Every term is non-negative and bounded by 1/4, so there is no
/// cancellation; agrees with the exact routes to within 1e-12 for `k <= 60`.
/// (The expanded integer form is unusable in floating point beyond small
/// `k`: its coefficients alternate in sign and grow like `4^a`.)
pub fn accuracy_f64(k: u64, theta: f64) -> f64 {
    if k == 0 {
        return 0.5;
    }
    let a = pair_index(k);
    let u = theta * (1.0 - theta);
    let mut terms = catalan_terms_f64(u, a + 1);
    // last generated term is C_a u^(a+1); the tail is 2(a+1) C_a u^(a+1)
    let last = terms.pop().expect("a + 1 >= 1 terms");
    let tail = 2.0 * (a + 1) as f64 * last;
    let body: f64 = terms.iter().rev().sum();
    1.0 - (tail + body)
}

/// One row of an accuracy curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub k: u64,
    pub pi: ExactRational,
    pub ideal: ExactRational,
    /// `ideal - pi`, non-negative.
    pub gap: ExactRational,
}

/// `pi_k(θ)` against the ideal accuracy for `k = 1..=k_max`, accumulated one
/// `H_a` per pair of rows.
pub fn accuracy_curve(theta: &Theta, k_max: u64) -> Vec<CurvePoint> {
    let ideal = ideal_accuracy(theta);
    let mut pi = ExactRational::half();
    let mut out = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        if k % 2 == 1 {
            pi = pi + h_function(pair_index(k), theta);
        }
        out.push(CurvePoint {
            k,
            pi: pi.clone(),
            ideal: ideal.clone(),
            gap: &ideal - &pi,
        });
    }
    out
}

/// Result of [`threshold_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// Smallest `k` with `pi_k(θ) >= target`.
    Reached(u64),
    /// `target` is at or beyond the limit `max(θ, 1-θ)` and no finite `k` attains it.
    Unreachable,
}

impl Threshold {
    pub fn trials(self) -> Option<u64> {
        match self {
            Threshold::Reached(k) => Some(k),
            Threshold::Unreachable => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Reached(k) => write!(f, "{k}"),
            Threshold::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// Smallest number of observed trials after which the frequent-outcome rule
/// predicts correctly with probability at least `target`.
///
/// `pi_k` is non-decreasing in `k` and changes only at odd `k`, so the scan
/// adds one `H_a` per pair. For `θ` strictly inside `(0, 1)` and `θ != 1/2`
/// the limit `max(θ, 1-θ)` is approached but never attained, so a target at
/// or above it is unreachable.
pub fn threshold_k(theta: &Theta, target: &ExactRational) -> Result<Threshold> {
    if target.is_negative() || *target > 1 {
        return Err(Error::Domain(format!("target = {target} outside [0, 1]")));
    }
    if *target <= ExactRational::half() {
        return Ok(Threshold::Reached(0));
    }
    let p = theta.value();
    if p.is_zero() || *p == 1 {
        // pi_1 = 1 already
        return Ok(Threshold::Reached(1));
    }
    if *target >= ideal_accuracy(theta) {
        return Ok(Threshold::Unreachable);
    }

    // term_a = C(2a, a) u^a, so H_a = term_a (1/2 - 2u)
    let u = theta.spread();
    let bracket = ExactRational::half() - ExactRational::from(2) * &u;
    let mut term = ExactRational::one();
    let mut pi = ExactRational::half();
    let mut a: u64 = 0;
    loop {
        pi = pi + &term * &bracket;
        if pi >= *target {
            return Ok(Threshold::Reached(2 * a + 1));
        }
        // C(2a+2, a+1) = C(2a, a) * 2(2a+1)/(a+1)
        term = term * &u * ExactRational::new(2 * (2 * a + 1), a + 1)?;
        a += 1;
    }
}

/// The independent evaluation routes for `pi_k(θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccuracyPath {
    Direct,
    TTable,
    Recursive,
    Condensed,
    Expanded,
}

impl AccuracyPath {
    pub const ALL: [AccuracyPath; 5] = [
        AccuracyPath::Direct,
        AccuracyPath::TTable,
        AccuracyPath::Recursive,
        AccuracyPath::Condensed,
        AccuracyPath::Expanded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AccuracyPath::Direct => "direct",
            AccuracyPath::TTable => "ttable",
            AccuracyPath::Recursive => "recursive",
            AccuracyPath::Condensed => "condensed",
            AccuracyPath::Expanded => "expanded",
        }
    }

    /// Whether the route is defined at `k` (the polynomial forms need `k >= 1`).
    pub fn supports(self, k: u64) -> bool {
        k >= 1 || !matches!(self, AccuracyPath::Condensed | AccuracyPath::Expanded)
    }

    pub fn evaluate(self, k: u64, theta: &Theta) -> Result<ExactRational> {
        match self {
            AccuracyPath::Direct => Ok(accuracy_direct(k, theta)),
            AccuracyPath::TTable => Ok(accuracy_t_table(k, theta)),
            AccuracyPath::Recursive => Ok(accuracy_recursive(k, theta)),
            AccuracyPath::Condensed => accuracy_condensed(k, theta),
            AccuracyPath::Expanded => accuracy_expanded(k, theta),
        }
    }
}

impl fmt::Display for AccuracyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AccuracyPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AccuracyPath::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown accuracy path {s:?}")))
    }
}
