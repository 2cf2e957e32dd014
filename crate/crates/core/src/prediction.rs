//! Prediction arrays and Bayesian posterior prediction.
//!
//! A prediction method for a 0/1 sequence is a triangular array `phi[k][n]`:
//! after `k` trials with `n` ones, predict 1 with probability `phi[k][n]`.
//! Under a prior on θ the posterior probability of a correct prediction is
//! affine in θ, so it only depends on the posterior mean, and the best array
//! puts all its mass on whichever outcome has posterior mean above 1/2. For
//! priors symmetric about 1/2 that is the frequent-outcome array.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::accuracy::Theta;
use crate::combinatorics::{signum, ExactRational};
use crate::error::{Error, Result};

/// Trial count `k` and number of ones `n <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CountStatistic {
    k: u64,
    n: u64,
}

impl CountStatistic {
    pub fn new(k: u64, n: u64) -> Result<Self> {
        if n > k {
            return Err(Error::Domain(format!(
                "count n = {n} exceeds trials k = {k}"
            )));
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_tie(&self) -> bool {
        2 * self.n == self.k
    }
}

/// Triangular array of prediction probabilities; row `k` has `k + 1` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionArray {
    rows: Vec<Vec<ExactRational>>,
}

impl PredictionArray {
    pub fn new(rows: Vec<Vec<ExactRational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Domain(
                "prediction array needs at least row 0".into(),
            ));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(Error::Domain(format!(
                    "row {k} has {} entries, expected {}",
                    row.len(),
                    k + 1
                )));
            }
            if let Some(bad) = row.iter().find(|p| p.is_negative() || **p > 1) {
                return Err(Error::Domain(format!(
                    "row {k}: entry {bad} outside [0, 1]"
                )));
            }
        }
        Ok(Self { rows })
    }

    /// Predict the outcome seen more often; 1/2 on a tie, including `k = 0`.
    pub fn frequent_outcome(k_max: u64) -> Self {
        let rows = (0..=k_max)
            .map(|k| {
                (0..=k)
                    .map(|n| match (2 * n).cmp(&k) {
                        std::cmp::Ordering::Less => ExactRational::zero(),
                        std::cmp::Ordering::Equal => ExactRational::half(),
                        std::cmp::Ordering::Greater => ExactRational::one(),
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn k_max(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    pub fn get(&self, k: u64, n: u64) -> Option<&ExactRational> {
        self.rows.get(k as usize)?.get(n as usize)
    }

    pub fn row(&self, k: u64) -> Option<&[ExactRational]> {
        self.rows.get(k as usize).map(Vec::as_slice)
    }

    pub fn rows(&self) -> &[Vec<ExactRational>] {
        &self.rows
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows.iter().flatten().all(|p| p.is_zero() || *p == 1)
    }
}

/// Probability that a prediction made with `phi` is correct when the next
/// outcome is 1 with probability θ: `(1-θ)(1-phi) + θ phi = 1 - phi + (2 phi - 1) θ`.
///
/// `phi` must lie in `[0, 1]`.
pub fn conditional_accuracy(phi: &ExactRational, theta: &Theta) -> ExactRational {
    debug_assert!(
        !phi.is_negative() && *phi <= 1,
        "phi = {phi} outside [0, 1]"
    );
    let p = theta.value();
    p.complement() * phi.complement() + p * phi
}

/// A single support point of a discrete prior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub theta: Theta,
    pub weight: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriorKind {
    /// Beta(alpha, beta) with both shapes positive.
    Beta {
        alpha: ExactRational,
        beta: ExactRational,
    },
    /// Finite support; weights are non-negative and sum to exactly 1.
    Discrete(Vec<Atom>),
}

/// Prior distribution of the long-run proportion θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prior {
    kind: PriorKind,
}

/// Weights supplied for a discrete prior may miss 1 by at most this much;
/// they are then rescaled to sum to exactly 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

impl Prior {
    pub fn beta(alpha: ExactRational, beta: ExactRational) -> Result<Self> {
        if alpha <= 0 || beta <= 0 {
            return Err(Error::InvalidPrior(format!(
                "beta shapes must be positive, got ({alpha}, {beta})"
            )));
        }
        Ok(Self {
            kind: PriorKind::Beta { alpha, beta },
        })
    }

    pub fn discrete(atoms: Vec<(Theta, ExactRational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidPrior("discrete prior has no atoms".into()));
        }
        if let Some((t, w)) = atoms.iter().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidPrior(format!(
                "atom {t} has negative weight {w}"
            )));
        }
        let total: ExactRational = atoms.iter().map(|(_, w)| w.clone()).sum();
        if (total.to_f64() - 1.0).abs() > WEIGHT_SUM_TOLERANCE || total.is_zero() {
            return Err(Error::InvalidPrior(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let atoms = atoms
            .into_iter()
            .map(|(theta, w)| Atom {
                theta,
                weight: w / &total,
            })
            .collect();
        Ok(Self {
            kind: PriorKind::Discrete(atoms),
        })
    }

    /// All mass at a single θ.
    pub fn point_mass(theta: Theta) -> Self {
        Self {
            kind: PriorKind::Discrete(vec![Atom {
                theta,
                weight: ExactRational::one(),
            }]),
        }
    }

    pub fn kind(&self) -> &PriorKind {
        &self.kind
    }

    /// Invariant under θ ↦ 1 - θ.
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            PriorKind::Beta { alpha, beta } => alpha == beta,
            PriorKind::Discrete(_) => {
                let masses = self.atom_masses();
                masses
                    .iter()
                    .all(|(theta, w)| masses.get(&theta.complement()) == Some(w))
            }
        }
    }

    /// Symmetric and not concentrated at 1/2.
    pub fn is_almost_uniform(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        match &self.kind {
            PriorKind::Beta { .. } => true,
            PriorKind::Discrete(_) => self
                .atom_masses()
                .keys()
                .any(|theta| *theta != Theta::half()),
        }
    }

    /// Merged positive masses per distinct θ.
    fn atom_masses(&self) -> BTreeMap<Theta, ExactRational> {
        let PriorKind::Discrete(atoms) = &self.kind else {
            return BTreeMap::new();
        };
        let mut merged: BTreeMap<Theta, ExactRational> = BTreeMap::new();
        for atom in atoms.iter().filter(|a| !a.weight.is_zero()) {
            let slot = merged
                .entry(atom.theta.clone())
                .or_insert_with(ExactRational::zero);
            *slot = &*slot + &atom.weight;
        }
        merged
    }

    pub fn mean(&self) -> ExactRational {
        match &self.kind {
            PriorKind::Beta { alpha, beta } => alpha / (alpha + beta),
            PriorKind::Discrete(atoms) => atoms.iter().map(|a| a.theta.value() * &a.weight).sum(),
        }
    }
}

impl fmt::Display for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PriorKind::Beta { alpha, beta } => write!(f, "beta:{alpha},{beta}"),
            PriorKind::Discrete(atoms) => {
                f.write_str("discrete:")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}={}", a.theta, a.weight)?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Prior {
    type Err = Error;

    /// `beta:ALPHA,BETA` or `discrete:THETA=WEIGHT,THETA=WEIGHT,...`; numbers
    /// are decimals or `p/q` fractions.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidPrior(format!("{s:?}: {why}"));
        let (kind, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| bad("missing 'kind:'"))?;
        match kind.trim() {
            "beta" => {
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| bad("expected beta:ALPHA,BETA"))?;
                Prior::beta(a.parse()?, b.parse()?)
            }
            "discrete" => {
                let atoms = body
                    .split(',')
                    .map(|pair| {
                        let (t, w) = pair
                            .split_once('=')
                            .ok_or_else(|| bad("expected THETA=WEIGHT"))?;
                        Ok((t.parse::<Theta>()?, w.parse::<ExactRational>()?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Prior::discrete(atoms)
            }
            other => Err(bad(&format!("unknown prior kind {other:?}"))),
        }
    }
}

/// `E[θ | n ones in k trials]`.
///
/// Beta priors use the conjugate update `(alpha + n) / (alpha + beta + k)`;
/// discrete priors use the exact Bayes ratio over atoms (the binomial
/// coefficient cancels).
pub fn posterior_mean(prior: &Prior, stat: CountStatistic) -> Result<ExactRational> {
    let (k, n) = (stat.k(), stat.n());
    match prior.kind() {
        PriorKind::Beta { alpha, beta } => Ok((alpha + ExactRational::from(n as i64))
            / (alpha + beta + ExactRational::from(k as i64))),
        PriorKind::Discrete(atoms) => {
            let mut evidence = ExactRational::zero();
            let mut first_moment = ExactRational::zero();
            for atom in atoms {
                let p = atom.theta.value();
                let likelihood = p.pow(n as u32) * p.complement().pow((k - n) as u32);
                let w = likelihood * &atom.weight;
                first_moment = first_moment + p * &w;
                evidence = evidence + w;
            }
            if evidence.is_zero() {
                return Err(Error::ImpossibleEvidence { k, n });
            }
            Ok(first_moment / evidence)
        }
    }
}

/// Posterior probability that a prediction made with `phi` is correct.
/// Because [`conditional_accuracy`] is affine in θ this is the conditional
/// accuracy at the posterior mean.
pub fn posterior_correct_probability(
    phi: &ExactRational,
    prior: &Prior,
    stat: CountStatistic,
) -> Result<ExactRational> {
    let mean = Theta::new(posterior_mean(prior, stat)?)?;
    Ok(conditional_accuracy(phi, &mean))
}

/// The prediction array maximizing the posterior probability of a correct
/// prediction: 1 where the posterior mean exceeds 1/2, 0 where it is below,
/// 1/2 at exact equality.
pub fn optimal_array(prior: &Prior, k_max: u64) -> Result<PredictionArray> {
    let half = ExactRational::half();
    let rows = (0..=k_max)
        .map(|k| {
            (0..=k)
                .map(|n| {
                    let mean = posterior_mean(prior, CountStatistic { k, n })?;
                    Ok(match signum(&(mean - &half)) {
                        1 => ExactRational::one(),
                        -1 => ExactRational::zero(),
                        _ => half.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PredictionArray::new(rows)
}

/// `var(θ)` under the prior, which equals `cov(x_i, x_j)` for any two
/// distinct trials of the exchangeable sequence; never negative.
pub fn prior_covariance(prior: &Prior) -> ExactRational {
    match prior.kind() {
        PriorKind::Beta { alpha, beta } => {
            let s = alpha + beta;
            alpha * beta / (&s * &s * (s + ExactRational::one()))
        }
        PriorKind::Discrete(atoms) => {
            let mean = prior.mean();
            let second: ExactRational = atoms
                .iter()
                .map(|a| a.theta.value().pow(2) * &a.weight)
                .sum();
            second - &mean * &mean
        }
    }
}
