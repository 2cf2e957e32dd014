//! Seeded Monte Carlo oracle.
//!
//! Each replication draws its own θ (or uses a fixed one), generates a 0/1
//! sequence one trial at a time, and scores the prediction the array makes
//! for every next trial. Replication `r` reads only from ChaCha8 stream `r`
//! of the master seed, and per-step results are integer counts, so the report
//! is bit-identical however rayon schedules the work.
//!
//! Draw order inside a replication: θ (prior sources only), then for each
//! step the prediction draw (only when `0 < phi < 1`) followed by the outcome.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::accuracy::Theta;
use crate::error::{Error, Result};
use crate::prediction::{PredictionArray, Prior, PriorKind};

/// Where each replication's θ comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaSource {
    Fixed(Theta),
    /// θ redrawn from the prior at the start of every replication.
    Prior(Prior),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub theta_source: ThetaSource,
    /// Number of predictions per replication (steps `k = 0..horizon`).
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(
        theta_source: ThetaSource,
        horizon: u64,
        replications: u64,
        seed: u64,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        Ok(Self {
            theta_source,
            horizon,
            replications,
            seed,
        })
    }
}

/// Outcome of predicting `x_{k+1}` across all replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub k: u64,
    /// Replications in which the prediction of `x_{k+1}` was correct.
    pub hits: u64,
    pub trials: u64,
    /// Replications in which `x_{k+1} = 1`.
    pub ones: u64,
    pub estimate: f64,
    /// Plug-in binomial standard error `sqrt(p(1-p)/trials)`.
    pub stderr: f64,
}

impl StepStats {
    fn from_counts(k: u64, hits: u64, ones: u64, trials: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        Self {
            k,
            hits,
            trials,
            ones,
            estimate,
            stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        }
    }

    /// Fraction of replications with `x_{k+1} = 1`, and its standard error.
    pub fn ones_frequency(&self) -> (f64, f64) {
        let p = self.ones as f64 / self.trials as f64;
        (p, (p * (1.0 - p) / self.trials as f64).sqrt())
    }

    /// `(estimate - expected) / stderr`; 0 when both the gap and stderr are 0.
    pub fn z_score(&self, expected: f64) -> f64 {
        let gap = self.estimate - expected;
        if gap == 0.0 {
            0.0
        } else {
            gap / self.stderr
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub per_step: Vec<StepStats>,
}

#[derive(Debug, Clone, Copy)]
enum Phi {
    Zero,
    One,
    Mixed(f64),
}

enum ThetaSampler {
    Fixed(f64),
    Beta(rand_distr::Beta<f64>),
    Discrete {
        thetas: Vec<f64>,
        index: WeightedIndex<f64>,
    },
}

impl ThetaSampler {
    fn new(source: &ThetaSource) -> Result<Self> {
        match source {
            ThetaSource::Fixed(theta) => Ok(Self::Fixed(theta.to_f64())),
            ThetaSource::Prior(prior) => Self::for_prior(prior),
        }
    }

    fn for_prior(prior: &Prior) -> Result<Self> {
        match prior.kind() {
            PriorKind::Beta { alpha, beta } => rand_distr::Beta::new(alpha.to_f64(), beta.to_f64())
                .map(Self::Beta)
                .map_err(|e| Error::Config(format!("beta sampler: {e}"))),
            PriorKind::Discrete(atoms) => {
                let thetas = atoms.iter().map(|a| a.theta.to_f64()).collect();
                let index = WeightedIndex::new(atoms.iter().map(|a| a.weight.to_f64()))
                    .map_err(|e| Error::Config(format!("discrete sampler: {e}")))?;
                Ok(Self::Discrete { thetas, index })
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Fixed(theta) => *theta,
            Self::Beta(dist) => dist.sample(rng),
            Self::Discrete { thetas, index } => thetas[index.sample(rng)],
        }
    }
}

/// Independent stream for replication `rep` of the master seed.
fn replication_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.random::<f64>() < p
}

/// Empirical accuracy of `array` at every step `k = 0..horizon`.
pub fn simulate_accuracy(
    config: &SimulationConfig,
    array: &PredictionArray,
) -> Result<SimulationReport> {
    if array.k_max() + 1 < config.horizon {
        return Err(Error::Config(format!(
            "prediction array covers rows 0..={}, horizon needs 0..={}",
            array.k_max(),
            config.horizon - 1
        )));
    }
    let horizon = config.horizon as usize;
    let phis: Vec<Vec<Phi>> = array.rows()[..horizon]
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    if p.is_zero() {
                        Phi::Zero
                    } else if *p == 1 {
                        Phi::One
                    } else {
                        Phi::Mixed(p.to_f64())
                    }
                })
                .collect()
        })
        .collect();
    let sampler = ThetaSampler::new(&config.theta_source)?;
    let seed = config.seed;

    // per step: [hits, ones]
    let counts = (0..config.replications)
        .into_par_iter()
        .fold(
            || vec![[0u64; 2]; horizon],
            |mut acc, rep| {
                let mut rng = replication_rng(seed, rep);
                let theta = sampler.draw(&mut rng);
                let mut n = 0usize;
                for (k, slot) in acc.iter_mut().enumerate() {
                    let predict_one = match phis[k][n] {
                        Phi::Zero => false,
                        Phi::One => true,
                        Phi::Mixed(p) => bernoulli(&mut rng, p),
                    };
                    let outcome = bernoulli(&mut rng, theta);
                    slot[0] += u64::from(predict_one == outcome);
                    slot[1] += u64::from(outcome);
                    n += usize::from(outcome);
                }
                acc
            },
        )
        .reduce(
            || vec![[0u64; 2]; horizon],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x[0] += y[0];
                    x[1] += y[1];
                }
                a
            },
        );

    let per_step = counts
        .into_iter()
        .enumerate()
        .map(|(k, [hits, ones])| StepStats::from_counts(k as u64, hits, ones, config.replications))
        .collect();
    Ok(SimulationReport { per_step })
}

/// Sample covariance of two trials of the exchangeable sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceEstimate {
    pub estimate: f64,
    /// Standard error of the estimate, from the spread of the centred products.
    pub stderr: f64,
    pub replications: u64,
}

/// Estimates `cov(x_i, x_j)` for `i != j`: every replication draws θ from the
/// prior and then `x_i`, `x_j` independently given θ.
pub fn simulate_covariance(
    prior: &Prior,
    i: u64,
    j: u64,
    replications: u64,
    seed: u64,
) -> Result<CovarianceEstimate> {
    if i == j {
        return Err(Error::Domain(format!(
            "covariance needs distinct trials, got i = j = {i}"
        )));
    }
    if replications < 2 {
        return Err(Error::Config(
            "covariance needs at least 2 replications".into(),
        ));
    }
    let sampler = ThetaSampler::for_prior(prior)?;

    // cell counts indexed by 2 * x_i + x_j
    let cells = (0..replications)
        .into_par_iter()
        .fold(
            || [0u64; 4],
            |mut acc, rep| {
                let mut rng = replication_rng(seed, rep);
                let theta = sampler.draw(&mut rng);
                let xi = bernoulli(&mut rng, theta);
                let xj = bernoulli(&mut rng, theta);
                acc[2 * usize::from(xi) + usize::from(xj)] += 1;
                acc
            },
        )
        .reduce(|| [0u64; 4], |a, b| std::array::from_fn(|c| a[c] + b[c]));

    let r = replications as f64;
    let mean_i = (cells[2] + cells[3]) as f64 / r;
    let mean_j = (cells[1] + cells[3]) as f64 / r;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (c, &count) in cells.iter().enumerate() {
        let xi = (c / 2) as f64;
        let xj = (c % 2) as f64;
        let product = (xi - mean_i) * (xj - mean_j);
        sum += count as f64 * product;
        sum_sq += count as f64 * product * product;
    }
    let estimate = sum / (r - 1.0);
    let mean_product = sum / r;
    let var_product = (sum_sq / r - mean_product * mean_product).max(0.0);
    Ok(CovarianceEstimate {
        estimate,
        stderr: (var_product / r).sqrt(),
        replications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ExactRational;

    fn fixed(theta: Theta, horizon: u64, reps: u64, seed: u64) -> SimulationConfig {
        SimulationConfig::new(ThetaSource::Fixed(theta), horizon, reps, seed).unwrap()
    }

    #[test]
    fn config_validation() {
        let src = ThetaSource::Fixed(Theta::half());
        assert!(SimulationConfig::new(src.clone(), 0, 10, 1).is_err());
        assert!(SimulationConfig::new(src, 5, 0, 1).is_err());
        let short = PredictionArray::frequent_outcome(3);
        assert!(simulate_accuracy(&fixed(Theta::half(), 5, 10, 1), &short).is_err());
        assert!(simulate_accuracy(&fixed(Theta::half(), 4, 10, 1), &short).is_ok());
    }

    #[test]
    fn certain_process_is_always_predicted_after_one_trial() {
        let report = simulate_accuracy(
            &fixed(Theta::ratio(1, 1), 5, 1000, 42),
            &PredictionArray::frequent_outcome(5),
        )
        .unwrap();
        assert_eq!(report.per_step.len(), 5);
        for step in &report.per_step[1..] {
            assert_eq!(step.hits, 1000);
            assert_eq!(step.estimate, 1.0);
            assert_eq!(step.stderr, 0.0);
        }
        let first = report.per_step[0];
        assert!(first.z_score(0.5).abs() <= 3.0);
        assert_eq!(first.ones, 1000);
    }

    #[test]
    fn report_depends_only_on_seed() {
        let cfg = fixed(Theta::ratio(9, 20), 12, 20_000, 7);
        let arr = PredictionArray::frequent_outcome(12);
        let a = simulate_accuracy(&cfg, &arr).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simulate_accuracy(&cfg, &arr).unwrap());
        assert_eq!(a, b);
        let c = simulate_accuracy(&SimulationConfig { seed: 8, ..cfg }, &arr).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn step_counts_stay_in_range() {
        let prior: Prior = "beta:1/2,1/2".parse().unwrap();
        let cfg = SimulationConfig::new(ThetaSource::Prior(prior), 8, 5000, 3).unwrap();
        let report = simulate_accuracy(&cfg, &PredictionArray::frequent_outcome(10)).unwrap();
        for s in report.per_step {
            assert!(s.hits <= s.trials && s.ones <= s.trials);
            assert!((0.0..=1.0).contains(&s.estimate));
        }
    }

    #[test]
    fn first_outcome_matches_prior_mean() {
        let prior: Prior = "beta:3,1".parse().unwrap();
        let cfg = SimulationConfig::new(ThetaSource::Prior(prior.clone()), 1, 200_000, 11).unwrap();
        let report = simulate_accuracy(&cfg, &PredictionArray::frequent_outcome(0)).unwrap();
        let (freq, se) = report.per_step[0].ones_frequency();
        assert!((freq - prior.mean().to_f64()).abs() <= 3.0 * se);
    }

    #[test]
    fn covariance_domain_and_degenerate_prior() {
        let half = Prior::point_mass(Theta::half());
        assert!(simulate_covariance(&half, 2, 2, 100, 1).is_err());
        assert!(simulate_covariance(&half, 1, 2, 1, 1).is_err());
        let r = 100_000u64;
        let est = simulate_covariance(&half, 1, 2, r, 5).unwrap();
        assert!(est.estimate.abs() <= 3.0 / (r as f64).sqrt());
    }

    #[test]
    fn covariance_matches_two_atom_variance() {
        let prior: Prior = "discrete:0.4=0.5,0.6=0.5".parse().unwrap();
        let est = simulate_covariance(&prior, 1, 5, 400_000, 9).unwrap();
        assert!((est.estimate - ExactRational::ratio(1, 100).to_f64()).abs() <= 3.0 * est.stderr);
        let again = simulate_covariance(&prior, 1, 5, 400_000, 9).unwrap();
        assert_eq!(est, again);
    }
}
