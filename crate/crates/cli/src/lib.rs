//! Command implementations behind the `freqpred` binary.
//!
//! Each `*_rows` function builds the table a subcommand prints; the matching
//! `cmd_*` function renders it through an [`OutputEnvelope`] and reports
//! whether the command succeeded.

pub mod output;

use std::fmt;
use std::str::FromStr;

use freqpred::accuracy::{accuracy_curve, threshold_k, AccuracyPath, Theta};
use freqpred::combinatorics::{alpha_row, PRINTED_ALPHA_5_1};
use freqpred::prediction::{
    optimal_array, posterior_correct_probability, posterior_mean, CountStatistic, PredictionArray,
    Prior,
};
use freqpred::simulator::{simulate_accuracy, SimulationConfig, ThetaSource};
use freqpred::ExactRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use output::{Destination, Format, OutputEnvelope};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] freqpred::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

/// How a command finished when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// `accuracy` routes produced different values.
    Disagreement,
}

fn decimal(value: &ExactRational, digits: usize) -> String {
    value.to_decimal_string(digits)
}

fn decimal_f64(value: f64, digits: usize) -> String {
    match ExactRational::from_f64(value) {
        Some(v) => v.to_decimal_string(digits),
        None if value.is_nan() => "nan".to_string(),
        None if value > 0.0 => "inf".to_string(),
        None => "-inf".to_string(),
    }
}

// ---- coeffs ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub a: u64,
    pub i: u64,
    pub alpha: String,
    pub note: String,
}

pub fn coeffs_rows(a_max: u64) -> Vec<CoeffRow> {
    let mut rows = Vec::new();
    for a in 0..=a_max {
        for (idx, alpha) in alpha_row(a).into_iter().enumerate() {
            let i = idx as u64 + 1;
            let note = if (a, i) == (5, 1) {
                format!(
                    "commonly printed as {PRINTED_ALPHA_5_1}; that value breaks the row sum of -1"
                )
            } else {
                String::new()
            };
            rows.push(CoeffRow {
                a,
                i,
                alpha: alpha.to_string(),
                note,
            });
        }
    }
    rows
}

pub fn cmd_coeffs(a_max: u64, out: &OutputEnvelope) -> Result<Outcome, CliError> {
    out.emit(&coeffs_rows(a_max))?;
    Ok(Outcome::Success)
}

// ---- accuracy ----

/// One route or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathSelection {
    All,
    One(AccuracyPath),
}

impl FromStr for PathSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(PathSelection::All);
        }
        s.parse::<AccuracyPath>()
            .map(PathSelection::One)
            .map_err(|_| {
                format!("unknown path {s:?} (expected direct, ttable, recursive, condensed, expanded or all)")
            })
    }
}

impl fmt::Display for PathSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathSelection::All => f.write_str("all"),
            PathSelection::One(p) => fmt::Display::fmt(p, f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub path: String,
    pub k: u64,
    pub theta: String,
    pub pi: String,
    pub exact: String,
    pub agree: bool,
}

/// Rows for `accuracy`, plus whether every evaluated route gave the same value.
///
/// With `all`, routes undefined at `k = 0` (condensed, expanded) are skipped;
/// asking for one of them explicitly at `k = 0` is a domain error.
pub fn accuracy_rows(
    k: u64,
    theta: &str,
    paths: PathSelection,
    digits: usize,
) -> Result<(Vec<AccuracyRow>, bool), CliError> {
    let theta: Theta = theta.parse()?;
    let selected: Vec<AccuracyPath> = match paths {
        PathSelection::All => AccuracyPath::ALL
            .into_iter()
            .filter(|p| p.supports(k))
            .collect(),
        PathSelection::One(p) => vec![p],
    };
    let values = selected
        .iter()
        .map(|p| p.evaluate(k, &theta))
        .collect::<Result<Vec<_>, _>>()?;
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let rows = selected
        .iter()
        .zip(&values)
        .map(|(path, value)| AccuracyRow {
            path: path.name().to_string(),
            k,
            theta: theta.to_string(),
            pi: decimal(value, digits),
            exact: value.to_string(),
            agree,
        })
        .collect();
    Ok((rows, agree))
}

pub fn cmd_accuracy(
    k: u64,
    theta: &str,
    paths: PathSelection,
    out: &OutputEnvelope,
) -> Result<Outcome, CliError> {
    let (rows, agree) = accuracy_rows(k, theta, paths, out.digits)?;
    out.emit(&rows)?;
    Ok(if agree {
        Outcome::Success
    } else {
        Outcome::Disagreement
    })
}

// ---- curve ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRow {
    pub k: u64,
    pub pi_k: String,
    pub ideal: String,
    pub gap: String,
}

pub fn curve_rows(theta: &str, k_max: u64, digits: usize) -> Result<Vec<CurveRow>, CliError> {
    if k_max == 0 {
        return Err(CliError::Usage("curve needs k_max >= 1".into()));
    }
    let theta: Theta = theta.parse()?;
    Ok(accuracy_curve(&theta, k_max)
        .into_iter()
        .map(|p| CurveRow {
            k: p.k,
            pi_k: decimal(&p.pi, digits),
            ideal: decimal(&p.ideal, digits),
            gap: decimal(&p.gap, digits),
        })
        .collect())
}

pub fn cmd_curve(theta: &str, k_max: u64, out: &OutputEnvelope) -> Result<Outcome, CliError> {
    out.emit(&curve_rows(theta, k_max, out.digits)?)?;
    Ok(Outcome::Success)
}

// ---- threshold ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub theta: String,
    pub target: String,
    /// Trial count, or `unreachable`.
    pub k: String,
}

pub fn threshold_rows(theta: &str, target: &str) -> Result<Vec<ThresholdRow>, CliError> {
    let theta: Theta = theta.parse()?;
    let target: ExactRational = target.parse()?;
    let result = threshold_k(&theta, &target)?;
    Ok(vec![ThresholdRow {
        theta: theta.to_string(),
        target: target.to_string(),
        k: result.to_string(),
    }])
}

pub fn cmd_threshold(theta: &str, target: &str, out: &OutputEnvelope) -> Result<Outcome, CliError> {
    out.emit(&threshold_rows(theta, target)?)?;
    Ok(Outcome::Success)
}

// ---- posterior ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosteriorRow {
    pub prior: String,
    pub k: u64,
    pub n: u64,
    pub posterior_mean: String,
    pub posterior_mean_exact: String,
    pub phi: String,
    pub probability: String,
    pub probability_exact: String,
}

pub fn posterior_rows(
    prior: &str,
    k: u64,
    n: u64,
    digits: usize,
) -> Result<Vec<PosteriorRow>, CliError> {
    let prior: Prior = prior.parse()?;
    let stat = CountStatistic::new(k, n)?;
    let mean = posterior_mean(&prior, stat)?;
    let phi = optimal_array(&prior, k)?
        .get(k, n)
        .cloned()
        .expect("array covers row k");
    let probability = posterior_correct_probability(&phi, &prior, stat)?;
    Ok(vec![PosteriorRow {
        prior: prior.to_string(),
        k,
        n,
        posterior_mean: decimal(&mean, digits),
        posterior_mean_exact: mean.to_string(),
        phi: phi.to_string(),
        probability: decimal(&probability, digits),
        probability_exact: probability.to_string(),
    }])
}

pub fn cmd_posterior(
    prior: &str,
    k: u64,
    n: u64,
    out: &OutputEnvelope,
) -> Result<Outcome, CliError> {
    out.emit(&posterior_rows(prior, k, n, out.digits)?)?;
    Ok(Outcome::Success)
}

// ---- simulate ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulateRow {
    pub k: u64,
    pub hits: u64,
    pub trials: u64,
    pub estimate: String,
    pub stderr: String,
    /// Exact accuracy; only for a fixed θ.
    pub analytic_pi: Option<String>,
    pub z: Option<String>,
}

/// `source` is a θ (`0.45`, `9/20`) or a prior spec (`beta:1,1`, `discrete:...`).
pub fn parse_theta_source(source: &str) -> Result<ThetaSource, CliError> {
    if source.contains(':') {
        Ok(ThetaSource::Prior(source.parse()?))
    } else {
        Ok(ThetaSource::Fixed(source.parse()?))
    }
}

pub fn simulate_rows(
    source: &str,
    k_max: u64,
    reps: u64,
    seed: u64,
    digits: usize,
) -> Result<Vec<SimulateRow>, CliError> {
    let source = parse_theta_source(source)?;
    let analytic: Option<Vec<ExactRational>> = match &source {
        ThetaSource::Fixed(theta) => {
            let mut values = vec![ExactRational::half()];
            values.extend(
                accuracy_curve(theta, k_max.saturating_sub(1))
                    .into_iter()
                    .map(|p| p.pi),
            );
            Some(values)
        }
        ThetaSource::Prior(_) => None,
    };
    let config = SimulationConfig::new(source, k_max, reps, seed)?;
    let array = PredictionArray::frequent_outcome(k_max.saturating_sub(1));
    let report = simulate_accuracy(&config, &array)?;

    Ok(report
        .per_step
        .iter()
        .map(|s| {
            let expected = analytic.as_ref().map(|v| &v[s.k as usize]);
            let estimate = ExactRational::new(s.hits, s.trials).expect("trials >= 1");
            SimulateRow {
                k: s.k,
                hits: s.hits,
                trials: s.trials,
                estimate: decimal(&estimate, digits),
                stderr: decimal_f64(s.stderr, digits),
                analytic_pi: expected.map(|e| decimal(e, digits)),
                z: expected.map(|e| decimal_f64(s.z_score(e.to_f64()), digits)),
            }
        })
        .collect())
}

pub fn cmd_simulate(
    source: &str,
    k_max: u64,
    reps: u64,
    seed: u64,
    out: &OutputEnvelope,
) -> Result<Outcome, CliError> {
    out.emit(&simulate_rows(source, k_max, reps, seed, out.digits)?)?;
    Ok(Outcome::Success)
}
