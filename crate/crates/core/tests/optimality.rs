//! The frequent-outcome array is posterior-optimal under symmetric priors.

use freqpred::combinatorics::signum;
use freqpred::prediction::{
    optimal_array, posterior_correct_probability, posterior_mean, CountStatistic, PredictionArray,
    Prior,
};
use freqpred::ExactRational;

fn battery() -> Vec<Prior> {
    let mut priors: Vec<Prior> = ["1/2", "1", "2", "5"]
        .iter()
        .map(|a| format!("beta:{a},{a}").parse().unwrap())
        .collect();
    for spec in [
        "discrete:0.4=0.5,0.6=0.5",
        "discrete:0.1=0.25,0.9=0.25,0.5=0.5",
        "discrete:1/3=0.3,2/3=0.3,0.45=0.2,0.55=0.2",
    ] {
        priors.push(spec.parse().unwrap());
    }
    priors
}

#[test]
fn frequent_outcome_maximizes_posterior_accuracy() {
    let candidates: Vec<ExactRational> = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
        .iter()
        .map(|&(n, d)| ExactRational::ratio(n, d))
        .collect();
    let frequent = PredictionArray::frequent_outcome(20);
    for prior in battery() {
        assert!(prior.is_almost_uniform(), "{prior}");
        for k in 0..=20u64 {
            for n in 0..=k {
                let stat = CountStatistic::new(k, n).unwrap();
                let phi_star = frequent.get(k, n).unwrap();
                let best = posterior_correct_probability(phi_star, &prior, stat).unwrap();
                for phi in &candidates {
                    let other = posterior_correct_probability(phi, &prior, stat).unwrap();
                    assert!(best >= other, "{prior} k={k} n={n} phi={phi}");
                    if stat.is_tie() {
                        assert_eq!(best, other);
                    } else if phi != phi_star {
                        assert!(best > other, "{prior} k={k} n={n} phi={phi}");
                    }
                }
            }
        }
    }
}

#[test]
fn posterior_mean_leans_towards_majority() {
    let half = ExactRational::half();
    for prior in battery() {
        for k in 0..=20u64 {
            for n in 0..=k {
                let mean = posterior_mean(&prior, CountStatistic::new(k, n).unwrap()).unwrap();
                let lead = 2 * n as i64 - k as i64;
                assert_eq!(
                    signum(&(mean - &half)),
                    lead.signum() as i8,
                    "{prior} k={k} n={n}"
                );
            }
        }
    }
}

#[test]
fn optimal_array_is_frequent_outcome_for_symmetric_priors() {
    for prior in battery() {
        assert_eq!(
            optimal_array(&prior, 20).unwrap(),
            PredictionArray::frequent_outcome(20)
        );
    }
}
