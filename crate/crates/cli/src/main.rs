use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use freqpred_cli::{
    cmd_accuracy, cmd_coeffs, cmd_curve, cmd_posterior, cmd_simulate, cmd_threshold, Destination,
    Format, Outcome, OutputEnvelope, PathSelection,
};

/// Accuracy of frequent-outcome prediction for a biased binary process.
///
/// θ and other probabilities accept decimals (`0.45`) or fractions (`9/20`);
/// both are read exactly.
#[derive(Debug, Parser)]
#[command(name = "freqpred", version)]
struct Cli {
    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Significant digits for decimal values.
    #[arg(long, global = true, default_value_t = freqpred_cli::output::DEFAULT_DIGITS)]
    digits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integer coefficients alpha(a, i) of the expanded accuracy polynomials.
    Coeffs {
        #[arg(long)]
        a_max: u64,
    },
    /// pi_k(θ) by one or all evaluation routes; exits 1 if routes disagree.
    Accuracy {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        theta: String,
        /// direct, ttable, recursive, condensed, expanded or all.
        #[arg(long, default_value = "all")]
        path: PathSelection,
    },
    /// pi_k(θ), the ideal accuracy and their gap for k = 1..=k_max.
    Curve {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        k_max: u64,
    },
    /// Fewest observed trials needed to reach a target accuracy.
    Threshold {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        target: String,
    },
    /// Posterior mean, optimal prediction and its success probability.
    Posterior {
        /// beta:ALPHA,BETA or discrete:THETA=WEIGHT,...
        #[arg(long)]
        prior: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Monte Carlo estimate of the frequent-outcome accuracy per step.
    Simulate {
        /// A fixed θ, or a prior spec to redraw θ per replication.
        #[arg(long)]
        source: String,
        #[arg(long)]
        k_max: u64,
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = OutputEnvelope {
        format: cli.format,
        destination: cli.out.map_or(Destination::Stdout, Destination::File),
        digits: cli.digits,
    };
    let result = match &cli.command {
        Command::Coeffs { a_max } => cmd_coeffs(*a_max, &out),
        Command::Accuracy { k, theta, path } => cmd_accuracy(*k, theta, *path, &out),
        Command::Curve { theta, k_max } => cmd_curve(theta, *k_max, &out),
        Command::Threshold { theta, target } => cmd_threshold(theta, target, &out),
        Command::Posterior { prior, k, n } => cmd_posterior(prior, *k, *n, &out),
        Command::Simulate {
            source,
            k_max,
            reps,
            seed,
        } => cmd_simulate(source, *k_max, *reps, *seed, &out),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Disagreement) => {
            eprintln!("freqpred: evaluation routes disagree");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("freqpred: {err}");
            ExitCode::from(2)
        }
    }
}
