//! Frequent-outcome prediction in the binomial model.
//!
//! A gambler watching an exchangeable 0/1 process predicts that the outcome
//! seen most often so far will occur next (even odds on a tie). This crate
//! computes, in exact rational arithmetic, how often that rule is right when
//! the long-run proportion is `theta`:
//!
//! - [`combinatorics`]: big-integer binomials, Catalan numbers, and the
//!   integer coefficients of the expanded accuracy polynomials.
//! - [`accuracy`]: the accuracy function `pi_k(theta)` by five independent
//!   routes, convergence limits and the advantage-threshold search.
//! - [`prediction`]: prediction arrays, Bayesian posterior prediction under
//!   beta or discrete priors, and the posterior-optimal array.
//! - [`simulator`]: a seeded, schedule-independent Monte Carlo oracle used to
//!   cross-check the analytic results.

pub mod accuracy;
pub mod combinatorics;
pub mod error;
pub mod prediction;
pub mod simulator;

pub use combinatorics::ExactRational;
pub use error::{Error, Result};
