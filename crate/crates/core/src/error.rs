use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    /// Every atom of the prior assigns zero likelihood to the observed count.
    #[error("observed count ({n} of {k}) has zero marginal likelihood under the prior")]
    ImpossibleEvidence { k: u64, n: u64 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
