use thiserror::Error;

/// Everything that can go wrong while building models or evaluating bounds.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distribution sums to {sum}, more than 1e-9 away from 1")]
    NotNormalized { sum: f64 },

    #[error("observation {y} has zero probability")]
    ZeroProbabilityObservation { y: usize },

    #[error("model would need {needed} entries, cap is {cap}")]
    SizeCap { needed: f64, cap: usize },

    #[error("non-finite objective value at {at}")]
    NumericFailure { at: f64 },

    #[error("iteration did not converge after {iterations} steps (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
