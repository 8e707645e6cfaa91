use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid period {0}: must be positive and finite")]
    InvalidPeriod(f64),

    #[error("perturbation is not positive: grid minimum {min} at y = {at}")]
    NonPositive { min: f64, at: f64 },

    #[error("tail function is not monotone: slack {slack} at y = {at}")]
    NonMonotoneTail { slack: f64, at: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("period mismatch: {0}")]
    PeriodMismatch(String),

    #[error("argument {x} lies outside the support of the {branch} branch")]
    Domain { x: f64, branch: &'static str },

    #[error("root finding failed: {0}")]
    Convergence(String),

    #[error("observation times must be positive and strictly increasing (index {index})")]
    NonMonotoneTimes { index: usize },

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("unsupported significance level {0}: use 0.05 or 0.01")]
    UnsupportedLevel(f64),

    #[error("invalid innovation law: {0}")]
    InvalidInnovation(String),
}
