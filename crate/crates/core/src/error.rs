use thiserror::Error;

use crate::lang::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected d={expected}, found d={found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field evaluates to +inf at {at:?} and the infinity policy is `error`")]
    InfiniteValue { at: [f64; 2] },

    #[error("field evaluates to a non-finite value ({value}) at {at:?}")]
    NonFiniteValue { at: [f64; 2], value: f64 },

    #[error("radius function is not strictly positive at {at:?} (value {value})")]
    NonPositiveRadius { at: [f64; 2], value: f64 },

    #[error("quadrature did not converge: best estimate {value} with error estimate {err_estimate}")]
    NonConvergence { value: f64, err_estimate: f64 },

    #[error("bracket [{lo}, {hi}] does not straddle a root (residuals {f_lo}, {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no positivity region found below x = {ceiling}")]
    ScanExhausted { ceiling: f64 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid override `{key}`: {reason}")]
    InvalidOverride { key: String, reason: String },

    #[error(transparent)]
    Parse(#[from] ParseError),
}
