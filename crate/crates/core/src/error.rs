use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid needs at least 4 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("interval length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("mode analysis needs an even node count, got {0}")]
    OddCount(usize),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("charge neutrality violated: mean density {mean} deviates from 1 by more than {tolerance}")]
    Neutrality { mean: f64, tolerance: f64 },
    #[error("scheme needs {needed} history levels, only {available} available")]
    InsufficientHistory { needed: usize, available: usize },
    #[error("source term g is present but its x-primitive G is missing")]
    MissingPrimitive,
    #[error("time step {dt} exceeds the CFL bound {bound} at step {step}")]
    CflViolation { step: usize, dt: f64, bound: f64 },
    #[error("final time {t_end} is not an integer multiple of dt = {dt}")]
    NonIntegerSteps { t_end: f64, dt: f64 },
    #[error("non-finite value in the distribution at step {step}")]
    NonFinite { step: usize },
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("reference has zero norm")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, Error>;
