use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("tolerance not met: best value {value:e} with error estimate {error_estimate:e} after {evaluations} evaluations")]
    ToleranceNotMet {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error(
        "cached antiderivative could not be resolved: estimate {achieved:e} exceeds {requested:e}"
    )]
    CacheResolution { achieved: f64, requested: f64 },

    #[error("point outside the gap region: {0}")]
    OutOfRegion(String),

    #[error("flat-cap hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("sign convention violated: {0}")]
    SignConvention(String),

    #[error("subflow index {k} is not valid in dimension {dim}")]
    InvalidSubflow { k: usize, dim: usize },

    #[error("degenerate samples: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
