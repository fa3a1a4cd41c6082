use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero channel: {0}")]
    ZeroChannel(&'static str),

    #[error("correlation matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemiDefinite { min_eigenvalue: f64 },

    #[error("SDP did not converge after {iterations} iterations (relative gap {gap:.3e})")]
    SdpNotConverged {
        iterations: usize,
        gap: f64,
        best_objective: f64,
    },

    #[error("quadrature did not converge: estimated error {error_estimate:.3e} over [{lower}, {upper}]")]
    Quadrature {
        error_estimate: f64,
        lower: f64,
        upper: f64,
    },

    #[error("precision loss in alternating sum: residual {0:.3e}")]
    PrecisionLoss(f64),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
