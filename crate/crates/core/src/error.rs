use thiserror::Error;

/// Errors produced by the filter, the surrogate model and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate innovation variance at cell {cell} (forecast variance + R = 0)")]
    DegenerateInnovation { cell: usize },

    #[error("soft observation at cell {cell} cannot be assimilated by the stochastic EnKF")]
    SoftObservationInStochasticFilter { cell: usize },

    #[error("empty observation list")]
    EmptyObservations,

    #[error("non-finite state after analysis in cycle {cycle}")]
    NonFinite { cycle: usize },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
