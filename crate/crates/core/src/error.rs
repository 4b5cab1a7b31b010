use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitian { defect: f64 },

    #[error("parameter `{name}` = {value} out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("states are indistinguishable (trace distance {trace_norm:.3e})")]
    DegeneratePair { trace_norm: f64 },

    #[error("input state must be pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("phase φ = π corresponds to an infinite interaction time")]
    InfiniteTime,

    #[error("tomography dataset has zero total H/V intensity")]
    ZeroFlux,

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::OutOfRange {
        name,
        value,
        reason,
    }
}
