use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at x = {0}")]
    Pole(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series did not converge after {terms} terms: {reason}")]
    NonConvergence { terms: usize, reason: String },

    #[error("grid too coarse: need at least {required} steps, got {actual}")]
    GridTooCoarse { required: usize, actual: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("extrapolation diverged: estimates {0:?}")]
    ExtrapolationDiverged(Vec<f64>),

    #[error("Picard iteration did not reach tolerance after {iterations} sweeps (last delta {last_delta:e})")]
    NoConvergence {
        iterations: usize,
        last_delta: f64,
        deltas: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
