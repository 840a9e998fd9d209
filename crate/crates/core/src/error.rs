use thiserror::Error;

/// Errors produced by state construction, gate application, and analysis runs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid truncation dimension {0} (need dim >= 2)")]
    InvalidDimension(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("state is not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("truncation overflow: tail mass {tail:.3e} exceeds {limit:.1e} at dim {dim}")]
    TruncationOverflow { tail: f64, limit: f64, dim: usize },

    #[error("gate is not unitary; refusing to apply")]
    NonUnitaryGate,

    #[error("singular scaling parameter |{name}| = {value:.3e} below guard {guard}")]
    SingularParameter {
        name: &'static str,
        value: f64,
        guard: f64,
    },

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("Monte Carlo failure rate {failed}/{total} exceeds 1%")]
    ExcessiveFailures { failed: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
