use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation needs a self-dual grid (h = n^{-1/2}).
    #[error("unsupported grid: {0}")]
    UnsupportedGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("resolution exceeded: {0}")]
    ResolutionExceeded(String),

    #[error("quadrature budget exceeded: grid size {n} is above the cap {cap}")]
    BudgetExceeded { n: usize, cap: usize },

    #[error("operator trace {trace:e} is not zero (tolerance {tolerance:e})")]
    NonzeroTrace { trace: f64, tolerance: f64 },

    #[error("delta {delta} is below the resolvable floor {floor} for this grid")]
    DeltaTooSmall { delta: f64, floor: f64 },

    /// The mollifier ladder ran out of resolvable scales before the target norm was met.
    #[error("synthesis exhausted the resolvable scales; best norm {best_norm:e} at delta {best_delta}")]
    SynthesisExhausted {
        best_norm: f64,
        best_delta: f64,
        report: Box<Report>,
    },

    #[error("malformed NCFK data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
