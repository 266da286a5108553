use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sizes and probs must be non-empty")]
    Empty,

    #[error("length mismatch: {sizes} sizes vs {probs} probs (only length-1 inputs broadcast)")]
    LengthMismatch { sizes: usize, probs: usize },

    #[error("size at index {index} must be a positive integer, got {value}")]
    NonPositiveSize { index: usize, value: i64 },

    #[error("probability at index {index} must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("total number of trials overflows")]
    TotalOverflow,

    #[error("argument must be finite, got {0}")]
    NonFinite(f64),

    #[error("component {index} has degenerate probability {value}; split degenerate components first")]
    DegenerateComponent { index: usize, value: f64 },

    #[error("saddlepoint target {target} outside the open interval (0, {total})")]
    TargetOutOfRange { target: f64, total: u64 },

    #[error("saddlepoint iteration did not converge for target {target} after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        target: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("exact oracle refused: {entries} table entries exceeds the limit of {limit}")]
    GuardExceeded { entries: u64, limit: u64 },

    #[error("probability {0} outside [0, 1] after decoding")]
    InvalidProbability(f64),

    #[error("draw count must be at least 1")]
    EmptyDraws,

    #[error("trials list must be non-empty")]
    EmptyTrials,

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
