use thiserror::Error;

/// Errors raised by the estimators, solvers and the simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {n}: {reason}")]
    InvalidGrid { n: usize, reason: &'static str },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid convex body: {0}")]
    InvalidBody(String),

    #[error("angle {0} outside the open interval (0, pi/2)")]
    BracketAngle(f64),

    #[error("bandwidth {k} is not in the dyadic grid for n = {n}")]
    InvalidBandwidth { k: usize, n: usize },

    #[error("index {index} outside 1..={n}")]
    InvalidIndex { index: usize, n: usize },

    #[error("support vector violates circle-convexity at index {index} (residual {residual:e})")]
    Infeasible { index: usize, residual: f64 },

    #[error("projection did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
