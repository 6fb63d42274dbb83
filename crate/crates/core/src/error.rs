use thiserror::Error;

use crate::optimizer::IterateRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid sequence constants: {0}")]
    InvalidConstants(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("point too close to boundary for differentiation")]
    TooCloseToBoundary,

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("no unique stationary distribution")]
    NoUniqueStationary,

    #[error("Perron eigenvalue not unique")]
    PerronNotUnique,

    #[error("power iteration did not converge after {0} iterations")]
    NotConverged(usize),

    #[error("block length {requested} exceeds limit {limit} (estimated cost {cost:.3e} forward steps)")]
    TooCostly {
        requested: usize,
        limit: usize,
        cost: f64,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("initial point rejected: {0}")]
    InitialPoint(String),

    #[error("backtracking exhausted at outer iteration {outer_k} after {} accepted iterates", .partial.len())]
    BacktracksExhausted {
        outer_k: usize,
        partial: Vec<IterateRecord>,
    },

    #[error("constants inconsistent with convergence guarantee: {0}")]
    ConvergenceConstants(String),
}
