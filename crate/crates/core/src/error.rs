use thiserror::Error;

/// Errors raised by problem evaluation, the subproblem solver and the
/// iterative methods.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("objective {objective} produced a non-finite value or gradient")]
    Evaluation { objective: usize },

    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("backtracking did not accept a step after {trials} reductions")]
    StepSizeUnderflow { trials: u32 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("brute-force oracle refuses m = {0} (at most 4 objectives)")]
    OracleTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
