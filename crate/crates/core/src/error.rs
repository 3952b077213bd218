use crate::mdp::{Action, StateId};

/// Errors produced by the exploration library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("covariance system is singular even with diagonal jitter {jitter:e}")]
    Singular { jitter: f64 },

    #[error("state {state} has no action {action}")]
    UnknownAction { state: StateId, action: Action },

    #[error("state {0} is out of range")]
    UnknownState(StateId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("beta schedule undefined at t = {t}: t / delta must exceed 1")]
    BetaDomain { t: u64 },

    #[error("previous ergodic set is not contained in the current safe set")]
    ErgodicNotSafe,

    #[error("no path from {from} to {to} inside the allowed set")]
    NoPath { from: StateId, to: StateId },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("dimension mismatch: expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("terrain grid has no valid cells")]
    EmptyGrid,

    #[error("grid of {cells} cells exceeds the exact-sampling limit of {limit}")]
    SizeLimit { cells: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
