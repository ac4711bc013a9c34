use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no object found: {0}")]
    NotFound(String),

    #[error("construction infeasible: {0}")]
    Infeasible(String),

    /// A statement that should hold unconditionally failed its own check.
    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
