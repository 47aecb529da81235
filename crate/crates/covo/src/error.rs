use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violated an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A stateful object was (or would be) driven into an invalid state.
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// Two vectors that must agree in length did not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
