use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rotation is not exposed in the given shortlists")]
    NotExposed,

    #[error("rotation set is not closed: rotation {missing} precedes rotation {member} but is absent")]
    NotClosed { member: usize, missing: usize },

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("preprocessing removed every clause")]
    EmptyReduction,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn arg(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
