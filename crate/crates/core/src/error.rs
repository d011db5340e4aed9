use thiserror::Error;

use crate::drawing::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The drawing does not satisfy the crossing bound a procedure requires.
    #[error("bound violation: {message}")]
    BoundViolation { message: String, edges: Vec<Edge> },

    /// A runtime certificate failed. This is an implementation bug, never an
    /// input problem.
    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error("{oracle} oracle refuses n={n} (cap {cap})")]
    OracleCap { oracle: &'static str, n: usize, cap: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn certificate(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Parse(_) => "parse",
            Error::BoundViolation { .. } => "bound-violation",
            Error::Certificate(_) => "certificate",
            Error::OracleCap { .. } => "oracle-cap",
        }
    }
}
