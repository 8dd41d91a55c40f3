use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument {value} outside domain {domain}")]
    Domain {
        op: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{op}: precondition violated: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("index {k} is not in the index set of {space}")]
    NotInIndexSet { k: usize, space: String },

    #[error("inadmissible space {family} with d = {d}: {rule}")]
    Inadmissible {
        family: String,
        d: usize,
        rule: &'static str,
    },

    #[error("{op} is not supported on {space}")]
    UnsupportedSpace { op: &'static str, space: String },

    #[error("{op}: failed to bracket a root")]
    Bracket { op: &'static str },

    #[error("{op}: no convergence after {iterations} iterations")]
    Convergence { op: &'static str, iterations: usize },

    #[error("invalid region: {0}")]
    Region(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            reason: reason.into(),
        }
    }
}
