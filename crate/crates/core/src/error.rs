use thiserror::Error;

use crate::lattice::ValidationReport;

/// Errors raised by every operation in the crate.
///
/// The variants separate malformed input, violated preconditions, and
/// internal consistency alarms so callers can map them onto distinct exit
/// codes.
#[derive(Debug, Error)]
pub enum Error {
    /// The input is malformed independently of any lattice axiom
    /// (duplicate names, missing bounds, partial maps, unknown names).
    #[error("input error: {0}")]
    Input(String),

    /// A line-oriented text format could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The caller asked for something the operation's contract excludes.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A structure that was expected to be an orthomodular lattice is not one.
    #[error("structure is not an orthomodular lattice ({} failed axioms)", .0.failures.len())]
    NotOml(Box<ValidationReport>),

    /// A configured search or size limit was hit before the analysis finished.
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    /// An internal consistency assertion failed. Never expected on valid input.
    #[error("internal consistency alarm: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
