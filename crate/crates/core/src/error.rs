use thiserror::Error;

/// Errors raised across the simulator and protocol harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An operation was called in the wrong lifecycle phase.
    #[error("invalid state: {0}")]
    State(String),
    /// The requested simulation exceeds the configured qubit budget.
    #[error("simulation needs {needed} qubits but the limit is {limit}")]
    Resource { needed: usize, limit: usize },
    /// A composite operator could not be assembled.
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
