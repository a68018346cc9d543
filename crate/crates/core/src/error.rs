use thiserror::Error;

/// Errors raised for malformed inputs and capacity limits.
///
/// Structural failures of the cycle builder are not errors; they are reported
/// as [`crate::builder::BuildFailure`] values.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("capacity exceeded: {what} needs n <= {limit}, got {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("property never holds, even on the complete graph: {0}")]
    Unsatisfiable(String),

    /// A truncated edge process ended before the property was reached.
    #[error("property not reached below cutoff radius {cutoff}")]
    NotReached { cutoff: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
