use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent user input: unknown symbols, bad files, alphabet mismatches.
    #[error("input error: {0}")]
    Input(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A construction would exceed a configured size budget.
    #[error("size limit exceeded: {what} needs {needed}, limit is {limit}")]
    Size {
        what: String,
        needed: u128,
        limit: u128,
    },

    /// Text that failed to parse; `position` is a 0-based byte offset.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// An internal invariant of the improviser or harness failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// An interactive session was ended by the user.
    #[error("session aborted")]
    Aborted,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
