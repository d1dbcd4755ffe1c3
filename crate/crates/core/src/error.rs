use thiserror::Error;

/// Errors shared by every engine in the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An exhaustive scan would exceed the configured size limit.
    #[error("exhaustion limit: {what} = {requested} exceeds the limit {limit}")]
    ExhaustionLimit {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A search or table was refused because its state space is above the cap.
    #[error("cap exceeded: {what} = {requested} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for the two "refused because too large" variants.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::ExhaustionLimit { .. } | Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
