use thiserror::Error;

/// Errors surfaced by the computational core.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested sieve range exceeds the 64-bit desk-scale capacity.
    #[error("limit {limit} exceeds sieve capacity {capacity}")]
    Capacity { limit: u64, capacity: u64 },

    /// Malformed block bounds.
    #[error("invalid block range [{lo}, {hi}) for limit {limit}")]
    Range { lo: u64, hi: u64, limit: u64 },

    /// A numeric argument fell outside its documented window.
    #[error("parameter out of range: {0}")]
    Parameter(String),

    /// Input too small for the requested quantity (iterated logs etc).
    #[error("domain error: {0}")]
    Domain(String),

    /// Spec-string or ledger-file syntax error.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

impl Error {
    pub fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
