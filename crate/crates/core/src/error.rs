use thiserror::Error;

use crate::restrictions::Violation;

pub type Result<T, E = HedonicError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HedonicError {
    /// The game is larger than an operation is willing to handle.
    #[error("{what}: n = {n} exceeds the cap of {cap}")]
    Capacity { what: &'static str, n: usize, cap: usize },

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A solver or checker was invoked on a game lacking a required property.
    #[error("precondition failed: {requirement}{}", .violation.as_ref().map(|v| format!(" ({v})")).unwrap_or_default())]
    Precondition {
        requirement: &'static str,
        violation: Option<Box<Violation>>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl HedonicError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HedonicError::Domain(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, n: usize, cap: usize) -> Self {
        HedonicError::Capacity { what, n, cap }
    }

    pub(crate) fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
        if n > cap {
            Err(Self::capacity(what, n, cap))
        } else {
            Ok(())
        }
    }
}
