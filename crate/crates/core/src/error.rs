use alloc::string::String;

/// Errors raised by validation and by operations applied outside their domain.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid process spec: {0}")]
    InvalidSpec(String),
    #[error("invalid site {0}")]
    InvalidSite(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("operation `{op}` does not apply to {what}")]
    WrongKind { op: &'static str, what: &'static str },
    #[error("abscissa {0} is not tracked by the trajectory")]
    Untracked(f64),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
