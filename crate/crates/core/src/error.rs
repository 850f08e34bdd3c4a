use thiserror::Error;

/// Errors raised by the numerical core.
///
/// The variants map onto the failure classes the command-line front end
/// reports with distinct exit codes: domain and data errors are caller
/// mistakes, resource errors are raised before any sampling starts, and
/// invariant/consistency errors indicate a numerical bug.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {requested} amplitudes requested, cap is {cap}")]
    Resource { requested: u128, cap: usize },

    #[error("invariant violated ({invariant}): {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
