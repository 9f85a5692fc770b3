use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated a documented precondition (empty interval, non-positive
    /// tolerance, out-of-range family index, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A value was structurally invalid for the requested domain, e.g. a step
    /// function with a nonzero left tail passed where a distribution function
    /// was required.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual input (rationals, JSON payloads).
    #[error("parse error: {0}")]
    Parse(String),

    /// The prefix evidence gathered by a convergence report contradicts the
    /// vague-convergence equivalence it is required to satisfy. Either the
    /// implementation is wrong or the configured test family/thresholds cannot
    /// see the sequence's behaviour.
    #[error("inconsistent convergence evidence: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
