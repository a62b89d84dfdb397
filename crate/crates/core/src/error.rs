//! Error taxonomy shared across the crate.

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A point or tangent violates the manifold's domain constraints.
    #[error("domain violation: {0}")]
    Domain(String),

    /// A computation produced non-finite values or an iterative kernel
    /// failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The caller broke an API contract (bad sizes, bad flags, out-of-range
    /// parameters).
    #[error("usage error: {0}")]
    Usage(String),

    /// The Armijo backtracking exhausted its halving budget. With exact
    /// arithmetic this cannot happen at a non-critical point, so it signals
    /// numerical breakdown or a violated precondition.
    #[error("line search failed after {halvings} halvings: {detail}")]
    LineSearch { halvings: u32, detail: String },

    /// Reading or writing a trace, report or problem file failed.
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
