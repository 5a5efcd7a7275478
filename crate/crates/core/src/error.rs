//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, validation, and the numerical
/// routines built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions of two objects do not line up (party counts, local dims).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A state failed one of its construction invariants (norm, Hermiticity,
    /// trace, positivity). States are rejected, never silently repaired.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An operator basis failed the trace conditions.
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    /// A caller-supplied argument is out of range or malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A dense computation was requested beyond its documented size guard.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// Stabilizer generators do not form a valid group.
    #[error("invalid stabilizer group: {0}")]
    InvalidStabilizer(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
