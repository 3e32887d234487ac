//! Error type shared by every module of the crate.

/// Errors produced by geometry validation, domain checks, and document
/// parsing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A box has a non-positive extent on some axis, or a non-finite bound.
    #[error("invalid box: {0}")]
    InvalidBox(String),

    /// A shape parameter (radius, height, union member list) is invalid.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Two shapes that must have disjoint interiors overlap.
    #[error("overlapping interiors: {0}")]
    Overlap(String),

    /// An oscillation direction is zero, non-finite, or missing.
    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    /// Pair members must have equal volumes (relative tolerance 1e-9).
    #[error("volume mismatch: volume(A) = {a}, volume(B) = {b}")]
    VolumeMismatch { a: f64, b: f64 },

    /// A numeric argument is outside its operation's domain.
    #[error("domain error in {op}: {message}")]
    Domain { op: &'static str, message: String },

    /// A geometry document failed to parse or validate.
    #[error("document error: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            op,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
