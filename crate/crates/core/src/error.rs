//! Crate-wide error type.
//!
//! Invalid caller input (out-of-range indices, malformed sequences) is
//! reported as [`Error::Invalid`]; geometric degeneracies that a caller may
//! want to handle (e.g. a pole-placement instance whose data is not in
//! general position) as [`Error::Degenerate`]; configured work limits as
//! [`Error::CapExceeded`].  [`Error::Internal`] marks arithmetic
//! cross-checks that must never fire (an exact division leaving a remainder,
//! a lattice operation with no unique bound) — if one of these surfaces, the
//! engine itself is wrong.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Input is valid but not in general position for the requested solve.
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    /// A configured size/work cap was exceeded.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// An internal consistency check failed; indicates a bug in the engine.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::Degenerate(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
