//! Library-wide error type.

use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument was outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An adaptive integration exhausted its refinement budget.
    ///
    /// Carries the best value obtained together with its error estimate so
    /// callers can decide whether the partial result is still usable.
    #[error("integration did not converge ({context}): best estimate {best:e}, error estimate {error_estimate:e}")]
    NonConvergence {
        best: f64,
        error_estimate: f64,
        context: String,
    },
    /// A report violated the on-disk schema (unknown field, wrong version,
    /// non-finite number, malformed CSV shape).
    #[error("report schema violation: {0}")]
    Schema(String),
    /// File I/O failed; carries the offending path.
    #[error("I/O failure at {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
