//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data fails a structural invariant.
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    /// A constraint set admits no probability vector.
    #[error("infeasible set: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
