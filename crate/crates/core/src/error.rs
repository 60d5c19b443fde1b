//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QwError {
    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched dimensions between state, coin and graph.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The operation is well defined but not provided for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, QwError>;
