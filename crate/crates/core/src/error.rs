use thiserror::Error;

/// Errors produced by the phase-retrieval toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HprError {
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, HprError>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(HprError::Shape { expected, actual })
    }
}
