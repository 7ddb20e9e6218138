use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "polytope is not full-dimensional: ambient dimension {ambient}, affine dimension {actual}"
    )]
    NotFullDimensional { ambient: usize, actual: usize },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("corpus generation failed: {0}")]
    Generation(String),

    /// A geometric or algebraic invariant that must always hold was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's data or corpus spec rather
    /// than by a bug.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::NotFullDimensional { .. }
                | Error::Overflow(_)
                | Error::Generation(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
