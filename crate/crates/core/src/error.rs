use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input violates a precondition. `index` points at the offending element when there is one.
    #[error("rejected input{}: {reason}", .index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    RejectedInput { reason: String, index: Option<usize> },

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no spike within the budget of {budget} integration steps")]
    NonFiringRegime { budget: u64 },

    #[error("divergent quantity: {0}")]
    DivergentQuantity(String),
}

impl Error {
    pub(crate) fn rejected(reason: impl Into<String>) -> Self {
        Error::RejectedInput {
            reason: reason.into(),
            index: None,
        }
    }

    pub(crate) fn rejected_at(reason: impl Into<String>, index: usize) -> Self {
        Error::RejectedInput {
            reason: reason.into(),
            index: Some(index),
        }
    }
}
