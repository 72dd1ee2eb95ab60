use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("family mismatch: instance is {expected}, element belongs to {found}")]
    FamilyMismatch { expected: String, found: String },

    #[error("malformed element for this family: {0}")]
    MalformedElement(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("computation capped at {cap} states while {context}")]
    Capped { cap: usize, context: String },

    #[error("cannot parse element `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, SemigroupError>;
