use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative weight {weight} for element {id}")]
    NegativeWeight { id: u64, weight: f64 },

    #[error("non-finite weight {weight} for element {id}")]
    NonFiniteWeight { id: u64, weight: f64 },

    #[error("duplicate element id {0}")]
    DuplicateId(u64),

    #[error("weighted set is empty")]
    EmptySet,

    #[error("jaccard similarity is undefined for two empty sets")]
    BothEmpty,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sketch length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sketches were built with different seeds ({left:#x} vs {right:#x})")]
    SeedMismatch { left: u64, right: u64 },

    #[error("weights out of supported range: {0}")]
    OutOfRange(String),

    #[error("point id {0} already present in index")]
    DuplicatePoint(u64),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed sketch encoding: {0}")]
    Decode(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
