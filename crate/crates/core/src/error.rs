use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown emotion label: {0:?}")]
    UnknownEmotion(String),
    #[error("unknown source dataset: {0:?}")]
    UnknownSource(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("embedding space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: String, found: String },
    #[error("non-finite value in vector {0:?}")]
    NonFinite(String),
    #[error("zero-norm vector")]
    ZeroNorm,
    #[error("missing embedding for {0:?}")]
    MissingEmbedding(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("record {0} has no part-of-speech tags")]
    MissingPosTags(usize),
    #[error("candidate {0:?} has no listener score")]
    Unscored(String),
    #[error("not enough images: need {needed}, have {available}")]
    InsufficientPool { needed: usize, available: usize },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
