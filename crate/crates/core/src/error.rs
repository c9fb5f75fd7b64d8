use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("model mismatch: {left} vs {right}")]
    ModelMismatch { left: String, right: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("operation Q_{lower} is outside the admitted range 0..={max} of {model}")]
    Range { lower: i64, max: i64, model: String },

    #[error("indexing conversion produced nonpositive entry {0}")]
    Domain(i64),

    #[error("{0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
