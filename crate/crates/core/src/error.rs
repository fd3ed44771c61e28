use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element does not belong to the required subgroup: {0}")]
    NotInSubgroup(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search bound exhausted: {0}")]
    SearchExhausted(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
