use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("map is not monotone: {0}")]
    NotMonotone(String),
    #[error("incoherent transitions: {0}")]
    Incoherent(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a cochain complex: {0}")]
    NotAComplex(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no section: {0}")]
    NoSection(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
