//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("heterogeneous diagram: {0}")]
    HeterogeneousDiagram(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-enumerable hom; use matrix predicates instead")]
    NonEnumerableHom,
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),
    #[error("invalid precosheaf: {0}")]
    InvalidPrecosheaf(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("naturality fails: {0}")]
    Naturality(String),
    #[error("no cofinal presentation for object {0}")]
    NoCofinalPresentation(String),
    #[error("invalid point filter: {0}")]
    InvalidPoint(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("document error at {pointer}: {message}")]
    Document { pointer: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
