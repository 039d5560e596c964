//! Crate-wide error type.
//!
//! The variants map one-to-one onto the failure classes the CLI exposes as
//! exit codes, so every layer reports through the same enum.

use thiserror::Error;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure while reading or writing a file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// The input document is not well-formed in the detected dialect.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// The input document matches no supported log dialect.
    #[error("format error: {0}")]
    Format(String),

    /// Referential-integrity failure in an otherwise well-formed log.
    #[error("validation error: {0}")]
    Validation(String),

    /// Invalid relationship schema (unknown types, duplicate pairs, ...).
    #[error("schema error: {0}")]
    Schema(String),

    /// Invalid reference-type assignment.
    #[error("assignment error: {0}")]
    Assignment(String),

    /// A search precondition does not hold (e.g. incomplete candidate coverage).
    #[error("search error: {0}")]
    Search(String),

    /// Invalid or unsatisfiable generator configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A query target cannot be resolved (unknown object, position out of range).
    #[error("query error: {0}")]
    Query(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
