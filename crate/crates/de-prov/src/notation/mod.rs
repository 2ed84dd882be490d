//! Textual and JSON I/O for provenance documents.
//!
//! Three surfaces:
//!
//! - the extended notation (`.deprovn`): the PROV-N statement subset used by
//!   the model, extended with nested bundles, attribute lists on bundle
//!   headers, and a `@sidecar` JSON block — see `docs/notation.md` for the
//!   grammar;
//! - a JSON form with a fixed top-level layout;
//! - [`export_flattened`]: strictly standard PROV-N, with every extension
//!   re-expressed through `de:`-namespace entity statements and extensibility
//!   expressions so standard tooling can read the file.
//!
//! Serializers are canonical: output is a pure function of document
//! structure, independent of insertion order.

mod flatten;
pub(crate) mod json;
mod lexer;
mod parser;
pub(crate) mod provn;

pub use flatten::export_flattened;
pub use json::{parse_json, serialize_json, SchemaError};
pub use parser::parse_document;
pub use provn::serialize_provn;

use std::fmt;

use crate::environment::EnvironmentError;
use crate::model::ModelError;

/// Byte/line/column range of a token in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start_byte: usize,
    pub end_byte: usize,
    pub start_line: usize,
    pub start_column: usize,
    pub end_line: usize,
    pub end_column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.start_line, self.start_column)
    }
}

/// A deterministic parse failure pointing at the first offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, found {}",
            self.span, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

/// Errors raised by notation I/O.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NotationError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Environment(#[from] EnvironmentError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("flattening requires a bundles+ document, got `{0}`")]
    FlattenNeedsBundlesPlus(crate::environment::EncodingMode),
}

impl From<SchemaError> for NotationError {
    fn from(e: SchemaError) -> Self {
        NotationError::Schema {
            path: e.path,
            message: e.message,
        }
    }
}
