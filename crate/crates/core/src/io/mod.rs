//! Instance documents and DOT export.
//!
//! Documents are JSON with rationals written as `"p/q"` strings, so a
//! parse/emit round trip is lossless.

mod document;
mod dot;

pub use document::{emit_document, emit_instance, parse_document, parse_instance, InstanceDocument, SCHEMA_VERSION};
pub use dot::export_dot;

use thiserror::Error;

/// Why a document was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unsupported schema version {0}")]
    UnsupportedSchema(u32),
    #[error("malformed rational {value:?} in {field}")]
    MalformedRational { field: String, value: String },
    #[error("unknown latency type {kind:?} on edge `{edge}`")]
    UnknownLatencyType { edge: String, kind: String },
    #[error("latency of edge `{edge}` is missing field `{field}`")]
    MissingField { edge: String, field: String },
    #[error("invalid latency on edge `{edge}`: {reason}")]
    InvalidLatency { edge: String, reason: String },
    #[error("dangling reference: {role} names unknown node `{node}`")]
    DanglingReference { role: String, node: String },
    #[error("no path from source to sink")]
    MissingStPath,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid gadget metadata: {0}")]
    InvalidMetadata(String),
}
