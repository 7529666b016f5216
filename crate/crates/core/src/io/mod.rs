//! Graph input formats and report rendering.
//!
//! Two equivalent graph formats are supported: a line-oriented DSL (see
//! [`dsl`]) and JSON (see [`json`]). Both apply the same validation and both
//! round-trip: parsing a rendered graph gives back the same graph.

pub mod dsl;
pub mod json;
pub mod report;

use std::fmt;

use thiserror::Error;

use crate::graph::LyapunovGraph;

/// Largest weight or matrix entry accepted by the parsers (2^31 - 1).
pub const MAX_VALUE: u64 = i32::MAX as u64;

/// Largest accepted subshift matrix dimension.
pub const MAX_MATRIX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceFormat {
    Dsl,
    Json,
}

impl SourceFormat {
    /// JSON when the first non-whitespace character is `{`, DSL otherwise.
    pub fn detect(text: &str) -> Self {
        match text.trim_start_matches('\u{feff}').trim_start().chars().next() {
            Some('{') => SourceFormat::Json,
            _ => SourceFormat::Dsl,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SourceLocation {
    /// 1-based line and column (columns count characters).
    Line { line: usize, column: usize },
    /// JSON path such as `$.edges[2]`.
    Path(String),
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceLocation::Line { line, column } => write!(f, "line {line}, column {column}"),
            SourceLocation::Path(path) => f.write_str(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub format: SourceFormat,
    pub graph: LyapunovGraph,
    /// Where each vertex was declared, in vertex order.
    pub vertex_locations: Vec<SourceLocation>,
    /// Where each edge was declared, in edge order.
    pub edge_locations: Vec<SourceLocation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Located {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Path { path: String, message: String },
}

impl ParseError {
    pub fn message(&self) -> &str {
        match self {
            ParseError::Located { message, .. } | ParseError::Path { message, .. } => message,
        }
    }
}

/// Parses either format, chosen by [`SourceFormat::detect`].
pub fn parse_document(text: &str) -> Result<GraphDocument, ParseError> {
    match SourceFormat::detect(text) {
        SourceFormat::Dsl => dsl::parse_dsl(text),
        SourceFormat::Json => json::parse_json(text),
    }
}

pub fn render_graph(g: &LyapunovGraph, format: SourceFormat) -> String {
    match format {
        SourceFormat::Dsl => dsl::render_dsl(g),
        SourceFormat::Json => json::render_json(g),
    }
}

/// Vertex ids: a letter, digit or `_`, followed by letters, digits, `_`, `.`
/// or `-`.
pub fn is_valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
        && !id.contains("->")
}
