//! Parsing of the SPARQL-OWL query subset found in CQ translations.
//!
//! The accepted language is SELECT/ASK with a single WHERE group holding
//! Turtle-style triples (blank-node property lists, collections, `;`/`,`
//! lists), sequence and `*` property paths, FILTER, FILTER NOT EXISTS,
//! UNION and BIND. `$name` variables mark CQ placeholders. Anything else is
//! rejected with a positioned error.

pub mod ast;
pub mod keywords;
mod lexer;
mod parser;
mod serialize;

use std::fmt;

use thiserror::Error;

pub use ast::*;
pub use keywords::{keyword_presence, Keyword, KeywordInventory, KeywordMatcher, StructuralKeyword};
pub use serialize::serialize_query;

use crate::vocab::PrefixTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl Position {
    fn end_of(text: &str) -> Self {
        let line = text.matches('\n').count() + 1;
        let last = text.rfind('\n').map(|i| i + 1).unwrap_or(0);
        Position { offset: text.len(), line, column: text[last..].chars().count() + 1 }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty query")]
    Empty,
    #[error("lexical error at {pos}: {message}")]
    Lexical { pos: Position, message: String },
    #[error("syntax error at {pos}: found {found}, expected one of: {}", expected.join(", "))]
    Grammar { pos: Position, found: String, expected: Vec<String> },
    #[error("unexpected end of query at {pos}, expected one of: {}", expected.join(", "))]
    UnexpectedEnd { pos: Position, expected: Vec<String> },
    #[error("unsupported construct at {pos}: {construct}")]
    Unsupported { pos: Position, construct: String },
    #[error("projected variable ?{variable} does not occur in the WHERE clause")]
    UnboundProjection { variable: String },
    #[error("unresolved prefix '{prefix}:'")]
    UnresolvedPrefix { prefix: String },
}

/// Parses a query. `prefixes` is injected below any `PREFIX` declarations
/// of the query itself (query texts commonly omit their preamble); the
/// rdf/rdfs/owl/xsd namespaces are always available.
pub fn parse_query(text: &str, prefixes: &PrefixTable) -> Result<QueryAst, ParseError> {
    parser::parse(text, prefixes)
}

/// Like [`parse_query`], but every prefixed name must resolve.
pub fn parse_query_strict(text: &str, prefixes: &PrefixTable) -> Result<QueryAst, ParseError> {
    let ast = parse_query(text, prefixes)?;
    let mut missing = None;
    ast.for_each_term(&mut |t| {
        if missing.is_none() {
            if let Err(prefix) = ast.resolve(t) {
                missing = Some(prefix);
            }
        }
    });
    match missing {
        Some(prefix) => Err(ParseError::UnresolvedPrefix { prefix }),
        None => Ok(ast),
    }
}
