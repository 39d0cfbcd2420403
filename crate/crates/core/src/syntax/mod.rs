//! Lexing and parsing of qclite source text.

mod ast;
mod parser;
mod pretty;
mod token;

use thiserror::Error;

pub use ast::*;
pub use parser::{parse_interactive, parse_program};
pub use token::{tokenize, tokenize_with_comments, Token, TokenKind, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
    /// Set when the input ended before the construct was complete; the REPL
    /// uses this to keep reading continuation lines.
    pub incomplete: bool,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into(), incomplete: false }
    }

    pub fn incomplete(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into(), incomplete: true }
    }
}

/// Tokenizes and parses a complete program.
pub fn parse_source(source: &str) -> Result<SyntaxTree, SyntaxError> {
    parse_program(&tokenize(source)?)
}
