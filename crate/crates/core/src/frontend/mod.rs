//! Lexing, parsing and pretty-printing of Mimosa sources.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use ast::*;
pub use lexer::{tokenize, LexError, TimeUnit, Tok, Token};
pub use parser::{parse, ParseError};
pub use pretty::pretty;

use crate::diag::Diagnostic;

/// Tokenizes and parses a complete source file.
pub fn parse_program(source: &str) -> Result<Program, Diagnostic> {
    let tokens = tokenize(source)?;
    Ok(parse(&tokens)?)
}
