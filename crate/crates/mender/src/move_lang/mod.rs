//! Move frontend: lexer, recursive-descent parser, printer, and
//! intra-module symbol resolution for the source subset the detectors
//! inspect.
//!
//! Constructs outside the subset (generics, `spec` blocks, scripts,
//! vector literals, tuple patterns) are preserved as opaque nodes that
//! reprint byte-exact; detectors treat opaque regions conservatively.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod symbols;

pub use ast::*;
pub use lexer::{tokenize_move, LexError, Token, TokenKind};
pub use parser::{parse_move, ParseDiagnostic, ParseError};
pub use printer::print_move;
pub use symbols::{build_move_symbols, MoveSymbols};
