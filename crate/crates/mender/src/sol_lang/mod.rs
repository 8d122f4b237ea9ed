//! Solidity frontend covering the legacy-vulnerability surface: pragma
//! extraction, contracts, state variables, functions with modifiers, the
//! statement subset, and normalized external value calls.
//!
//! Inheritance clauses, assembly, libraries, and anything else outside
//! the subset parse as opaque regions that reprint byte-exact.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::*;
pub use lexer::{tokenize_sol, SolToken, SolTokenKind};
pub use parser::parse_sol;
pub use printer::print_sol;
