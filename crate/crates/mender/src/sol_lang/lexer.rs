//! Lossless lexer for the Solidity subset. Same contract as the Move
//! lexer: token spans tile the input up to whitespace/comment gaps.

use crate::source::{line_col, Span};
use thiserror::Error;

pub const SOL_KEYWORDS: &[&str] = &[
    "pragma", "contract", "function", "modifier", "require", "mapping", "memory", "storage",
    "payable", "public", "external", "internal", "private", "view", "pure", "returns", "if",
    "for", "while", "emit", "delete", "else", "return", "constructor", "struct", "using", "is",
    "constant", "calldata", "new", "event", "enum", "interface", "library", "import", "assembly",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolTokenKind {
    Keyword,
    Ident,
    Number,
    Bool,
    Str,
    Op,
    Delim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolToken {
    pub kind: SolTokenKind,
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("lex error at line {line}, col {col}: {message}")]
pub struct SolLexError {
    pub span: Span,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

pub fn tokenize_sol(text: &str) -> Result<Vec<SolToken>, SolLexError> {
    let mut lexer = SolLexer { text, bytes: text.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut tokens = Vec::new();
    loop {
        lexer.skip_trivia()?;
        if lexer.pos >= lexer.bytes.len() {
            return Ok(tokens);
        }
        tokens.push(lexer.next_token()?);
    }
}

struct SolLexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> SolLexer<'a> {
    fn error(&self, start: usize, message: impl Into<String>) -> SolLexError {
        let (line, col) = line_col(self.text, start);
        SolLexError {
            span: Span::new(start, self.pos.max(start + 1).min(self.text.len().max(start)), line, col),
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> u8 {
        self.bytes.get(self.pos).copied().unwrap_or(0)
    }

    fn peek_at(&self, ahead: usize) -> u8 {
        self.bytes.get(self.pos + ahead).copied().unwrap_or(0)
    }

    fn bump(&mut self) {
        if self.peek() == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.pos += 1;
    }

    fn skip_trivia(&mut self) -> Result<(), SolLexError> {
        loop {
            match self.peek() {
                b' ' | b'\t' | b'\r' | b'\n' => self.bump(),
                b'/' if self.peek_at(1) == b'/' => {
                    while self.pos < self.bytes.len() && self.peek() != b'\n' {
                        self.bump();
                    }
                }
                b'/' if self.peek_at(1) == b'*' => {
                    let start = self.pos;
                    self.bump();
                    self.bump();
                    loop {
                        if self.pos >= self.bytes.len() {
                            return Err(self.error(start, "unterminated block comment"));
                        }
                        if self.peek() == b'*' && self.peek_at(1) == b'/' {
                            self.bump();
                            self.bump();
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn token(&self, kind: SolTokenKind, start: usize, line: u32, col: u32) -> SolToken {
        SolToken {
            kind,
            text: self.text[start..self.pos].to_string(),
            span: Span::new(start, self.pos, line, col),
        }
    }

    fn next_token(&mut self) -> Result<SolToken, SolLexError> {
        let (start, line, col) = (self.pos, self.line, self.col);
        let c = self.peek();

        if c.is_ascii_alphabetic() || c == b'_' || c == b'$' {
            while self.peek().is_ascii_alphanumeric() || self.peek() == b'_' || self.peek() == b'$' {
                self.bump();
            }
            let word = &self.text[start..self.pos];
            let kind = if word == "true" || word == "false" {
                SolTokenKind::Bool
            } else if SOL_KEYWORDS.contains(&word) {
                SolTokenKind::Keyword
            } else {
                SolTokenKind::Ident
            };
            return Ok(self.token(kind, start, line, col));
        }

        if c.is_ascii_digit() {
            if c == b'0' && (self.peek_at(1) == b'x' || self.peek_at(1) == b'X') {
                self.bump();
                self.bump();
                while self.peek().is_ascii_hexdigit() {
                    self.bump();
                }
            } else {
                while self.peek().is_ascii_digit() || self.peek() == b'_' {
                    self.bump();
                }
            }
            return Ok(self.token(SolTokenKind::Number, start, line, col));
        }

        if c == b'"' || c == b'\'' {
            let quote = c;
            self.bump();
            loop {
                match self.peek() {
                    0 => return Err(self.error(start, "unterminated string literal")),
                    b'\\' => {
                        self.bump();
                        self.bump();
                    }
                    b if b == quote => {
                        self.bump();
                        return Ok(self.token(SolTokenKind::Str, start, line, col));
                    }
                    _ => self.bump(),
                }
            }
        }

        match c {
            b'(' | b')' | b'{' | b'}' | b'[' | b']' | b',' | b';' => {
                self.bump();
                Ok(self.token(SolTokenKind::Delim, start, line, col))
            }
            _ => {
                const THREE: &[&str] = &["**=", "<<=", ">>="];
                const TWO: &[&str] = &[
                    "**", "++", "--", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "&&",
                    "||", "<<", ">>", "=>", "|=", "&=", "^=",
                ];
                const ONE: &[u8] = b"+-*/%<>=!&|^?:.~";
                let rest = &self.text[self.pos..];
                for op in THREE {
                    if rest.starts_with(op) {
                        self.bump();
                        self.bump();
                        self.bump();
                        return Ok(self.token(SolTokenKind::Op, start, line, col));
                    }
                }
                for op in TWO {
                    if rest.starts_with(op) {
                        self.bump();
                        self.bump();
                        return Ok(self.token(SolTokenKind::Op, start, line, col));
                    }
                }
                if ONE.contains(&c) {
                    self.bump();
                    return Ok(self.token(SolTokenKind::Op, start, line, col));
                }
                self.bump();
                Err(self.error(start, format!("unrecognized byte sequence `{}`", &self.text[start..self.pos])))
            }
        }
    }
}

/// Reassemble source from lexemes plus trivia gaps; test oracle for
/// lossless lexing.
pub fn reassemble(text: &str, tokens: &[SolToken]) -> String {
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0usize;
    for tok in tokens {
        out.push_str(&text[cursor..tok.span.start_byte]);
        out.push_str(&tok.text);
        cursor = tok.span.end_byte;
    }
    out.push_str(&text[cursor..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input() {
        assert!(tokenize_sol("").unwrap().is_empty());
    }

    #[test]
    fn tx_origin_lexes_as_three_tokens() {
        // Reference trace: ident, dot, ident; atom folding happens in the parser.
        let toks = tokenize_sol("tx.origin").unwrap();
        let got: Vec<(SolTokenKind, &str)> = toks.iter().map(|t| (t.kind, t.text.as_str())).collect();
        assert_eq!(
            got,
            vec![
                (SolTokenKind::Ident, "tx"),
                (SolTokenKind::Op, "."),
                (SolTokenKind::Ident, "origin"),
            ]
        );
    }

    #[test]
    fn pragma_line_token_sequence() {
        let toks = tokenize_sol("pragma solidity ^0.4.24;").unwrap();
        let got: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(got, vec!["pragma", "solidity", "^", "0", ".", "4", ".", "24", ";"]);
        assert_eq!(toks[0].kind, SolTokenKind::Keyword);
    }

    #[test]
    fn reassembly_is_byte_exact() {
        let text = "pragma solidity ^0.4.24; // hdr\ncontract C { /* x */ uint a; }\n";
        let toks = tokenize_sol(text).unwrap();
        assert_eq!(reassemble(text, &toks), text);
    }
}
