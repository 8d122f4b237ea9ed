//! Lossless lexer for the Move subset.
//!
//! Tokens carry spans into the original text; whitespace and comments are
//! skipped but recoverable from the gaps between consecutive token spans,
//! so lexeme + trivia concatenation reproduces the input byte-exact.

use crate::source::{line_col, Span};
use thiserror::Error;

pub const MOVE_KEYWORDS: &[&str] = &[
    "module", "fun", "public", "entry", "const", "let", "loop", "while", "if", "else", "as",
    "abort", "return", "break", "use", "struct", "friend", "continue", "mut", "has", "acquires",
    "spec", "script", "native",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    /// Integer literal; `width` holds the parsed suffix when present.
    Int,
    /// `true` / `false`.
    Bool,
    /// `@addr` or hex literal used in address position.
    Address,
    /// Byte-string or hex-string literal (`b"…"`, `x"…"`).
    ByteString,
    Op,
    Delim,
}

/// Integer width suffix on a literal or named type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntWidth {
    U8,
    U16,
    U32,
    U64,
    U128,
    U256,
}

impl IntWidth {
    pub fn bits(self) -> u16 {
        match self {
            IntWidth::U8 => 8,
            IntWidth::U16 => 16,
            IntWidth::U32 => 32,
            IntWidth::U64 => 64,
            IntWidth::U128 => 128,
            IntWidth::U256 => 256,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntWidth::U8 => "u8",
            IntWidth::U16 => "u16",
            IntWidth::U32 => "u32",
            IntWidth::U64 => "u64",
            IntWidth::U128 => "u128",
            IntWidth::U256 => "u256",
        }
    }

    pub fn from_name(name: &str) -> Option<IntWidth> {
        match name {
            "u8" => Some(IntWidth::U8),
            "u16" => Some(IntWidth::U16),
            "u32" => Some(IntWidth::U32),
            "u64" => Some(IntWidth::U64),
            "u128" => Some(IntWidth::U128),
            "u256" => Some(IntWidth::U256),
            _ => None,
        }
    }

    /// Largest value representable at this width, as a decimal string.
    /// U256 has no compact literal; callers treat it as unbounded.
    pub fn max_literal(self) -> &'static str {
        match self {
            IntWidth::U8 => "255",
            IntWidth::U16 => "65535",
            IntWidth::U32 => "4294967295",
            IntWidth::U64 => "18446744073709551615",
            IntWidth::U128 => "340282366920938463463374607431768211455",
            IntWidth::U256 => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
    /// Width suffix for `Int` tokens, e.g. `1u64`.
    pub width: Option<IntWidth>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("lex error at line {line}, col {col}: {message}")]
pub struct LexError {
    pub span: Span,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

fn lex_error(text: &str, start: usize, end: usize, message: impl Into<String>) -> LexError {
    let (line, col) = line_col(text, start);
    LexError { span: Span::new(start, end, line, col), line, col, message: message.into() }
}

/// Tokenize Move source. Whitespace and `//`/`/* */` comments are skipped;
/// everything else must match a token rule.
pub fn tokenize_move(text: &str) -> Result<Vec<Token>, LexError> {
    Lexer { text, bytes: text.as_bytes(), pos: 0, line: 1, col: 1 }.run()
}

struct Lexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn run(mut self) -> Result<Vec<Token>, LexError> {
        let mut tokens = Vec::new();
        loop {
            self.skip_trivia()?;
            if self.pos >= self.bytes.len() {
                return Ok(tokens);
            }
            tokens.push(self.next_token()?);
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

    fn skip_trivia(&mut self) -> Result<(), LexError> {
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
                    let mut depth = 1usize;
                    while depth > 0 {
                        if self.pos >= self.bytes.len() {
                            return Err(lex_error(self.text, start, self.pos, "unterminated block comment"));
                        }
                        if self.peek() == b'/' && self.peek_at(1) == b'*' {
                            depth += 1;
                            self.bump();
                            self.bump();
                        } else if self.peek() == b'*' && self.peek_at(1) == b'/' {
                            depth -= 1;
                            self.bump();
                            self.bump();
                        } else {
                            self.bump();
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn token(&self, kind: TokenKind, start: usize, line: u32, col: u32, width: Option<IntWidth>) -> Token {
        Token {
            kind,
            text: self.text[start..self.pos].to_string(),
            span: Span::new(start, self.pos, line, col),
            width,
        }
    }

    fn next_token(&mut self) -> Result<Token, LexError> {
        let (start, line, col) = (self.pos, self.line, self.col);
        let c = self.peek();

        if c.is_ascii_alphabetic() || c == b'_' {
            // b"…" and x"…" byte strings share the identifier start set.
            if (c == b'b' || c == b'x') && self.peek_at(1) == b'"' {
                return self.string_literal(start, line, col);
            }
            while self.peek().is_ascii_alphanumeric() || self.peek() == b'_' {
                self.bump();
            }
            let word = &self.text[start..self.pos];
            let kind = if word == "true" || word == "false" {
                TokenKind::Bool
            } else if MOVE_KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            return Ok(self.token(kind, start, line, col, None));
        }

        if c.is_ascii_digit() {
            return self.number(start, line, col);
        }

        match c {
            b'@' => {
                self.bump();
                while self.peek().is_ascii_alphanumeric() || self.peek() == b'_' {
                    self.bump();
                }
                Ok(self.token(TokenKind::Address, start, line, col, None))
            }
            b'"' => self.string_literal(start, line, col),
            b'(' | b')' | b'{' | b'}' | b'[' | b']' | b',' | b';' | b'#' => {
                self.bump();
                Ok(self.token(TokenKind::Delim, start, line, col, None))
            }
            _ => self.operator(start, line, col),
        }
    }

    fn number(&mut self, start: usize, line: u32, col: u32) -> Result<Token, LexError> {
        if self.peek() == b'0' && (self.peek_at(1) == b'x' || self.peek_at(1) == b'X') {
            self.bump();
            self.bump();
            while self.peek().is_ascii_hexdigit() || self.peek() == b'_' {
                self.bump();
            }
        } else {
            while self.peek().is_ascii_digit() || self.peek() == b'_' {
                self.bump();
            }
        }
        // Optional width suffix: u8 … u256.
        let mut width = None;
        if self.peek() == b'u' {
            let suffix_start = self.pos;
            self.bump();
            while self.peek().is_ascii_digit() {
                self.bump();
            }
            match IntWidth::from_name(&self.text[suffix_start..self.pos]) {
                Some(w) => width = Some(w),
                None => {
                    return Err(lex_error(
                        self.text,
                        suffix_start,
                        self.pos,
                        format!("invalid integer suffix `{}`", &self.text[suffix_start..self.pos]),
                    ))
                }
            }
        }
        Ok(self.token(TokenKind::Int, start, line, col, width))
    }

    fn string_literal(&mut self, start: usize, line: u32, col: u32) -> Result<Token, LexError> {
        if self.peek() != b'"' {
            self.bump(); // b / x prefix
        }
        self.bump(); // opening quote
        loop {
            match self.peek() {
                0 => return Err(lex_error(self.text, start, self.pos, "unterminated string literal")),
                b'"' => {
                    self.bump();
                    return Ok(self.token(TokenKind::ByteString, start, line, col, None));
                }
                b'\\' => {
                    self.bump();
                    self.bump();
                }
                _ => self.bump(),
            }
        }
    }

    fn operator(&mut self, start: usize, line: u32, col: u32) -> Result<Token, LexError> {
        const TWO: &[&str] = &["::", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "->"];
        const ONE: &[u8] = b"+-*/%<>=!&|:.^";
        let rest = &self.text[self.pos..];
        for op in TWO {
            if rest.starts_with(op) {
                self.bump();
                self.bump();
                return Ok(self.token(TokenKind::Op, start, line, col, None));
            }
        }
        if ONE.contains(&self.peek()) {
            self.bump();
            return Ok(self.token(TokenKind::Op, start, line, col, None));
        }
        let end = (self.pos + 1).min(self.bytes.len());
        Err(lex_error(
            self.text,
            start,
            end,
            format!("unrecognized byte sequence `{}`", &self.text[start..end]),
        ))
    }
}

/// Reassemble the source from token lexemes plus the trivia gaps between
/// them. Used by tests to assert lossless lexing.
pub fn reassemble(text: &str, tokens: &[Token]) -> String {
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

    fn kinds(text: &str) -> Vec<(TokenKind, String)> {
        tokenize_move(text)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(tokenize_move("").unwrap().is_empty());
    }

    #[test]
    fn let_statement_token_stream() {
        // Hand-traced: keyword, ident, op, int with u64 suffix, semicolon.
        let toks = tokenize_move("let _x = 1u64;").unwrap();
        let got: Vec<(TokenKind, &str, Option<IntWidth>)> =
            toks.iter().map(|t| (t.kind, t.text.as_str(), t.width)).collect();
        assert_eq!(
            got,
            vec![
                (TokenKind::Keyword, "let", None),
                (TokenKind::Ident, "_x", None),
                (TokenKind::Op, "=", None),
                (TokenKind::Int, "1u64", Some(IntWidth::U64)),
                (TokenKind::Delim, ";", None),
            ]
        );
    }

    #[test]
    fn block_comment_is_skipped() {
        let got = kinds("/* c */ abort 1");
        assert_eq!(
            got,
            vec![
                (TokenKind::Keyword, "abort".to_string()),
                (TokenKind::Int, "1".to_string()),
            ]
        );
    }

    #[test]
    fn unterminated_block_comment_errors() {
        let err = tokenize_move("fun f() { /* oops").unwrap_err();
        assert!(err.message.contains("unterminated block comment"));
    }

    #[test]
    fn unrecognized_byte_errors_with_position() {
        let err = tokenize_move("let x = $;").unwrap_err();
        assert_eq!(err.span.start_byte, 8);
        assert!(err.message.contains('$'));
    }

    #[test]
    fn reassembly_is_byte_exact() {
        let text = "module 0x1::m { // line\n  const C: u64 = 5; /* b */ fun f(): u64 { C }\n}\n";
        let toks = tokenize_move(text).unwrap();
        assert_eq!(reassemble(text, &toks), text);
    }
}
