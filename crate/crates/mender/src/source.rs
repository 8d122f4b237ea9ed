//! Source units, byte spans, and the language tag shared by every layer.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::{Path, PathBuf};

/// Contract language of a source unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Move,
    Solidity,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::Move => "move",
            Language::Solidity => "solidity",
        }
    }

    /// Display name used in prompts ("Move" / "Solidity").
    pub fn display_name(self) -> &'static str {
        match self {
            Language::Move => "Move",
            Language::Solidity => "Solidity",
        }
    }

    pub fn from_extension(path: &Path) -> Option<Language> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("move") => Some(Language::Move),
            Some("sol") => Some(Language::Solidity),
            _ => None,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Half-open byte range into a unit's text, with the 1-based line/column
/// of its start for diagnostics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start_byte: usize,
    pub end_byte: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(start_byte: usize, end_byte: usize, line: u32, col: u32) -> Span {
        debug_assert!(start_byte <= end_byte);
        Span { start_byte, end_byte, line, col }
    }

    /// Span covering both operands; keeps the left position.
    pub fn join(self, other: Span) -> Span {
        Span {
            start_byte: self.start_byte.min(other.start_byte),
            end_byte: self.end_byte.max(other.end_byte),
            line: if self.start_byte <= other.start_byte { self.line } else { other.line },
            col: if self.start_byte <= other.start_byte { self.col } else { other.col },
        }
    }

    pub fn contains(self, inner: Span) -> bool {
        self.start_byte <= inner.start_byte && inner.end_byte <= self.end_byte
    }

    pub fn len(self) -> usize {
        self.end_byte - self.start_byte
    }

    pub fn is_empty(self) -> bool {
        self.start_byte == self.end_byte
    }

    pub fn slice(self, text: &str) -> &str {
        &text[self.start_byte..self.end_byte]
    }
}

/// One contract file: language tag, optional path, raw text, and a stable
/// content-derived id.
///
/// The id is a digest of the text alone so identical inputs produce
/// identical finding ids across machines and paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceUnit {
    pub id: String,
    pub language: Language,
    pub path: Option<PathBuf>,
    pub text: String,
}

impl SourceUnit {
    pub fn new(language: Language, text: impl Into<String>) -> SourceUnit {
        let text = text.into();
        SourceUnit { id: content_id(&text), language, path: None, text }
    }

    pub fn with_path(language: Language, path: impl Into<PathBuf>, text: impl Into<String>) -> SourceUnit {
        let mut unit = SourceUnit::new(language, text);
        unit.path = Some(path.into());
        unit
    }

    pub fn read(path: impl AsRef<Path>) -> std::io::Result<SourceUnit> {
        let path = path.as_ref();
        let language = Language::from_extension(path).ok_or_else(|| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                format!("cannot infer language from extension: {}", path.display()),
            )
        })?;
        let text = std::fs::read_to_string(path)?;
        Ok(SourceUnit::with_path(language, path, text))
    }

    /// Path for diagnostics; falls back to the content id.
    pub fn display_name(&self) -> String {
        match &self.path {
            Some(p) => p.display().to_string(),
            None => format!("<unit {}>", self.id),
        }
    }
}

fn content_id(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    hex_prefix(&digest, 12)
}

/// Short stable hash used for finding ids: digest of the joined parts.
pub fn stable_hash(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            hasher.update([0u8]);
        }
        hasher.update(part.as_bytes());
    }
    hex_prefix(&hasher.finalize(), 16)
}

fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    let mut out = String::with_capacity(chars);
    for b in bytes {
        use std::fmt::Write;
        let _ = write!(out, "{b:02x}");
        if out.len() >= chars {
            break;
        }
    }
    out.truncate(chars);
    out
}

/// 1-based line/column of a byte offset in `text`.
pub fn line_col(text: &str, offset: usize) -> (u32, u32) {
    let mut line = 1u32;
    let mut col = 1u32;
    for (i, ch) in text.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_id_depends_on_content_only() {
        let a = SourceUnit::new(Language::Move, "module 0x1::m {}");
        let b = SourceUnit::with_path(Language::Move, "elsewhere.move", "module 0x1::m {}");
        assert_eq!(a.id, b.id);
        let c = SourceUnit::new(Language::Move, "module 0x1::n {}");
        assert_ne!(a.id, c.id);
    }

    #[test]
    fn span_join_and_contains() {
        let a = Span::new(4, 10, 1, 5);
        let b = Span::new(12, 20, 2, 3);
        let j = a.join(b);
        assert_eq!((j.start_byte, j.end_byte), (4, 20));
        assert_eq!((j.line, j.col), (1, 5));
        assert!(j.contains(a) && j.contains(b));
        assert!(!a.contains(b));
    }

    #[test]
    fn line_col_counts_newlines() {
        let text = "ab\ncd\nef";
        assert_eq!(line_col(text, 0), (1, 1));
        assert_eq!(line_col(text, 3), (2, 1));
        assert_eq!(line_col(text, 7), (3, 2));
    }
}
