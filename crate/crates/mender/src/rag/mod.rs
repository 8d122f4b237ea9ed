//! Exemplar datastores for the code generator: before/after fix examples
//! per language, retrieved lexically. The store format is JSONL, one
//! entry per line; a starter store authored from the fix catalog ships
//! with the crate.

pub mod index;

use crate::detectors::DefectCategory;
use crate::source::Language;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;
use thiserror::Error;

pub use index::{build_index, query, RagIndex, RankedExemplar};

pub const STARTER_STORE: &str = include_str!("../../assets/rag/starter.jsonl");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExemplarEntry {
    pub id: String,
    pub language: Language,
    pub category: DefectCategory,
    pub title: String,
    pub bad_snippet: String,
    pub good_snippet: String,
    pub explanation: String,
    pub tags: Vec<String>,
}

#[derive(Debug, Error)]
pub enum RagError {
    #[error("duplicate exemplar id `{0}`")]
    DuplicateId(String),
    #[error("entry `{id}`: category {category:?} does not belong to {language}")]
    LanguageMismatch {
        id: String,
        category: DefectCategory,
        language: Language,
    },
    #[error("entry `{id}`: {which} snippet does not parse: {message}")]
    SnippetParse {
        id: String,
        which: &'static str,
        message: String,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parse a JSONL store. Checks id uniqueness and language/category
/// agreement; snippet parsing is checked separately by `validate_store`
/// so loading stays cheap.
pub fn parse_store(text: &str) -> Result<Vec<ExemplarEntry>, RagError> {
    let mut entries = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry: ExemplarEntry = serde_json::from_str(line)
            .map_err(|e| RagError::Format { line: i + 1, message: e.to_string() })?;
        if !seen.insert(entry.id.clone()) {
            return Err(RagError::DuplicateId(entry.id));
        }
        if entry.category.language() != entry.language {
            return Err(RagError::LanguageMismatch {
                id: entry.id,
                category: entry.category,
                language: entry.language,
            });
        }
        entries.push(entry);
    }
    Ok(entries)
}

pub fn load_store(path: impl AsRef<Path>) -> Result<Vec<ExemplarEntry>, RagError> {
    let text = std::fs::read_to_string(path)?;
    parse_store(&text)
}

pub fn builtin_store() -> Vec<ExemplarEntry> {
    parse_store(STARTER_STORE).expect("bundled store is valid")
}

/// Full validation: both snippets of every entry parse under the
/// matching frontend.
pub fn validate_store(entries: &[ExemplarEntry]) -> Result<(), RagError> {
    for entry in entries {
        for (which, snippet) in [("bad", &entry.bad_snippet), ("good", &entry.good_snippet)] {
            let result = match entry.language {
                Language::Move => {
                    crate::move_lang::parse_move(snippet).map(|_| ()).map_err(|e| e.to_string())
                }
                Language::Solidity => {
                    crate::sol_lang::parse_sol(snippet).map(|_| ()).map_err(|e| e.to_string())
                }
            };
            if let Err(message) = result {
                return Err(RagError::SnippetParse { id: entry.id.clone(), which, message });
            }
        }
    }
    Ok(())
}

pub fn store_to_jsonl(entries: &[ExemplarEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e).expect("entry serializes"));
        out.push('\n');
    }
    out
}

/// Render retrieved exemplars as a prompt context block.
pub fn render_exemplars(ranked: &[RankedExemplar<'_>]) -> String {
    let mut out = String::new();
    for (i, r) in ranked.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!(
            "Example {} [{}] {}\nBefore:\n{}\nAfter:\n{}\nWhy: {}\n",
            i + 1,
            r.entry.category.code(),
            r.entry.title,
            r.entry.bad_snippet,
            r.entry.good_snippet,
            r.entry.explanation,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_store_meets_coverage_floor() {
        let entries = builtin_store();
        assert!(entries.len() >= 32, "starter store has {} entries", entries.len());
        for cat in DefectCategory::MOVE.iter().chain(DefectCategory::SOLIDITY.iter()) {
            let n = entries.iter().filter(|e| e.category == *cat).count();
            assert!(n >= 2, "category {cat:?} has only {n} exemplars");
        }
        validate_store(&entries).unwrap();
    }

    #[test]
    fn duplicate_id_rejected() {
        let a = r#"{"id":"x","language":"move","category":"UC","title":"t","bad_snippet":"module 0x1::m { }","good_snippet":"module 0x1::m { }","explanation":"e","tags":[]}"#;
        let text = format!("{a}\n{a}\n");
        assert!(matches!(parse_store(&text), Err(RagError::DuplicateId(_))));
    }

    #[test]
    fn language_mismatch_rejected() {
        let line = r#"{"id":"x","language":"solidity","category":"UC","title":"t","bad_snippet":"contract C {}","good_snippet":"contract C {}","explanation":"e","tags":[]}"#;
        assert!(matches!(parse_store(line), Err(RagError::LanguageMismatch { .. })));
    }

    #[test]
    fn jsonl_round_trips() {
        let entries = builtin_store();
        let text = store_to_jsonl(&entries);
        let back = parse_store(&text).unwrap();
        assert_eq!(entries, back);
    }
}
