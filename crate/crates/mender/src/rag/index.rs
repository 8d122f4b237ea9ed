//! BM25 inverted index over exemplar entries, partitioned by language.
//!
//! Scoring is BM25 with k1 = 1.2, b = 0.75 and the Lucene idf form
//! `ln(1 + (N - df + 0.5) / (df + 0.5))`, plus a fixed +5.0 bonus when
//! the query category matches the entry. Ties break on ascending id, so
//! rankings are identical across runs and platforms.

use crate::detectors::DefectCategory;
use crate::rag::{ExemplarEntry, RagError};
use crate::source::Language;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const BM25_K1: f64 = 1.2;
pub const BM25_B: f64 = 0.75;
pub const CATEGORY_BONUS: f64 = 5.0;

#[derive(Debug)]
pub struct RagIndex {
    entries: Vec<ExemplarEntry>,
    /// term → postings (entry index, term frequency); per-language
    /// partitions are disjoint because terms carry the language key.
    postings: HashMap<(Language, String), Vec<(usize, u32)>>,
    doc_len: Vec<u32>,
    stats: BTreeMap<&'static str, LanguageStats>,
}

#[derive(Clone, Copy, Debug, Default)]
struct LanguageStats {
    count: usize,
    total_len: u64,
}

impl RagIndex {
    pub fn entry_count(&self, language: Language) -> usize {
        self.stats.get(language.as_str()).map(|s| s.count).unwrap_or(0)
    }

    pub fn avg_doc_len(&self, language: Language) -> f64 {
        let s = self.stats.get(language.as_str()).copied().unwrap_or_default();
        if s.count == 0 {
            0.0
        } else {
            s.total_len as f64 / s.count as f64
        }
    }

    pub fn entries(&self) -> &[ExemplarEntry] {
        &self.entries
    }
}

#[derive(Clone, Debug)]
pub struct RankedExemplar<'a> {
    pub entry: &'a ExemplarEntry,
    pub score: f64,
}

/// Build the immutable index: terms come from the title, tags,
/// explanation, and identifier tokens of the bad snippet, lowercased
/// and split on underscores and case boundaries.
pub fn build_index(entries: Vec<ExemplarEntry>) -> Result<RagIndex, RagError> {
    let mut seen = BTreeSet::new();
    for e in &entries {
        if !seen.insert(e.id.clone()) {
            return Err(RagError::DuplicateId(e.id.clone()));
        }
    }
    let mut postings: HashMap<(Language, String), Vec<(usize, u32)>> = HashMap::new();
    let mut doc_len = Vec::with_capacity(entries.len());
    let mut stats: BTreeMap<&'static str, LanguageStats> = BTreeMap::new();
    for (idx, entry) in entries.iter().enumerate() {
        let terms = entry_terms(entry);
        let len = terms.len() as u32;
        doc_len.push(len);
        let s = stats.entry(entry.language.as_str()).or_default();
        s.count += 1;
        s.total_len += len as u64;
        let mut freq: BTreeMap<String, u32> = BTreeMap::new();
        for t in terms {
            *freq.entry(t).or_default() += 1;
        }
        for (term, tf) in freq {
            postings.entry((entry.language, term)).or_default().push((idx, tf));
        }
    }
    Ok(RagIndex { entries, postings, doc_len, stats })
}

/// Rank the language's exemplars for a query. Every entry of the
/// language is a candidate; zero-overlap entries can still win on the
/// category bonus.
pub fn query<'a>(
    index: &'a RagIndex,
    language: Language,
    category: DefectCategory,
    code_tokens: &[String],
    k: usize,
) -> Vec<RankedExemplar<'a>> {
    let n = index.entry_count(language);
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let avg = index.avg_doc_len(language);
    let unique_terms: BTreeSet<&String> = code_tokens.iter().collect();
    let mut scores: HashMap<usize, f64> = HashMap::new();
    for term in unique_terms {
        let Some(posting) = index.postings.get(&(language, term.clone())) else {
            continue;
        };
        let df = posting.len() as f64;
        let idf = (1.0 + (n as f64 - df + 0.5) / (df + 0.5)).ln();
        for (idx, tf) in posting {
            let tf = *tf as f64;
            let dl = index.doc_len[*idx] as f64;
            let norm = 1.0 - BM25_B + BM25_B * dl / avg;
            let sat = tf * (BM25_K1 + 1.0) / (tf + BM25_K1 * norm);
            *scores.entry(*idx).or_default() += idf * sat;
        }
    }
    let mut ranked: Vec<RankedExemplar<'a>> = index
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.language == language)
        .map(|(idx, entry)| {
            let mut score = scores.get(&idx).copied().unwrap_or(0.0);
            if entry.category == category {
                score += CATEGORY_BONUS;
            }
            RankedExemplar { entry, score }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.entry.id.cmp(&b.entry.id))
    });
    ranked.truncate(k);
    ranked
}

fn entry_terms(entry: &ExemplarEntry) -> Vec<String> {
    let mut terms = Vec::new();
    terms.extend(split_terms(&entry.title));
    for tag in &entry.tags {
        terms.extend(split_terms(tag));
    }
    terms.extend(split_terms(&entry.explanation));
    terms.extend(identifier_tokens(&entry.bad_snippet, entry.language));
    terms
}

/// Lowercased word tokens, splitting identifiers on underscores and
/// camel-case boundaries.
pub fn split_terms(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split(|c: char| !c.is_ascii_alphanumeric() && c != '_') {
        if word.is_empty() {
            continue;
        }
        for piece in split_identifier(word) {
            out.push(piece);
        }
    }
    out
}

fn split_identifier(word: &str) -> Vec<String> {
    let mut pieces = Vec::new();
    for chunk in word.split('_') {
        if chunk.is_empty() {
            continue;
        }
        let mut current = String::new();
        let chars: Vec<char> = chunk.chars().collect();
        for (i, c) in chars.iter().enumerate() {
            if c.is_uppercase() && i > 0 && chars[i - 1].is_lowercase() {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(c.to_ascii_lowercase());
        }
        if !current.is_empty() {
            pieces.push(current);
        }
    }
    pieces
}

/// Identifier tokens of a snippet under the language's lexer; falls back
/// to word splitting when the snippet does not lex.
pub fn identifier_tokens(code: &str, language: Language) -> Vec<String> {
    let idents: Option<Vec<String>> = match language {
        Language::Move => crate::move_lang::lexer::tokenize_move(code).ok().map(|toks| {
            toks.into_iter()
                .filter(|t| t.kind == crate::move_lang::lexer::TokenKind::Ident)
                .map(|t| t.text)
                .collect()
        }),
        Language::Solidity => crate::sol_lang::lexer::tokenize_sol(code).ok().map(|toks| {
            toks.into_iter()
                .filter(|t| t.kind == crate::sol_lang::lexer::SolTokenKind::Ident)
                .map(|t| t.text)
                .collect()
        }),
    };
    match idents {
        Some(names) => names.iter().flat_map(|n| split_identifier(n)).collect(),
        None => split_terms(code),
    }
}

/// Query tokens for a source unit: its identifier tokens.
pub fn unit_tokens(text: &str, language: Language) -> Vec<String> {
    identifier_tokens(text, language)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, category: DefectCategory, title: &str) -> ExemplarEntry {
        ExemplarEntry {
            id: id.to_string(),
            language: category.language(),
            category,
            title: title.to_string(),
            bad_snippet: "module 0x1::m { }".to_string(),
            good_snippet: "module 0x1::m { }".to_string(),
            explanation: String::new(),
            tags: Vec::new(),
        }
    }

    #[test]
    fn empty_store_returns_nothing() {
        let index = build_index(Vec::new()).unwrap();
        let hits = query(&index, Language::Move, DefectCategory::UnusedConstant, &[], 3);
        assert!(hits.is_empty());
    }

    #[test]
    fn statistics_match_hand_computation() {
        // doc lengths: titles split to 3/2/1 terms, plus ident `m` from
        // the snippet → 4, 3, 2; mean = 3.
        let entries = vec![
            entry("a", DefectCategory::UncheckedReturn, "unchecked return call"),
            entry("b", DefectCategory::InfiniteLoop, "loop bound"),
            entry("c", DefectCategory::UnusedConstant, "constant"),
        ];
        let index = build_index(entries).unwrap();
        assert_eq!(index.entry_count(Language::Move), 3);
        assert!((index.avg_doc_len(Language::Move) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_id_fails_build() {
        let entries = vec![
            entry("a", DefectCategory::UncheckedReturn, "x"),
            entry("a", DefectCategory::InfiniteLoop, "y"),
        ];
        assert!(matches!(build_index(entries), Err(RagError::DuplicateId(_))));
    }

    #[test]
    fn category_bonus_dominates_token_overlap() {
        // Hand-computed BM25 for the overlapping entry: one query term
        // `call`, df = 1 over N = 2, idf = ln(1 + 1.5/1.5) = ln 2.
        // tf = 1, dl = 4, avg = 3.5, norm = 0.25 + 0.75*4/3.5,
        // sat = 2.2 / (1 + 1.2*norm). Score = 0.6548752503 < 5.0 bonus.
        let entries = vec![
            entry("zz-match-tokens", DefectCategory::InfiniteLoop, "call path trace"),
            entry("aa-match-category", DefectCategory::UncheckedReturn, "drop result"),
        ];
        let index = build_index(entries).unwrap();
        let hits = query(
            &index,
            Language::Move,
            DefectCategory::UncheckedReturn,
            &["call".to_string()],
            2,
        );
        assert_eq!(hits[0].entry.id, "aa-match-category");
        assert!((hits[0].score - 5.0).abs() < 1e-12);
        let expected_bm25 = {
            let idf = (2.0f64).ln();
            let norm = 0.25 + 0.75 * 4.0 / 3.5;
            idf * (2.2 / (1.0 + 1.2 * norm))
        };
        assert!((hits[1].score - expected_bm25).abs() < 1e-12);
        assert!((hits[1].score - 0.6548752503449792).abs() < 1e-9);
    }

    #[test]
    fn equal_scores_order_by_id_ascending() {
        let entries = vec![
            entry("beta", DefectCategory::UnusedConstant, "same title"),
            entry("alpha", DefectCategory::UnusedConstant, "same title"),
        ];
        let index = build_index(entries).unwrap();
        let hits = query(&index, Language::Move, DefectCategory::UnusedConstant, &[], 2);
        assert_eq!(hits[0].entry.id, "alpha");
        assert_eq!(hits[1].entry.id, "beta");
        assert_eq!(hits[0].score, hits[1].score);
    }

    #[test]
    fn language_partitions_are_isolated() {
        let mut sol = entry("sol-1", DefectCategory::Reentrancy, "withdraw pattern");
        sol.bad_snippet = "contract C { }".to_string();
        sol.good_snippet = "contract C { }".to_string();
        let entries = vec![entry("mv-1", DefectCategory::UncheckedReturn, "calls"), sol];
        let index = build_index(entries).unwrap();
        let hits = query(&index, Language::Move, DefectCategory::UncheckedReturn, &[], 10);
        assert!(hits.iter().all(|h| h.entry.language == Language::Move));
        assert_eq!(hits.len(), 1);
    }

    #[test]
    fn adding_matching_term_never_lowers_rank() {
        let entries = vec![
            entry("target", DefectCategory::UnusedConstant, "zebra pattern"),
            entry("noise-1", DefectCategory::UnusedConstant, "common words"),
            entry("noise-2", DefectCategory::UnusedConstant, "common words"),
        ];
        let index = build_index(entries).unwrap();
        let base = query(&index, Language::Move, DefectCategory::UnusedConstant, &["common".into()], 3);
        let base_pos = base.iter().position(|h| h.entry.id == "target").unwrap();
        let extended = query(
            &index,
            Language::Move,
            DefectCategory::UnusedConstant,
            &["common".into(), "zebra".into()],
            3,
        );
        let new_pos = extended.iter().position(|h| h.entry.id == "target").unwrap();
        assert!(new_pos <= base_pos);
        assert_eq!(new_pos, 0);
    }

    #[test]
    fn repeated_queries_are_identical() {
        let entries = crate::rag::builtin_store();
        let index = build_index(entries).unwrap();
        let tokens: Vec<String> = vec!["balance".into(), "withdraw".into(), "owner".into()];
        let a: Vec<(String, f64)> = query(&index, Language::Solidity, DefectCategory::Reentrancy, &tokens, 5)
            .iter()
            .map(|h| (h.entry.id.clone(), h.score))
            .collect();
        for _ in 0..10 {
            let b: Vec<(String, f64)> =
                query(&index, Language::Solidity, DefectCategory::Reentrancy, &tokens, 5)
                    .iter()
                    .map(|h| (h.entry.id.clone(), h.score))
                    .collect();
            assert_eq!(a, b);
        }
    }
}
