//! Mechanical patch generation and application. Each fixable category
//! has a span-edit recipe derived from the same sites the detectors
//! matched; advisory categories produce rationale-only patches.

pub mod move_fix;
pub mod sol_fix;

use crate::detectors::{AuditReport, DefectCategory, Finding};
use crate::source::{Language, SourceUnit, Span};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchKind {
    Mechanical,
    Advisory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub span: Span,
    pub replacement: String,
}

/// Span edits for one finding, sorted by start and non-overlapping.
/// Advisory patches carry no edits and a non-empty rationale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Patch {
    pub finding_id: String,
    pub category: DefectCategory,
    pub kind: PatchKind,
    pub edits: Vec<Edit>,
    pub rationale: String,
}

impl Patch {
    pub fn advisory(finding: &Finding, rationale: impl Into<String>) -> Patch {
        Patch {
            finding_id: finding.id.clone(),
            category: finding.category,
            kind: PatchKind::Advisory,
            edits: Vec::new(),
            rationale: rationale.into(),
        }
    }

    pub fn mechanical(
        finding: &Finding,
        mut edits: Vec<Edit>,
        rationale: impl Into<String>,
    ) -> Patch {
        edits.sort_by_key(|e| e.span.start_byte);
        Patch {
            finding_id: finding.id.clone(),
            category: finding.category,
            kind: PatchKind::Mechanical,
            edits,
            rationale: rationale.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("finding {id} ({category:?}) does not match the unit: {reason}")]
    UnsupportedFinding {
        id: String,
        category: DefectCategory,
        reason: String,
    },
    #[error("patch edits overlap or fall outside the unit")]
    PatchConflict,
    #[error("patched output no longer parses: {0}")]
    PostParseFailure(String),
}

/// Build the patch for one finding. The unit must be the same text the
/// finding was produced from.
pub fn generate_patch(finding: &Finding, unit: &SourceUnit) -> Result<Patch, RepairError> {
    if finding.category.language() != unit.language {
        return Err(RepairError::UnsupportedFinding {
            id: finding.id.clone(),
            category: finding.category,
            reason: format!(
                "{} finding cannot apply to a {} unit",
                finding.category.language(),
                unit.language
            ),
        });
    }
    match unit.language {
        Language::Move => move_fix::generate(finding, unit),
        Language::Solidity => sol_fix::generate(finding, unit),
    }
}

/// Apply one patch. Edits are applied right to left so earlier offsets
/// stay valid; the result must reparse or the patch is rejected.
pub fn apply_patch(unit: &SourceUnit, patch: &Patch) -> Result<String, RepairError> {
    if patch.edits.is_empty() {
        return Ok(unit.text.clone());
    }
    validate_edits(&unit.text, &patch.edits)?;
    let mut text = unit.text.clone();
    for edit in patch.edits.iter().rev() {
        text.replace_range(edit.span.start_byte..edit.span.end_byte, &edit.replacement);
    }
    ensure_parses(unit.language, &text)?;
    Ok(text)
}

fn validate_edits(text: &str, edits: &[Edit]) -> Result<(), RepairError> {
    let mut prev_end = 0usize;
    for (i, edit) in edits.iter().enumerate() {
        if edit.span.start_byte > edit.span.end_byte || edit.span.end_byte > text.len() {
            return Err(RepairError::PatchConflict);
        }
        if i > 0 && edit.span.start_byte < prev_end {
            return Err(RepairError::PatchConflict);
        }
        prev_end = edit.span.end_byte;
    }
    Ok(())
}

fn ensure_parses(language: Language, text: &str) -> Result<(), RepairError> {
    match language {
        Language::Move => crate::move_lang::parse_move(text)
            .map(|_| ())
            .map_err(|e| RepairError::PostParseFailure(e.to_string())),
        Language::Solidity => crate::sol_lang::parse_sol(text)
            .map(|_| ())
            .map_err(|e| RepairError::PostParseFailure(e.to_string())),
    }
}

/// Result of applying every mechanical patch from a report in one pass.
#[derive(Clone, Debug)]
pub struct RepairOutcome {
    pub text: String,
    pub applied: Vec<String>,
    /// Finding ids whose patches were advisory, stale, or conflicted
    /// with an earlier edit.
    pub skipped: Vec<String>,
}

/// Generate patches for every finding in the report and apply all
/// mechanical, non-conflicting edits in one pass.
pub fn repair_all(unit: &SourceUnit, report: &AuditReport) -> Result<RepairOutcome, RepairError> {
    let mut accepted: Vec<Edit> = Vec::new();
    let mut applied = Vec::new();
    let mut skipped = Vec::new();
    for finding in &report.findings {
        let patch = match generate_patch(finding, unit) {
            Ok(p) => p,
            Err(_) => {
                skipped.push(finding.id.clone());
                continue;
            }
        };
        if patch.kind == PatchKind::Advisory {
            skipped.push(finding.id.clone());
            continue;
        }
        let conflicts = patch
            .edits
            .iter()
            .any(|e| accepted.iter().any(|a| spans_conflict(a.span, e.span)));
        if conflicts {
            skipped.push(finding.id.clone());
            continue;
        }
        accepted.extend(patch.edits.iter().cloned());
        applied.push(finding.id.clone());
    }
    accepted.sort_by_key(|e| (e.span.start_byte, e.span.end_byte));
    let mut text = unit.text.clone();
    for edit in accepted.iter().rev() {
        text.replace_range(edit.span.start_byte..edit.span.end_byte, &edit.replacement);
    }
    ensure_parses(unit.language, &text)?;
    Ok(RepairOutcome { text, applied, skipped })
}

fn spans_conflict(a: Span, b: Span) -> bool {
    if a.is_empty() && b.is_empty() {
        return a.start_byte == b.start_byte;
    }
    if a.is_empty() {
        return b.start_byte < a.start_byte && a.start_byte < b.end_byte;
    }
    if b.is_empty() {
        return a.start_byte < b.start_byte && b.start_byte < a.end_byte;
    }
    a.start_byte < b.end_byte && b.start_byte < a.end_byte
}

// ---------------------------------------------------------------------------
// shared text helpers
// ---------------------------------------------------------------------------

/// Expand a span to cover its whole line(s) including the trailing
/// newline, when the surrounding line content is only whitespace.
pub(crate) fn expand_to_line(text: &str, span: Span) -> Span {
    let bytes = text.as_bytes();
    let mut start = span.start_byte;
    let line_start = text[..start].rfind('\n').map(|i| i + 1).unwrap_or(0);
    if text[line_start..start].chars().all(|c| c == ' ' || c == '\t') {
        start = line_start;
    }
    let mut end = span.end_byte;
    let mut scan = end;
    while scan < bytes.len() && (bytes[scan] == b' ' || bytes[scan] == b'\t' || bytes[scan] == b'\r')
    {
        scan += 1;
    }
    if scan < bytes.len() && bytes[scan] == b'\n' {
        end = scan + 1;
    }
    Span::new(start, end, span.line, 1)
}

/// Leading whitespace of the line containing `pos`.
pub(crate) fn indent_at(text: &str, pos: usize) -> String {
    let line_start = text[..pos].rfind('\n').map(|i| i + 1).unwrap_or(0);
    text[line_start..]
        .chars()
        .take_while(|c| *c == ' ' || *c == '\t')
        .collect()
}

pub(crate) fn insert_at(pos: usize, replacement: String) -> Edit {
    Edit { span: Span::new(pos, pos, 0, 0), replacement }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::Language;

    #[test]
    fn empty_edit_list_is_identity() {
        let unit = SourceUnit::new(Language::Move, "module 0x1::m { }");
        let patch = Patch {
            finding_id: "x".into(),
            category: DefectCategory::Timestamp,
            kind: PatchKind::Advisory,
            edits: vec![],
            rationale: "advisory".into(),
        };
        assert_eq!(apply_patch(&unit, &patch).unwrap(), unit.text);
    }

    #[test]
    fn disjoint_edits_apply_right_to_left() {
        let unit = SourceUnit::new(Language::Move, "module 0x1::m { fun f() { } fun g() { } }");
        let patch = Patch {
            finding_id: "x".into(),
            category: DefectCategory::UnusedPrivateFunction,
            kind: PatchKind::Mechanical,
            edits: vec![
                Edit { span: Span::new(16, 28, 1, 17), replacement: String::new() },
                Edit { span: Span::new(28, 39, 1, 29), replacement: "fun h() { }".into() },
            ],
            rationale: "test".into(),
        };
        // hand-computed: delete f, replace g with h
        assert_eq!(apply_patch(&unit, &patch).unwrap(), "module 0x1::m { fun h() { } }");
    }

    #[test]
    fn overlapping_edits_conflict() {
        let unit = SourceUnit::new(Language::Move, "module 0x1::m { }");
        let patch = Patch {
            finding_id: "x".into(),
            category: DefectCategory::UnusedConstant,
            kind: PatchKind::Mechanical,
            edits: vec![
                Edit { span: Span::new(0, 10, 1, 1), replacement: "a".into() },
                Edit { span: Span::new(5, 12, 1, 6), replacement: "b".into() },
            ],
            rationale: "test".into(),
        };
        assert!(matches!(apply_patch(&unit, &patch), Err(RepairError::PatchConflict)));
    }

    #[test]
    fn unparseable_result_is_rejected() {
        let unit = SourceUnit::new(Language::Move, "module 0x1::m { fun f() { } }");
        let patch = Patch {
            finding_id: "x".into(),
            category: DefectCategory::UnusedPrivateFunction,
            kind: PatchKind::Mechanical,
            edits: vec![Edit { span: Span::new(0, 7, 1, 1), replacement: String::new() }],
            rationale: "test".into(),
        };
        assert!(matches!(apply_patch(&unit, &patch), Err(RepairError::PostParseFailure(_))));
    }

    #[test]
    fn expand_to_line_takes_whole_line() {
        let text = "a;\n    const C: u64 = 5;\nb;\n";
        let span = Span::new(7, 24, 2, 5);
        let expanded = expand_to_line(text, span);
        assert_eq!(&text[expanded.start_byte..expanded.end_byte], "    const C: u64 = 5;\n");
    }
}
