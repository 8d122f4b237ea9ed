//! Deterministic rule-based auditor: eight Move categories and eight
//! Solidity categories, each with one detector. `audit` dispatches every
//! detector for the unit's language and returns a stably sorted report.

pub mod move_rules;
pub mod sol_rules;

use crate::move_lang::{build_move_symbols, parse_move, ParseDiagnostic, ParseError};
use crate::sol_lang::parse_sol;
use crate::source::{stable_hash, Language, SourceUnit, Span};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

pub const DETECTOR_SUITE_VERSION: &str = "1.0.0";

/// Maximum bytes of source quoted as finding evidence.
const EVIDENCE_LIMIT: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DefectCategory {
    // Move
    #[serde(rename = "UR")]
    UncheckedReturn,
    #[serde(rename = "IL")]
    InfiniteLoop,
    #[serde(rename = "UB")]
    UnnecessaryBoolean,
    #[serde(rename = "UC")]
    UnusedConstant,
    #[serde(rename = "UPF")]
    UnusedPrivateFunction,
    #[serde(rename = "UTC")]
    UnnecessaryTypeConversion,
    #[serde(rename = "Ov")]
    Overflow,
    #[serde(rename = "PL")]
    PrecisionLoss,
    // Solidity
    #[serde(rename = "REENTRANCY")]
    Reentrancy,
    #[serde(rename = "INT_OVERFLOW")]
    IntOverflow,
    #[serde(rename = "DOS")]
    DenialOfService,
    #[serde(rename = "ACCESS_CONTROL")]
    AccessControl,
    #[serde(rename = "UNINIT_STORAGE")]
    UninitStorage,
    #[serde(rename = "TX_ORIGIN")]
    TxOrigin,
    #[serde(rename = "TIMESTAMP")]
    Timestamp,
    #[serde(rename = "GAS_LIMIT")]
    GasLimit,
}

impl DefectCategory {
    pub const MOVE: [DefectCategory; 8] = [
        DefectCategory::UncheckedReturn,
        DefectCategory::InfiniteLoop,
        DefectCategory::UnnecessaryBoolean,
        DefectCategory::UnusedConstant,
        DefectCategory::UnusedPrivateFunction,
        DefectCategory::UnnecessaryTypeConversion,
        DefectCategory::Overflow,
        DefectCategory::PrecisionLoss,
    ];

    pub const SOLIDITY: [DefectCategory; 8] = [
        DefectCategory::Reentrancy,
        DefectCategory::IntOverflow,
        DefectCategory::DenialOfService,
        DefectCategory::AccessControl,
        DefectCategory::UninitStorage,
        DefectCategory::TxOrigin,
        DefectCategory::Timestamp,
        DefectCategory::GasLimit,
    ];

    pub fn language(self) -> Language {
        if DefectCategory::MOVE.contains(&self) {
            Language::Move
        } else {
            Language::Solidity
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            DefectCategory::UncheckedReturn => "UR",
            DefectCategory::InfiniteLoop => "IL",
            DefectCategory::UnnecessaryBoolean => "UB",
            DefectCategory::UnusedConstant => "UC",
            DefectCategory::UnusedPrivateFunction => "UPF",
            DefectCategory::UnnecessaryTypeConversion => "UTC",
            DefectCategory::Overflow => "Ov",
            DefectCategory::PrecisionLoss => "PL",
            DefectCategory::Reentrancy => "REENTRANCY",
            DefectCategory::IntOverflow => "INT_OVERFLOW",
            DefectCategory::DenialOfService => "DOS",
            DefectCategory::AccessControl => "ACCESS_CONTROL",
            DefectCategory::UninitStorage => "UNINIT_STORAGE",
            DefectCategory::TxOrigin => "TX_ORIGIN",
            DefectCategory::Timestamp => "TIMESTAMP",
            DefectCategory::GasLimit => "GAS_LIMIT",
        }
    }

    pub fn from_code(code: &str) -> Option<DefectCategory> {
        DefectCategory::MOVE
            .iter()
            .chain(DefectCategory::SOLIDITY.iter())
            .copied()
            .find(|c| c.code() == code)
    }

    pub fn severity(self) -> Severity {
        match self {
            DefectCategory::Reentrancy
            | DefectCategory::IntOverflow
            | DefectCategory::AccessControl
            | DefectCategory::Overflow => Severity::Critical,
            DefectCategory::DenialOfService
            | DefectCategory::TxOrigin
            | DefectCategory::Timestamp
            | DefectCategory::GasLimit
            | DefectCategory::UncheckedReturn
            | DefectCategory::InfiniteLoop
            | DefectCategory::PrecisionLoss
            | DefectCategory::UninitStorage => Severity::Warning,
            DefectCategory::UnnecessaryBoolean
            | DefectCategory::UnusedConstant
            | DefectCategory::UnusedPrivateFunction
            | DefectCategory::UnnecessaryTypeConversion => Severity::Advisory,
        }
    }
}

impl std::fmt::Display for DefectCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Advisory,
    Warning,
    Critical,
}

/// One located defect instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// Stable content hash of (unit id, category, span).
    pub id: String,
    pub category: DefectCategory,
    pub span: Span,
    pub severity: Severity,
    pub message: String,
    /// Source snippet at the span, truncated.
    pub evidence: String,
    /// A mechanical fix is available for this instance.
    pub fixable: bool,
}

impl Finding {
    pub fn new(
        unit: &SourceUnit,
        category: DefectCategory,
        span: Span,
        message: impl Into<String>,
        fixable: bool,
    ) -> Finding {
        let id = stable_hash(&[
            &unit.id,
            category.code(),
            &span.start_byte.to_string(),
            &span.end_byte.to_string(),
        ]);
        let mut evidence = span.slice(&unit.text).to_string();
        if evidence.len() > EVIDENCE_LIMIT {
            let mut cut = EVIDENCE_LIMIT;
            while !evidence.is_char_boundary(cut) {
                cut -= 1;
            }
            evidence.truncate(cut);
            evidence.push('…');
        }
        Finding {
            id,
            category,
            span,
            severity: category.severity(),
            message: message.into(),
            evidence,
            fixable,
        }
    }
}

/// The auditor's (and validator's) output for one unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub unit_id: String,
    pub language: Language,
    pub findings: Vec<Finding>,
    pub detector_suite_version: String,
    /// Wall time of this run; process-local, excluded from the wire
    /// format so serialized reports stay byte-deterministic.
    #[serde(skip)]
    pub elapsed_ms: u64,
}

impl AuditReport {
    pub fn count_of(&self, category: DefectCategory) -> usize {
        self.findings.iter().filter(|f| f.category == category).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("unit does not parse: {}", .diagnostics.first().map(|d| d.to_string()).unwrap_or_default())]
    ParseFailed { diagnostics: Vec<ParseDiagnostic> },
}

impl From<ParseError> for AuditError {
    fn from(e: ParseError) -> AuditError {
        AuditError::ParseFailed { diagnostics: e.diagnostics() }
    }
}

/// Run every detector for the unit's language. Deterministic: identical
/// text yields an identical findings list.
pub fn audit(unit: &SourceUnit) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let mut findings = match unit.language {
        Language::Move => {
            let modules = parse_move(&unit.text)?;
            let mut all = Vec::new();
            for module in &modules {
                let symbols = build_move_symbols(module);
                all.extend(move_rules::detect_ur(module, &symbols, unit));
                all.extend(move_rules::detect_il(module, unit));
                all.extend(move_rules::detect_ub(module, unit));
                all.extend(move_rules::detect_uc(module, &symbols, unit));
                all.extend(move_rules::detect_upf(module, &symbols, unit));
                all.extend(move_rules::detect_utc(module, &symbols, unit));
                all.extend(move_rules::detect_ov(module, &symbols, unit));
                all.extend(move_rules::detect_pl(module, unit));
            }
            all
        }
        Language::Solidity => {
            let file = parse_sol(&unit.text)?;
            let mut all = Vec::new();
            all.extend(sol_rules::detect_sol_reentrancy(&file, unit));
            all.extend(sol_rules::detect_sol_overflow(&file, unit));
            all.extend(sol_rules::detect_sol_dos(&file, unit));
            all.extend(sol_rules::detect_sol_access(&file, unit));
            all.extend(sol_rules::detect_sol_uninit_storage(&file, unit));
            all.extend(sol_rules::detect_sol_txorigin(&file, unit));
            all.extend(sol_rules::detect_sol_timestamp(&file, unit));
            all.extend(sol_rules::detect_sol_gas(&file, unit));
            all
        }
    };
    findings.sort_by_key(|f| (f.span.start_byte, f.category));
    findings.dedup_by(|a, b| a.id == b.id);
    Ok(AuditReport {
        unit_id: unit.id.clone(),
        language: unit.language,
        findings,
        detector_suite_version: DETECTOR_SUITE_VERSION.to_string(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_module_has_no_findings() {
        let unit = SourceUnit::new(Language::Move, "module 0x1::m { }");
        let report = audit(&unit).unwrap();
        assert!(report.findings.is_empty());
    }

    #[test]
    fn audit_is_deterministic() {
        let text = "module 0x1::m { const C: u64 = 5; public fun f(x: bool) { if (x == true) { abort 1 }; } }";
        let unit = SourceUnit::new(Language::Move, text);
        let a = audit(&unit).unwrap();
        let b = audit(&unit).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.findings.len(), 2); // UC + UB
    }

    #[test]
    fn every_category_has_one_language() {
        for c in DefectCategory::MOVE {
            assert_eq!(c.language(), Language::Move);
            assert_eq!(DefectCategory::from_code(c.code()), Some(c));
        }
        for c in DefectCategory::SOLIDITY {
            assert_eq!(c.language(), Language::Solidity);
            assert_eq!(DefectCategory::from_code(c.code()), Some(c));
        }
    }

    #[test]
    fn parse_failure_is_reported() {
        let unit = SourceUnit::new(Language::Move, "module 0x1::m { fun f( }");
        match audit(&unit) {
            Err(AuditError::ParseFailed { diagnostics }) => assert!(!diagnostics.is_empty()),
            other => panic!("expected ParseFailed, got {other:?}"),
        }
    }
}
