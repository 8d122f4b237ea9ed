//! Move fix recipes, one per fixable category.

use crate::detectors::move_rules::{
    ov_sites, pl_sites, ub_sites, uc_sites, upf_sites, ur_sites, utc_sites, OvSite, UbShape,
};
use crate::detectors::{DefectCategory, Finding};
use crate::move_lang::lexer::IntWidth;
use crate::move_lang::{build_move_symbols, parse_move, MoveModule};
use crate::repair::{expand_to_line, indent_at, insert_at, Edit, Patch, RepairError};
use crate::source::SourceUnit;

pub fn generate(finding: &Finding, unit: &SourceUnit) -> Result<Patch, RepairError> {
    let modules = parse_move(&unit.text).map_err(|e| RepairError::UnsupportedFinding {
        id: finding.id.clone(),
        category: finding.category,
        reason: format!("unit no longer parses: {e}"),
    })?;
    let module = modules
        .iter()
        .find(|m| m.span.contains(finding.span))
        .ok_or_else(|| stale(finding, "no module covers the finding span"))?;

    match finding.category {
        DefectCategory::UncheckedReturn => fix_ur(finding, unit, module),
        DefectCategory::InfiniteLoop => Ok(Patch::advisory(
            finding,
            "no exit condition can be synthesized mechanically; add a bound, break, or abort",
        )),
        DefectCategory::UnnecessaryBoolean => fix_ub(finding, unit, module),
        DefectCategory::UnusedConstant => fix_delete_decl(finding, unit, module, true),
        DefectCategory::UnusedPrivateFunction => fix_delete_decl(finding, unit, module, false),
        DefectCategory::UnnecessaryTypeConversion => fix_utc(finding, unit, module),
        DefectCategory::Overflow => fix_ov(finding, unit, module),
        DefectCategory::PrecisionLoss => fix_pl(finding, unit, module),
        other => Err(RepairError::UnsupportedFinding {
            id: finding.id.clone(),
            category: other,
            reason: "not a Move category".to_string(),
        }),
    }
}

fn stale(finding: &Finding, reason: &str) -> RepairError {
    RepairError::UnsupportedFinding {
        id: finding.id.clone(),
        category: finding.category,
        reason: reason.to_string(),
    }
}

fn fix_ur(finding: &Finding, unit: &SourceUnit, module: &MoveModule) -> Result<Patch, RepairError> {
    let site = ur_sites(module)
        .into_iter()
        .find(|s| s.stmt_span == finding.span)
        .ok_or_else(|| stale(finding, "call statement not found"))?;
    let call = site.call_span.slice(&unit.text);
    let replacement = if site.returns_bool {
        format!("assert!({call}, 0);")
    } else {
        format!("let _unused = {call};")
    };
    Ok(Patch::mechanical(
        finding,
        vec![Edit { span: site.stmt_span, replacement }],
        if site.returns_bool {
            "assert on the boolean result instead of dropping it"
        } else {
            "bind the discarded result"
        },
    ))
}

fn fix_ub(finding: &Finding, unit: &SourceUnit, module: &MoveModule) -> Result<Patch, RepairError> {
    let site = ub_sites(module)
        .into_iter()
        .find(|s| s.span == finding.span)
        .ok_or_else(|| stale(finding, "boolean expression not found"))?;
    let replacement = match site.shape {
        UbShape::Keep { operand } => operand.slice(&unit.text).to_string(),
        UbShape::Negate { operand, needs_parens } => {
            let text = operand.slice(&unit.text);
            if needs_parens {
                format!("!({text})")
            } else {
                format!("!{text}")
            }
        }
        UbShape::IfBool { cond, negate, cond_needs_parens } => {
            let text = cond.slice(&unit.text);
            if negate {
                if cond_needs_parens {
                    format!("!({text})")
                } else {
                    format!("!{text}")
                }
            } else {
                text.to_string()
            }
        }
    };
    Ok(Patch::mechanical(
        finding,
        vec![Edit { span: finding.span, replacement }],
        "use the boolean value directly",
    ))
}

fn fix_delete_decl(
    finding: &Finding,
    unit: &SourceUnit,
    module: &MoveModule,
    constant: bool,
) -> Result<Patch, RepairError> {
    let symbols = build_move_symbols(module);
    let span = if constant {
        uc_sites(module, &symbols)
            .into_iter()
            .find(|s| s.span == finding.span)
            .map(|s| s.span)
    } else {
        upf_sites(module, &symbols)
            .into_iter()
            .find(|s| s.span == finding.span)
            .map(|s| s.span)
    }
    .ok_or_else(|| stale(finding, "declaration not found"))?;
    let deletion = expand_to_line(&unit.text, span);
    Ok(Patch::mechanical(
        finding,
        vec![Edit { span: deletion, replacement: String::new() }],
        if constant { "remove the dead constant" } else { "remove the dead function" },
    ))
}

fn fix_utc(finding: &Finding, unit: &SourceUnit, module: &MoveModule) -> Result<Patch, RepairError> {
    let symbols = build_move_symbols(module);
    let site = utc_sites(module, &symbols)
        .into_iter()
        .find(|s| s.cast_span == finding.span)
        .ok_or_else(|| stale(finding, "cast not found"))?;
    Ok(Patch::mechanical(
        finding,
        vec![Edit {
            span: site.cast_span,
            replacement: site.operand_span.slice(&unit.text).to_string(),
        }],
        "drop the cast to the value's own type",
    ))
}

fn fix_ov(finding: &Finding, unit: &SourceUnit, module: &MoveModule) -> Result<Patch, RepairError> {
    let symbols = build_move_symbols(module);
    let site = ov_sites(module, &symbols)
        .into_iter()
        .find(|s| s.span() == finding.span)
        .ok_or_else(|| stale(finding, "overflow site not found"))?;
    match site {
        OvSite::ShiftNonConstant { .. } => Ok(Patch::advisory(
            finding,
            "bound the shift amount below the operand width before shifting",
        )),
        OvSite::NarrowingCast { operand_span, stmt_span, source, target, .. } => {
            let operand = operand_span.slice(&unit.text);
            let indent = indent_at(&unit.text, stmt_span.start_byte);
            let guard = format!(
                "assert!({operand} <= {}{}, 0);\n{indent}",
                target.max_literal(),
                source.name()
            );
            Ok(Patch::mechanical(
                finding,
                vec![insert_at(stmt_span.start_byte, guard)],
                "range-check the value before narrowing",
            ))
        }
        OvSite::MulUnwidened { mul_span, lhs_span, rhs_span, width, stmt_span } => {
            let lhs = lhs_span.slice(&unit.text);
            let rhs = rhs_span.slice(&unit.text);
            let indent = indent_at(&unit.text, stmt_span.start_byte);
            let widened = format!("({lhs} as u128) * ({rhs} as u128)");
            let guard = format!(
                "assert!({widened} <= {}u128, 0);\n{indent}",
                max_literal_for(width)
            );
            let wrapped = format!("((({lhs} as u128) * ({rhs} as u128)) as {})", width.name());
            Ok(Patch::mechanical(
                finding,
                vec![
                    insert_at(stmt_span.start_byte, guard),
                    Edit { span: mul_span, replacement: wrapped },
                ],
                "widen to u128, assert the product fits, then narrow back",
            ))
        }
    }
}

fn max_literal_for(width: IntWidth) -> &'static str {
    width.max_literal()
}

fn fix_pl(finding: &Finding, unit: &SourceUnit, module: &MoveModule) -> Result<Patch, RepairError> {
    let site = pl_sites(module)
        .into_iter()
        .find(|s| s.div_span == finding.span)
        .ok_or_else(|| stale(finding, "division site not found"))?;
    let Some(direct) = site.direct else {
        return Ok(Patch::advisory(
            finding,
            "division result flows through a binding; reorder so multiplication happens first",
        ));
    };
    if !direct.all_pure {
        return Ok(Patch::advisory(
            finding,
            "operands have side effects; reordering would change evaluation order",
        ));
    }
    let a = direct.dividend.slice(&unit.text);
    let b = direct.divisor.slice(&unit.text);
    let c = direct.other.slice(&unit.text);
    let replacement = if direct.div_on_left {
        format!("{a} * {c} / {b}")
    } else {
        format!("{c} * {a} / {b}")
    };
    Ok(Patch::mechanical(
        finding,
        vec![Edit { span: direct.mul_span, replacement }],
        "multiply before dividing to avoid early truncation",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::audit;
    use crate::repair::{apply_patch, repair_all, PatchKind};
    use crate::source::Language;

    fn repaired(text: &str) -> String {
        let unit = SourceUnit::new(Language::Move, text);
        let report = audit(&unit).unwrap();
        repair_all(&unit, &report).unwrap().text
    }

    fn audit_codes(text: &str) -> Vec<&'static str> {
        let unit = SourceUnit::new(Language::Move, text);
        audit(&unit).unwrap().findings.iter().map(|f| f.category.code()).collect()
    }

    #[test]
    fn ub_rewrite_uses_value_directly() {
        let text = "module 0x1::m {\n    public fun f(x: bool): u64 {\n        if (x == true) { 1 } else { 0 }\n    }\n}\n";
        let fixed = repaired(text);
        assert!(fixed.contains("if (x) { 1 } else { 0 }"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn uc_deletion_removes_whole_line() {
        let text = "module 0x1::m {\n    const C: u64 = 5;\n    public fun f(): u64 { 1 }\n}\n";
        let fixed = repaired(text);
        assert!(!fixed.contains("const C"), "{fixed}");
        assert!(!fixed.contains("\n\n    public"), "deleted line should not leave a blank: {fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn ur_wraps_or_asserts_by_return_type() {
        let text = "module 0x1::m {\n    fun g(): u64 { 1 }\n    fun ok(): bool { true }\n    public fun f() {\n        g();\n        ok();\n    }\n}\n";
        let fixed = repaired(text);
        assert!(fixed.contains("let _unused = g();"), "{fixed}");
        assert!(fixed.contains("assert!(ok(), 0);"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn ov_mul_widens_and_guards() {
        let text = "module 0x1::m {\n    public fun f(a: u64, b: u64): u64 {\n        let z = a * b;\n        z\n    }\n}\n";
        let fixed = repaired(text);
        assert!(
            fixed.contains("assert!((a as u128) * (b as u128) <= 18446744073709551615u128, 0);"),
            "{fixed}"
        );
        assert!(fixed.contains("(((a as u128) * (b as u128)) as u64)"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn ov_narrowing_gains_range_assert() {
        let text = "module 0x1::m {\n    public fun f(x: u64): u8 {\n        (x as u8)\n    }\n}\n";
        let fixed = repaired(text);
        assert!(fixed.contains("assert!(x <= 255u64, 0);"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn pl_reorders_pure_operands() {
        let text = "module 0x1::m {\n    public fun f(a: u128, b: u128, c: u128): u128 {\n        a / b * c\n    }\n}\n";
        let fixed = repaired(text);
        assert!(fixed.contains("a * c / b"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn advisory_categories_leave_text_unchanged() {
        let text = "module 0x1::m {\n    public fun f() {\n        loop { }\n    }\n}\n";
        let unit = SourceUnit::new(Language::Move, text);
        let report = audit(&unit).unwrap();
        assert_eq!(report.findings.len(), 1);
        let patch = generate_patch_for_test(&report.findings[0], &unit);
        assert_eq!(patch.kind, PatchKind::Advisory);
        assert!(patch.edits.is_empty());
        assert!(!patch.rationale.is_empty());
        assert_eq!(apply_patch(&unit, &patch).unwrap(), text);
    }

    fn generate_patch_for_test(
        finding: &crate::detectors::Finding,
        unit: &SourceUnit,
    ) -> Patch {
        crate::repair::generate_patch(finding, unit).unwrap()
    }

    #[test]
    fn upf_deletion_is_signature_safe() {
        let text = "module 0x1::m {\n    fun helper(): u64 { 1 }\n    public fun keep(): u64 { 2 }\n}\n";
        let fixed = repaired(text);
        assert!(!fixed.contains("helper"), "{fixed}");
        assert!(fixed.contains("public fun keep(): u64 { 2 }"), "{fixed}");
    }
}
