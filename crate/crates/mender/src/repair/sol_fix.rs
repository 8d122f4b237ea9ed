//! Solidity fix recipes.

use crate::detectors::sol_rules::{
    access_sites, int_overflow_sites, reentrancy_sites, txorigin_sites, uninit_storage_sites,
};
use crate::detectors::{DefectCategory, Finding};
use crate::repair::{expand_to_line, indent_at, insert_at, Edit, Patch, RepairError};
use crate::sol_lang::ast::SolBinOp;
use crate::sol_lang::parse_sol;
use crate::source::SourceUnit;

pub fn generate(finding: &Finding, unit: &SourceUnit) -> Result<Patch, RepairError> {
    let file = parse_sol(&unit.text).map_err(|e| RepairError::UnsupportedFinding {
        id: finding.id.clone(),
        category: finding.category,
        reason: format!("unit no longer parses: {e}"),
    })?;

    match finding.category {
        DefectCategory::Reentrancy => fix_reentrancy(finding, unit, &file),
        DefectCategory::IntOverflow => fix_int_overflow(finding, unit, &file),
        DefectCategory::AccessControl => fix_access(finding, unit, &file),
        DefectCategory::UninitStorage => fix_uninit(finding, unit, &file),
        DefectCategory::TxOrigin => fix_txorigin(finding, &file),
        DefectCategory::DenialOfService => Ok(Patch::advisory(
            finding,
            "switch to a pull-payment scheme so one failing recipient cannot block the rest",
        )),
        DefectCategory::Timestamp => Ok(Patch::advisory(
            finding,
            "derive the decision from commit-reveal data or block numbers, not miner-set time",
        )),
        DefectCategory::GasLimit => Ok(Patch::advisory(
            finding,
            "process the array in bounded chunks or move to a pull-based claim",
        )),
        other => Err(RepairError::UnsupportedFinding {
            id: finding.id.clone(),
            category: other,
            reason: "not a Solidity category".to_string(),
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

fn fix_reentrancy(
    finding: &Finding,
    unit: &SourceUnit,
    file: &crate::sol_lang::ast::SolFile,
) -> Result<Patch, RepairError> {
    let site = reentrancy_sites(file)
        .into_iter()
        .find(|s| s.call_stmt_span == finding.span)
        .ok_or_else(|| stale(finding, "call statement not found"))?;
    if !site.mechanical || site.movable_writes.is_empty() {
        return Ok(Patch::advisory(
            finding,
            "state updates cannot be hoisted safely; apply checks-effects-interactions manually",
        ));
    }
    let indent = indent_at(&unit.text, site.call_stmt_span.start_byte);
    let mut moved = String::new();
    let mut edits = Vec::new();
    for write in &site.movable_writes {
        moved.push_str(write.slice(&unit.text));
        moved.push('\n');
        moved.push_str(&indent);
        edits.push(Edit {
            span: expand_to_line(&unit.text, *write),
            replacement: String::new(),
        });
    }
    edits.push(insert_at(site.call_stmt_span.start_byte, moved));
    Ok(Patch::mechanical(
        finding,
        edits,
        "update state before the external call (checks-effects-interactions)",
    ))
}

fn fix_int_overflow(
    finding: &Finding,
    unit: &SourceUnit,
    file: &crate::sol_lang::ast::SolFile,
) -> Result<Patch, RepairError> {
    let site = int_overflow_sites(file, &unit.text)
        .into_iter()
        .find(|s| s.op_span == finding.span)
        .ok_or_else(|| stale(finding, "arithmetic site not found"))?;
    let lhs = site.lhs_span.slice(&unit.text);
    let rhs = site.rhs_span.slice(&unit.text);
    let indent = indent_at(&unit.text, site.stmt_span.start_byte);
    let guard = match site.op {
        SolBinOp::Add => format!("require({lhs} + {rhs} >= {lhs});\n{indent}"),
        SolBinOp::Sub => format!("require({lhs} >= {rhs});\n{indent}"),
        SolBinOp::Mul => {
            return Ok(Patch::advisory(
                finding,
                "widen the product and check the bound, or use a checked-math library",
            ));
        }
        _ => return Ok(Patch::advisory(finding, "no standard guard for this operator")),
    };
    Ok(Patch::mechanical(
        finding,
        vec![insert_at(site.stmt_span.start_byte, guard)],
        "guard the arithmetic with the standard wraparound check",
    ))
}

fn fix_access(
    finding: &Finding,
    unit: &SourceUnit,
    file: &crate::sol_lang::ast::SolFile,
) -> Result<Patch, RepairError> {
    let site = access_sites(file)
        .into_iter()
        .find(|s| s.fn_span == finding.span)
        .ok_or_else(|| stale(finding, "function not found"))?;
    if !site.has_owner_var {
        return Ok(Patch::advisory(
            finding,
            "no `owner` state variable to check against; introduce one or an access modifier",
        ));
    }
    let edit = match site.first_stmt_span {
        Some(first) => {
            let indent = indent_at(&unit.text, first.start_byte);
            insert_at(first.start_byte, format!("require(msg.sender == owner);\n{indent}"))
        }
        None => insert_at(site.body_open, " require(msg.sender == owner); ".to_string()),
    };
    Ok(Patch::mechanical(
        finding,
        vec![edit],
        "gate the function on the contract owner",
    ))
}

fn fix_uninit(
    finding: &Finding,
    unit: &SourceUnit,
    file: &crate::sol_lang::ast::SolFile,
) -> Result<Patch, RepairError> {
    let site = uninit_storage_sites(file, &unit.text)
        .into_iter()
        .find(|s| s.decl_span == finding.span)
        .ok_or_else(|| stale(finding, "declaration not found"))?;
    Ok(Patch::mechanical(
        finding,
        vec![insert_at(site.name_offset, "memory ".to_string())],
        "make the local an explicit memory value",
    ))
}

fn fix_txorigin(
    finding: &Finding,
    file: &crate::sol_lang::ast::SolFile,
) -> Result<Patch, RepairError> {
    let site = txorigin_sites(file)
        .into_iter()
        .find(|s| s.atom_span == finding.span)
        .ok_or_else(|| stale(finding, "tx.origin site not found"))?;
    Ok(Patch::mechanical(
        finding,
        vec![Edit { span: site.atom_span, replacement: "msg.sender".to_string() }],
        "authenticate the direct caller instead of the transaction origin",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::audit;
    use crate::repair::repair_all;
    use crate::source::Language;

    fn repaired(text: &str) -> String {
        let unit = SourceUnit::new(Language::Solidity, text);
        let report = audit(&unit).unwrap();
        repair_all(&unit, &report).unwrap().text
    }

    fn audit_codes(text: &str) -> Vec<&'static str> {
        let unit = SourceUnit::new(Language::Solidity, text);
        audit(&unit).unwrap().findings.iter().map(|f| f.category.code()).collect()
    }

    #[test]
    fn reentrancy_moves_write_before_call() {
        let text = r#"pragma solidity ^0.4.24;
contract Vault {
    mapping(address => uint256) balances;
    function withdraw() public {
        uint256 amount = balances[msg.sender];
        require(msg.sender.call.value(amount)());
        balances[msg.sender] = 0;
    }
}"#;
        let fixed = repaired(text);
        let write = fixed.find("balances[msg.sender] = 0;").unwrap();
        let call = fixed.find("msg.sender.call.value").unwrap();
        assert!(write < call, "write must precede call:\n{fixed}");
        assert!(!audit_codes(&fixed).contains(&"REENTRANCY"), "{fixed}");
    }

    #[test]
    fn int_overflow_gains_require_guard() {
        let text = r#"pragma solidity ^0.4.24;
contract Token {
    mapping(address => uint256) balances;
    function mint(address to, uint256 amount) internal {
        balances[to] += amount;
    }
}"#;
        let fixed = repaired(text);
        assert!(
            fixed.contains("require(balances[to] + amount >= balances[to]);"),
            "{fixed}"
        );
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn access_control_inserts_owner_check() {
        let text = r#"pragma solidity ^0.4.24;
contract Owned {
    address owner;
    function setOwner(address newOwner) public {
        owner = newOwner;
    }
}"#;
        let fixed = repaired(text);
        assert!(fixed.contains("require(msg.sender == owner);"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn txorigin_becomes_msg_sender() {
        let text = r#"pragma solidity ^0.4.24;
contract Auth {
    address owner;
    function pay() public {
        require(tx.origin == owner);
    }
}"#;
        let fixed = repaired(text);
        assert!(!fixed.contains("tx.origin"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn uninit_storage_gains_memory() {
        let text = r#"pragma solidity ^0.4.24;
contract Wallets {
    struct Wallet { uint256 amount; address holder; }
    function open() public {
        Wallet w;
        w.amount = 1;
    }
}"#;
        let fixed = repaired(text);
        assert!(fixed.contains("Wallet memory w;"), "{fixed}");
        assert_eq!(audit_codes(&fixed), Vec::<&str>::new());
    }

    #[test]
    fn advisory_timestamp_keeps_text() {
        let text = r#"pragma solidity ^0.4.24;
contract Lottery {
    address winner;
    function draw(address player) internal {
        if (now % 2 == 0) {
            winner = player;
        }
    }
}"#;
        let unit = SourceUnit::new(Language::Solidity, text);
        let report = audit(&unit).unwrap();
        let outcome = repair_all(&unit, &report).unwrap();
        assert_eq!(outcome.text, text);
        assert_eq!(outcome.applied.len(), 0);
        assert_eq!(outcome.skipped.len(), report.findings.len());
    }
}
