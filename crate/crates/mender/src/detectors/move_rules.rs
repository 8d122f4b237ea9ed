//! The eight Move detectors. Each rule has a site-enumeration function
//! returning the structural match (spans plus whatever the mechanical fix
//! needs) and a thin `detect_*` wrapper producing findings; the repair
//! module reuses the sites so detection and fix generation never drift.

use crate::detectors::{DefectCategory, Finding};
use crate::move_lang::ast::*;
use crate::move_lang::lexer::IntWidth;
use crate::move_lang::symbols::MoveSymbols;
use crate::source::{SourceUnit, Span};
use std::collections::BTreeSet;

// ---------------------------------------------------------------------------
// UR — Unchecked Return
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UrSite {
    pub stmt_span: Span,
    pub call_span: Span,
    pub callee: String,
    pub returns_bool: bool,
}

pub fn ur_sites(module: &MoveModule) -> Vec<UrSite> {
    let mut sites = Vec::new();
    let returning: Vec<(&str, bool)> = module
        .functions()
        .filter(|f| !f.return_types.is_empty())
        .map(|f| {
            let bool_only = f.return_types.len() == 1 && f.return_types[0] == MoveType::Bool;
            (f.name.as_str(), bool_only)
        })
        .collect();
    for f in module.functions() {
        each_block(&f.body, &mut |block| {
            for stmt in &block.stmts {
                let MoveStmt::Expr { expr, has_semi: true, span } = stmt else {
                    continue;
                };
                let root = expr.unwrap_parens();
                let MoveExprKind::Call { path, is_macro: false, .. } = &root.kind else {
                    continue;
                };
                if path.len() != 1 {
                    continue; // external callee, unresolvable here
                }
                if let Some((_, returns_bool)) =
                    returning.iter().find(|(name, _)| *name == path[0])
                {
                    sites.push(UrSite {
                        stmt_span: *span,
                        call_span: root.span,
                        callee: path[0].clone(),
                        returns_bool: *returns_bool,
                    });
                }
            }
        });
    }
    sites
}

pub fn detect_ur(module: &MoveModule, _symbols: &MoveSymbols, unit: &SourceUnit) -> Vec<Finding> {
    ur_sites(module)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::UncheckedReturn,
                s.stmt_span,
                format!("return value of `{}` is discarded", s.callee),
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// IL — Infinite Loop
// ---------------------------------------------------------------------------

pub fn il_sites(module: &MoveModule) -> Vec<Span> {
    let mut sites = Vec::new();
    for f in module.functions() {
        for_each_expr(&f.body, &mut |e| match &e.kind {
            MoveExprKind::Loop { body } => {
                if !has_exit(body) {
                    sites.push(e.span);
                }
            }
            MoveExprKind::While { cond, body } => {
                if matches!(cond.unwrap_parens().kind, MoveExprKind::BoolLit(true))
                    && !has_exit(body)
                {
                    sites.push(e.span);
                }
            }
            _ => {}
        });
    }
    sites
}

/// Exit = any `break`/`return`/`abort` token at any depth; opaque regions
/// conservatively count as containing one.
fn has_exit(body: &MoveExpr) -> bool {
    let mut found = false;
    walk_expr(body, &mut |e| {
        if matches!(
            e.kind,
            MoveExprKind::Break | MoveExprKind::Return(_) | MoveExprKind::Abort(_)
        ) {
            found = true;
        }
        if let MoveExprKind::Block(b) = &e.kind {
            if b.stmts.iter().any(|s| matches!(s, MoveStmt::Opaque(_))) {
                found = true;
            }
        }
    });
    found
}

pub fn detect_il(module: &MoveModule, unit: &SourceUnit) -> Vec<Finding> {
    il_sites(module)
        .into_iter()
        .map(|span| {
            Finding::new(
                unit,
                DefectCategory::InfiniteLoop,
                span,
                "loop has no break, return, or abort on any path",
                false,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// UB — Unnecessary Boolean
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum UbShape {
    /// `e == true` / `true == e` / `e != false` — replace with `e`.
    Keep { operand: Span },
    /// `e == false` / `e != true` — replace with `!e`, parenthesizing
    /// non-atomic operands.
    Negate { operand: Span, needs_parens: bool },
    /// `if (c) true else false` (negate = false) or the flipped form.
    IfBool { cond: Span, negate: bool, cond_needs_parens: bool },
}

#[derive(Clone, Debug)]
pub struct UbSite {
    pub span: Span,
    pub shape: UbShape,
}

pub fn ub_sites(module: &MoveModule) -> Vec<UbSite> {
    let mut sites = Vec::new();
    for f in module.functions() {
        for_each_expr(&f.body, &mut |e| match &e.kind {
            MoveExprKind::Binary { op: op @ (BinOp::Eq | BinOp::Ne), lhs, rhs } => {
                let (operand, literal) = if let MoveExprKind::BoolLit(b) = lhs.unwrap_parens().kind
                {
                    (rhs.as_ref(), b)
                } else if let MoveExprKind::BoolLit(b) = rhs.unwrap_parens().kind {
                    (lhs.as_ref(), b)
                } else {
                    return;
                };
                let keep = (*op == BinOp::Eq) == literal;
                let shape = if keep {
                    UbShape::Keep { operand: operand.span }
                } else {
                    UbShape::Negate {
                        operand: operand.span,
                        needs_parens: !is_atomic(operand),
                    }
                };
                sites.push(UbSite { span: e.span, shape });
            }
            MoveExprKind::If { cond, then_branch, else_branch: Some(else_branch) } => {
                let (Some(t), Some(el)) = (branch_bool(then_branch), branch_bool(else_branch))
                else {
                    return;
                };
                if t == el {
                    return;
                }
                sites.push(UbSite {
                    span: e.span,
                    shape: UbShape::IfBool {
                        cond: cond.span,
                        negate: !t,
                        cond_needs_parens: !is_atomic(cond),
                    },
                });
            }
            _ => {}
        });
    }
    sites
}

fn branch_bool(e: &MoveExpr) -> Option<bool> {
    match &e.unwrap_parens().kind {
        MoveExprKind::BoolLit(b) => Some(*b),
        MoveExprKind::Block(block) if block.stmts.is_empty() => {
            block.tail.as_ref().and_then(|t| match t.unwrap_parens().kind {
                MoveExprKind::BoolLit(b) => Some(b),
                _ => None,
            })
        }
        _ => None,
    }
}

fn is_atomic(e: &MoveExpr) -> bool {
    matches!(
        e.kind,
        MoveExprKind::Name { .. }
            | MoveExprKind::IntLit { .. }
            | MoveExprKind::BoolLit(_)
            | MoveExprKind::Call { .. }
            | MoveExprKind::Paren(_)
            | MoveExprKind::FieldAccess { .. }
    )
}

pub fn detect_ub(module: &MoveModule, unit: &SourceUnit) -> Vec<Finding> {
    ub_sites(module)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::UnnecessaryBoolean,
                s.span,
                "boolean expression can be simplified",
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// UC — Unused Constant
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UcSite {
    pub name: String,
    pub span: Span,
}

pub fn uc_sites(module: &MoveModule, symbols: &MoveSymbols) -> Vec<UcSite> {
    module
        .constants()
        .filter(|c| symbols.const_refs.get(&c.name) == Some(&0))
        .map(|c| UcSite { name: c.name.clone(), span: c.span })
        .collect()
}

pub fn detect_uc(module: &MoveModule, symbols: &MoveSymbols, unit: &SourceUnit) -> Vec<Finding> {
    uc_sites(module, symbols)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::UnusedConstant,
                s.span,
                format!("constant `{}` is never referenced", s.name),
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// UPF — Unused Private Function
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UpfSite {
    pub name: String,
    pub span: Span,
}

pub fn upf_sites(module: &MoveModule, symbols: &MoveSymbols) -> Vec<UpfSite> {
    // Opaque regions may hide calls; suppress the whole module.
    if module.has_opaque() {
        return Vec::new();
    }
    let called: BTreeSet<&String> = symbols.call_graph.values().flatten().collect();
    module
        .functions()
        .filter(|f| f.visibility == Visibility::Private && !called.contains(&f.name))
        .map(|f| UpfSite { name: f.name.clone(), span: f.span })
        .collect()
}

pub fn detect_upf(module: &MoveModule, symbols: &MoveSymbols, unit: &SourceUnit) -> Vec<Finding> {
    upf_sites(module, symbols)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::UnusedPrivateFunction,
                s.span,
                format!("private function `{}` is never called", s.name),
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// UTC — Unnecessary Type Conversion
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UtcSite {
    pub cast_span: Span,
    pub operand_span: Span,
}

pub fn utc_sites(module: &MoveModule, symbols: &MoveSymbols) -> Vec<UtcSite> {
    let mut sites = Vec::new();
    for f in module.functions() {
        for_each_expr(&f.body, &mut |e| {
            if let MoveExprKind::Cast { expr: inner, target } = &e.kind {
                let source = symbols.width_of(inner);
                if source.is_some() && source == target.int_width() {
                    sites.push(UtcSite { cast_span: e.span, operand_span: inner.span });
                }
            }
        });
    }
    sites
}

pub fn detect_utc(module: &MoveModule, symbols: &MoveSymbols, unit: &SourceUnit) -> Vec<Finding> {
    utc_sites(module, symbols)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::UnnecessaryTypeConversion,
                s.cast_span,
                "cast converts a value to its own type",
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Ov — Overflow
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum OvSite {
    /// `<<`/`>>` with a non-constant shift amount. No mechanical fix.
    ShiftNonConstant { span: Span },
    /// Narrowing cast with no guarding `assert!`/`if` immediately before
    /// it in the same block.
    NarrowingCast {
        cast_span: Span,
        operand_span: Span,
        stmt_span: Span,
        source: IntWidth,
        target: IntWidth,
    },
    /// `a * b` at width ≤ 64 with non-literal operands, not inside a
    /// widening cast.
    MulUnwidened {
        mul_span: Span,
        lhs_span: Span,
        rhs_span: Span,
        width: IntWidth,
        stmt_span: Span,
    },
}

impl OvSite {
    pub fn span(&self) -> Span {
        match self {
            OvSite::ShiftNonConstant { span } => *span,
            OvSite::NarrowingCast { cast_span, .. } => *cast_span,
            OvSite::MulUnwidened { mul_span, .. } => *mul_span,
        }
    }
}

pub fn ov_sites(module: &MoveModule, symbols: &MoveSymbols) -> Vec<OvSite> {
    let mut sites = Vec::new();
    for f in module.functions() {
        scan_ov_block(&f.body, symbols, &mut sites);
    }
    sites
}

fn scan_ov_block(block: &Block, symbols: &MoveSymbols, out: &mut Vec<OvSite>) {
    for (i, stmt) in block.stmts.iter().enumerate() {
        let prev = if i > 0 { Some(&block.stmts[i - 1]) } else { None };
        let stmt_span = stmt.span();
        match stmt {
            MoveStmt::Let { init: Some(e), .. } => {
                scan_ov_expr(e, stmt_span, prev, false, symbols, out)
            }
            MoveStmt::Expr { expr, .. } => scan_ov_expr(expr, stmt_span, prev, false, symbols, out),
            _ => {}
        }
    }
    if let Some(tail) = &block.tail {
        scan_ov_expr(tail, tail.span, block.stmts.last(), false, symbols, out);
    }
}

fn scan_ov_expr(
    expr: &MoveExpr,
    stmt_span: Span,
    prev: Option<&MoveStmt>,
    widened: bool,
    symbols: &MoveSymbols,
    out: &mut Vec<OvSite>,
) {
    match &expr.kind {
        MoveExprKind::Cast { expr: inner, target } => {
            let source = symbols.width_of(inner);
            let target_w = target.int_width();
            if let (Some(sw), Some(tw)) = (source, target_w) {
                if tw < sw && !guarded_by_prev(inner, prev) {
                    out.push(OvSite::NarrowingCast {
                        cast_span: expr.span,
                        operand_span: inner.span,
                        stmt_span,
                        source: sw,
                        target: tw,
                    });
                }
            }
            let now_widened =
                widened || target_w.map(|w| w >= IntWidth::U128).unwrap_or(false);
            scan_ov_expr(inner, stmt_span, prev, now_widened, symbols, out);
        }
        MoveExprKind::Binary { op: BinOp::Shl | BinOp::Shr, lhs, rhs } => {
            if !matches!(rhs.unwrap_parens().kind, MoveExprKind::IntLit { .. }) {
                out.push(OvSite::ShiftNonConstant { span: expr.span });
            }
            scan_ov_expr(lhs, stmt_span, prev, widened, symbols, out);
            scan_ov_expr(rhs, stmt_span, prev, widened, symbols, out);
        }
        MoveExprKind::Binary { op: BinOp::Mul, lhs, rhs } => {
            let lw = symbols.width_of(lhs);
            let rw = symbols.width_of(rhs);
            let literal_operand = matches!(lhs.unwrap_parens().kind, MoveExprKind::IntLit { .. })
                || matches!(rhs.unwrap_parens().kind, MoveExprKind::IntLit { .. });
            if !widened && !literal_operand {
                if let (Some(lw), Some(rw)) = (lw, rw) {
                    if lw == rw && lw <= IntWidth::U64 {
                        out.push(OvSite::MulUnwidened {
                            mul_span: expr.span,
                            lhs_span: lhs.span,
                            rhs_span: rhs.span,
                            width: lw,
                            stmt_span,
                        });
                    }
                }
            }
            scan_ov_expr(lhs, stmt_span, prev, widened, symbols, out);
            scan_ov_expr(rhs, stmt_span, prev, widened, symbols, out);
        }
        MoveExprKind::Block(b) => scan_ov_block(b, symbols, out),
        MoveExprKind::If { cond, then_branch, else_branch } => {
            scan_ov_expr(cond, stmt_span, prev, widened, symbols, out);
            scan_ov_expr(then_branch, stmt_span, prev, widened, symbols, out);
            if let Some(e) = else_branch {
                scan_ov_expr(e, stmt_span, prev, widened, symbols, out);
            }
        }
        MoveExprKind::While { cond, body } => {
            scan_ov_expr(cond, stmt_span, prev, widened, symbols, out);
            scan_ov_expr(body, stmt_span, prev, widened, symbols, out);
        }
        MoveExprKind::Loop { body } => scan_ov_expr(body, stmt_span, prev, widened, symbols, out),
        MoveExprKind::Binary { lhs, rhs, .. } | MoveExprKind::Assign { lhs, rhs } => {
            scan_ov_expr(lhs, stmt_span, prev, widened, symbols, out);
            scan_ov_expr(rhs, stmt_span, prev, widened, symbols, out);
        }
        MoveExprKind::Unary { expr: inner, .. }
        | MoveExprKind::Paren(inner)
        | MoveExprKind::Abort(inner) => scan_ov_expr(inner, stmt_span, prev, widened, symbols, out),
        MoveExprKind::Call { args, .. } => {
            for a in args {
                scan_ov_expr(a, stmt_span, prev, widened, symbols, out);
            }
        }
        MoveExprKind::FieldAccess { base, .. } => {
            scan_ov_expr(base, stmt_span, prev, widened, symbols, out)
        }
        MoveExprKind::Return(Some(inner)) => {
            scan_ov_expr(inner, stmt_span, prev, widened, symbols, out)
        }
        _ => {}
    }
}

/// The previous statement is an `assert!` or `if` mentioning every
/// identifier of the cast operand.
fn guarded_by_prev(operand: &MoveExpr, prev: Option<&MoveStmt>) -> bool {
    let Some(prev) = prev else {
        return false;
    };
    let guard_expr = match prev {
        MoveStmt::Expr { expr, .. } => match &expr.kind {
            MoveExprKind::Call { path, is_macro: true, .. }
                if path.last().map(|s| s == "assert").unwrap_or(false) =>
            {
                expr
            }
            MoveExprKind::If { .. } => expr,
            _ => return false,
        },
        _ => return false,
    };
    let mut guard_idents = BTreeSet::new();
    walk_expr(guard_expr, &mut |e| {
        if let MoveExprKind::Name { path } = &e.kind {
            for seg in path {
                guard_idents.insert(seg.clone());
            }
        }
    });
    let mut operand_idents = BTreeSet::new();
    walk_expr(operand, &mut |e| {
        if let MoveExprKind::Name { path } = &e.kind {
            for seg in path {
                operand_idents.insert(seg.clone());
            }
        }
    });
    operand_idents.iter().all(|i| guard_idents.contains(i))
}

pub fn detect_ov(module: &MoveModule, symbols: &MoveSymbols, unit: &SourceUnit) -> Vec<Finding> {
    ov_sites(module, symbols)
        .into_iter()
        .map(|s| {
            let (message, fixable) = match &s {
                OvSite::ShiftNonConstant { .. } => {
                    ("shift amount is not a constant and may exceed the operand width", false)
                }
                OvSite::NarrowingCast { .. } => {
                    ("narrowing cast has no preceding range check", true)
                }
                OvSite::MulUnwidened { .. } => {
                    ("multiplication at this width can overflow; widen before multiplying", true)
                }
            };
            Finding::new(unit, DefectCategory::Overflow, s.span(), message, fixable)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// PL — Precision Loss
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PlSite {
    pub div_span: Span,
    /// Present when the division feeds a multiplication directly; the
    /// via-let form is advisory.
    pub direct: Option<PlDirect>,
}

#[derive(Clone, Debug)]
pub struct PlDirect {
    pub mul_span: Span,
    pub dividend: Span,
    pub divisor: Span,
    pub other: Span,
    pub div_on_left: bool,
    pub all_pure: bool,
}

pub fn pl_sites(module: &MoveModule) -> Vec<PlSite> {
    let mut sites = Vec::new();
    for f in module.functions() {
        // direct shape: a / b * c or c * (a / b)
        for_each_expr(&f.body, &mut |e| {
            let MoveExprKind::Binary { op: BinOp::Mul, lhs, rhs } = &e.kind else {
                return;
            };
            for (operand, other, div_on_left) in
                [(lhs, rhs, true), (rhs, lhs, false)]
            {
                let inner = operand.unwrap_parens();
                if let MoveExprKind::Binary { op: BinOp::Div, lhs: dividend, rhs: divisor } =
                    &inner.kind
                {
                    let all_pure =
                        is_pure(dividend) && is_pure(divisor) && is_pure(other);
                    sites.push(PlSite {
                        div_span: inner.span,
                        direct: Some(PlDirect {
                            mul_span: e.span,
                            dividend: dividend.span,
                            divisor: divisor.span,
                            other: other.span,
                            div_on_left,
                            all_pure,
                        }),
                    });
                    break;
                }
            }
        });
        // via a single-use let binding
        let let_divs = divisions_bound_by_let(f);
        for (name, div_span) in let_divs {
            let mut uses = 0usize;
            let mut used_in_mul = false;
            for_each_expr(&f.body, &mut |e| {
                if let MoveExprKind::Binary { op: BinOp::Mul, lhs, rhs } = &e.kind {
                    if lhs.unwrap_parens().as_simple_name() == Some(&name)
                        || rhs.unwrap_parens().as_simple_name() == Some(&name)
                    {
                        used_in_mul = true;
                    }
                }
                if e.as_simple_name() == Some(&name) && e.span.start_byte > div_span.end_byte {
                    uses += 1;
                }
            });
            if uses == 1 && used_in_mul {
                sites.push(PlSite { div_span, direct: None });
            }
        }
    }
    sites.sort_by_key(|s| s.div_span.start_byte);
    sites
}

fn divisions_bound_by_let(f: &MoveFunction) -> Vec<(String, Span)> {
    let mut out = Vec::new();
    walk_block_stmts(&f.body, &mut |stmt| {
        if let MoveStmt::Let { name, init: Some(init), .. } = stmt {
            let inner = init.unwrap_parens();
            if let MoveExprKind::Binary { op: BinOp::Div, .. } = &inner.kind {
                out.push((name.clone(), inner.span));
            }
        }
    });
    out
}

/// Side-effect-free operands: literals, names, field reads.
fn is_pure(e: &MoveExpr) -> bool {
    match &e.kind {
        MoveExprKind::IntLit { .. }
        | MoveExprKind::BoolLit(_)
        | MoveExprKind::AddressLit(_)
        | MoveExprKind::Name { .. } => true,
        MoveExprKind::FieldAccess { base, .. } => is_pure(base),
        MoveExprKind::Paren(inner) => is_pure(inner),
        _ => false,
    }
}

pub fn detect_pl(module: &MoveModule, unit: &SourceUnit) -> Vec<Finding> {
    pl_sites(module)
        .into_iter()
        .map(|s| {
            let fixable = s.direct.as_ref().map(|d| d.all_pure).unwrap_or(false);
            Finding::new(
                unit,
                DefectCategory::PrecisionLoss,
                s.div_span,
                "division happens before multiplication and truncates early",
                fixable,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// shared traversal
// ---------------------------------------------------------------------------

fn each_block(block: &Block, f: &mut impl FnMut(&Block)) {
    f(block);
    for stmt in &block.stmts {
        match stmt {
            MoveStmt::Let { init: Some(e), .. } => each_block_in_expr(e, f),
            MoveStmt::Expr { expr, .. } => each_block_in_expr(expr, f),
            _ => {}
        }
    }
    if let Some(tail) = &block.tail {
        each_block_in_expr(tail, f);
    }
}

fn each_block_in_expr(expr: &MoveExpr, f: &mut impl FnMut(&Block)) {
    walk_expr(expr, &mut |e| {
        if let MoveExprKind::Block(b) = &e.kind {
            f(b);
        }
    });
}

fn for_each_expr(block: &Block, f: &mut impl FnMut(&MoveExpr)) {
    for stmt in &block.stmts {
        match stmt {
            MoveStmt::Let { init: Some(e), .. } => walk_expr(e, f),
            MoveStmt::Expr { expr, .. } => walk_expr(expr, f),
            _ => {}
        }
    }
    if let Some(tail) = &block.tail {
        walk_expr(tail, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::move_lang::{build_move_symbols, parse_move};
    use crate::source::{Language, SourceUnit};

    fn findings_for(text: &str) -> Vec<Finding> {
        let unit = SourceUnit::new(Language::Move, text);
        crate::detectors::audit(&unit).unwrap().findings
    }

    fn categories(text: &str) -> Vec<&'static str> {
        findings_for(text).iter().map(|f| f.category.code()).collect()
    }

    #[test]
    fn ur_flags_discarded_nonunit_call() {
        let text = "module 0x1::m { fun g(): u64 { 1 } public fun f() { g(); } }";
        assert_eq!(categories(text), vec!["UR"]);
    }

    #[test]
    fn ur_ignores_bound_and_unit_calls() {
        assert_eq!(
            categories("module 0x1::m { fun g(): u64 { 1 } public fun f() { let _x = g(); } }"),
            Vec::<&str>::new()
        );
        assert_eq!(
            categories("module 0x1::m { fun g() { } public fun f() { g(); } }"),
            Vec::<&str>::new()
        );
    }

    #[test]
    fn ur_ignores_external_calls() {
        assert_eq!(
            categories("module 0x1::m { use std::vector; public fun f() { vector::pop_back(); } }"),
            Vec::<&str>::new()
        );
    }

    #[test]
    fn il_flags_exitless_loop_only() {
        let text = "module 0x1::m { public fun f() { let x = 0; loop { x = x + 1; } } }";
        assert_eq!(categories(text), vec!["IL"]);
        let with_break = "module 0x1::m { public fun f(x: u64) { loop { if (x > 9) break; } } }";
        assert_eq!(categories(with_break), Vec::<&str>::new());
        let bounded = "module 0x1::m { public fun f(x: u64) { while (x < 9) { } } }";
        assert_eq!(categories(bounded), Vec::<&str>::new());
    }

    #[test]
    fn il_while_true_counts() {
        let text = "module 0x1::m { public fun f(x: u64) { while (true) { x = x + 1; } } }";
        assert_eq!(categories(text), vec!["IL"]);
    }

    #[test]
    fn ub_shapes() {
        assert_eq!(
            categories("module 0x1::m { public fun f(x: bool) { if (x == true) { abort 1 }; } }"),
            vec!["UB"]
        );
        assert_eq!(
            categories("module 0x1::m { public fun f(x: bool) { if (x) { abort 1 }; } }"),
            Vec::<&str>::new()
        );
        assert_eq!(
            categories("module 0x1::m { public fun f(c: bool): bool { let b = if (c) true else false; b } }"),
            vec!["UB"]
        );
    }

    #[test]
    fn uc_in_source_order() {
        let text = "module 0x1::m { const A: u64 = 1; const B: u64 = 2; }";
        let found = findings_for(text);
        assert_eq!(found.len(), 2);
        assert!(found[0].message.contains("`A`"));
        assert!(found[1].message.contains("`B`"));
    }

    #[test]
    fn upf_respects_visibility_and_edges() {
        assert_eq!(
            categories("module 0x1::m { fun helper() { } }"),
            vec!["UPF"]
        );
        assert_eq!(
            categories("module 0x1::m { public fun helper() { } }"),
            Vec::<&str>::new()
        );
        assert_eq!(
            categories("module 0x1::m { fun helper() { } public fun f() { helper(); } }"),
            Vec::<&str>::new()
        );
    }

    #[test]
    fn upf_suppressed_by_opaque() {
        let text = "module 0x1::m { fun helper() { } public fun f() { let (a,b) = two(); } }";
        let cats = categories(text);
        assert!(!cats.contains(&"UPF"), "{cats:?}");
    }

    #[test]
    fn utc_only_on_identity_casts() {
        assert_eq!(
            categories("module 0x1::m { public fun f(): u64 { (1u64 as u64) } }"),
            vec!["UTC"]
        );
        assert_eq!(
            categories("module 0x1::m { public fun f(x: u64): u128 { (x as u128) } }"),
            Vec::<&str>::new()
        );
        // unknown source type declines
        assert_eq!(
            categories("module 0x1::m { public fun f(y: address): u64 { (y as u64) } }"),
            Vec::<&str>::new()
        );
    }

    #[test]
    fn ov_mul_and_suppressions() {
        assert_eq!(
            categories("module 0x1::m { public fun f(a: u64, b: u64): u64 { let z = a * b; z } }"),
            vec!["Ov"]
        );
        assert_eq!(
            categories(
                "module 0x1::m { public fun f(a: u64, b: u64): u128 { let z = ((a as u128) * (b as u128)); z } }"
            ),
            Vec::<&str>::new()
        );
        assert_eq!(
            categories("module 0x1::m { public fun f(x: u64): u64 { x << 3 } }"),
            Vec::<&str>::new()
        );
        assert_eq!(
            categories("module 0x1::m { public fun f(x: u64, s: u8): u64 { x << s } }"),
            vec!["Ov"]
        );
    }

    #[test]
    fn ov_narrowing_cast_guard() {
        let unguarded = "module 0x1::m { public fun f(x: u64): u8 { (x as u8) } }";
        assert_eq!(categories(unguarded), vec!["Ov"]);
        let guarded = "module 0x1::m { public fun f(x: u64): u8 { assert!(x <= 255, 0); (x as u8) } }";
        assert_eq!(categories(guarded), Vec::<&str>::new());
    }

    #[test]
    fn pl_divide_before_multiply() {
        assert_eq!(
            categories("module 0x1::m { public fun f(a: u128, b: u128, c: u128): u128 { a / b * c } }"),
            vec!["PL"]
        );
        assert_eq!(
            categories("module 0x1::m { public fun f(a: u128, b: u128, c: u128): u128 { a * c / b } }"),
            Vec::<&str>::new()
        );
        assert_eq!(
            categories(
                "module 0x1::m { public fun f(a: u128, b: u128, c: u128): u128 { let r = a / b; r * c } }"
            ),
            vec!["PL"]
        );
    }

    #[test]
    fn pl_site_purity() {
        let text = "module 0x1::m { fun g(): u64 { 2 } public fun f(a: u64, b: u64): u64 { a / b * g() } }";
        let modules = parse_move(text).unwrap();
        let sites = pl_sites(&modules[0]);
        assert_eq!(sites.len(), 1);
        assert!(!sites[0].direct.as_ref().unwrap().all_pure);
        let _ = build_move_symbols(&modules[0]);
    }
}
