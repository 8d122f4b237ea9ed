//! The eight Solidity detectors, mirroring the Move side: site
//! enumeration shared with repair, thin finding wrappers on top.

use crate::detectors::{DefectCategory, Finding};
use crate::sol_lang::ast::*;
use crate::sol_lang::lexer::{tokenize_sol, SolTokenKind};
use crate::source::{SourceUnit, Span};
use std::collections::BTreeSet;

const OWNER_PATTERNS: &[&str] = &["owner", "admin", "authority"];

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

/// Names bound inside the function: parameters and local declarations.
fn local_names(f: &SolFunction) -> BTreeSet<String> {
    let mut names: BTreeSet<String> = f.params.iter().filter_map(|p| p.name.clone()).collect();
    if let Some(body) = &f.body {
        walk_sol_stmts(&body.stmts, &mut |stmt| {
            if let SolStmt::VarDecl { name, .. } = stmt {
                names.insert(name.clone());
            }
        });
    }
    names
}

fn is_storage_root(contract: &SolContract, locals: &BTreeSet<String>, root: &str) -> bool {
    contract.is_state_var(root) && !locals.contains(root)
}

/// Storage slot root written by this expression, if it is a storage
/// assignment (including compound assignment and `delete`).
fn storage_write_root<'e>(
    expr: &'e SolExpr,
    contract: &SolContract,
    locals: &BTreeSet<String>,
) -> Option<&'e str> {
    match &expr.kind {
        SolExprKind::Assign { lhs, .. } => {
            let root = lhs.root_ident()?;
            is_storage_root(contract, locals, root).then_some(root)
        }
        SolExprKind::Unary { op, expr: inner, .. } if op.starts_with("delete") => {
            let root = inner.root_ident()?;
            is_storage_root(contract, locals, root).then_some(root)
        }
        _ => None,
    }
}

fn stmt_storage_write_root(
    stmt: &SolStmt,
    contract: &SolContract,
    locals: &BTreeSet<String>,
) -> Option<String> {
    let mut found = None;
    walk_stmt_exprs(stmt, &mut |e| {
        if found.is_none() {
            if let Some(root) = storage_write_root(e, contract, locals) {
                found = Some(root.to_string());
            }
        }
    });
    found
}

fn stmt_has_external_call(stmt: &SolStmt) -> bool {
    let mut found = false;
    walk_stmt_exprs(stmt, &mut |e| {
        if let SolExprKind::ExternalCall { .. } = &e.kind {
            found = true;
        }
    });
    found
}

/// External call that moves value (`transfer`/`send`/any value-bearing call).
fn stmt_sends_value(stmt: &SolStmt) -> bool {
    let mut found = false;
    walk_stmt_exprs(stmt, &mut |e| {
        if let SolExprKind::ExternalCall { form, value, .. } = &e.kind {
            if !matches!(form, CallForm::BareCall) || value.is_some() {
                found = true;
            }
        }
    });
    found
}

/// Leaf statements of a body in source (pre-order) position, used for
/// "followed by" checks.
fn flatten<'a>(stmts: &'a [SolStmt], out: &mut Vec<&'a SolStmt>) {
    for stmt in stmts {
        out.push(stmt);
        match stmt {
            SolStmt::If { then_branch, else_branch, .. } => {
                flatten(std::slice::from_ref(then_branch), out);
                if let Some(e) = else_branch {
                    flatten(std::slice::from_ref(e), out);
                }
            }
            SolStmt::While { body, .. } | SolStmt::For { body, .. } => {
                flatten(std::slice::from_ref(body), out);
            }
            SolStmt::Block(b) => flatten(&b.stmts, out),
            _ => {}
        }
    }
}

fn require_args(stmt: &SolStmt) -> Option<&[SolExpr]> {
    match stmt {
        SolStmt::Expr { expr, .. } => expr.unwrap_parens().is_call_to("require"),
        _ => None,
    }
}

fn atom_spans(e: &SolExpr, pred: impl Fn(AtomKind) -> bool) -> Vec<Span> {
    let mut spans = Vec::new();
    walk_sol_expr(e, &mut |n| {
        if let SolExprKind::Atom(a) = &n.kind {
            if pred(*a) {
                spans.push(n.span);
            }
        }
    });
    spans
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Lexical SafeMath heuristic: a `using … SafeMath …` directive or any
/// `.add/.sub/.mul` member call in the contract.
pub fn uses_safemath(contract: &SolContract) -> bool {
    for member in &contract.members {
        if let SolMember::Using(o) = member {
            if o.raw.contains("SafeMath") {
                return true;
            }
        }
    }
    let mut found = false;
    for f in contract.functions() {
        if let Some(body) = &f.body {
            for stmt in &body.stmts {
                walk_stmt_exprs(stmt, &mut |e| {
                    if let SolExprKind::Call { callee, .. } = &e.kind {
                        if let SolExprKind::Member { member, .. } = &callee.kind {
                            if matches!(member.as_str(), "add" | "sub" | "mul") {
                                found = true;
                            }
                        }
                    }
                });
            }
        }
    }
    found
}

// ---------------------------------------------------------------------------
// REENTRANCY
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ReentrancySite {
    pub call_stmt_span: Span,
    /// Storage-writing statements after the call in the function's
    /// top-level statement list; the mechanical fix moves exactly these.
    pub movable_writes: Vec<Span>,
    pub mechanical: bool,
}

pub fn reentrancy_sites(file: &SolFile) -> Vec<ReentrancySite> {
    let mut sites = Vec::new();
    for contract in file.contracts() {
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            let locals = local_names(f);
            let mut flat = Vec::new();
            flatten(&body.stmts, &mut flat);
            let Some(call_idx) = flat.iter().position(|s| stmt_has_external_call(s)) else {
                continue;
            };
            let later_writes: Vec<&&SolStmt> = flat[call_idx + 1..]
                .iter()
                .filter(|s| stmt_storage_write_root(s, contract, &locals).is_some())
                .collect();
            if later_writes.is_empty() {
                continue;
            }
            let call_stmt_span = flat[call_idx].span();

            // Mechanical only when the call statement and every later
            // write live directly in the function's top-level list and no
            // statement between the call and the last write reads a moved
            // slot.
            let call_top_idx =
                body.stmts.iter().position(|s| s.span() == call_stmt_span);
            let mut movable = Vec::new();
            let mut mechanical = false;
            if let Some(ci) = call_top_idx {
                let mut roots = Vec::new();
                for s in &body.stmts[ci + 1..] {
                    if let Some(root) = stmt_storage_write_root(s, contract, &locals) {
                        movable.push(s.span());
                        roots.push(root);
                    }
                }
                if movable.len() == later_writes.len() && !movable.is_empty() {
                    mechanical = true;
                    let last_write_start =
                        movable.iter().map(|s| s.start_byte).max().unwrap_or(0);
                    for s in &body.stmts[ci + 1..] {
                        if movable.contains(&s.span()) || s.span().start_byte > last_write_start {
                            continue;
                        }
                        let mut reads_moved = false;
                        walk_stmt_exprs(s, &mut |e| {
                            if let SolExprKind::Ident(name) = &e.kind {
                                if roots.iter().any(|r| r == name) {
                                    reads_moved = true;
                                }
                            }
                        });
                        if reads_moved {
                            mechanical = false;
                        }
                    }
                }
            }
            sites.push(ReentrancySite { call_stmt_span, movable_writes: movable, mechanical });
        }
    }
    sites
}

pub fn detect_sol_reentrancy(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    reentrancy_sites(file)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::Reentrancy,
                s.call_stmt_span,
                "external call happens before the state update it guards",
                s.mechanical,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// INT_OVERFLOW
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct IntOverflowSite {
    pub op: SolBinOp,
    pub op_span: Span,
    pub stmt_span: Span,
    pub lhs_span: Span,
    pub rhs_span: Span,
}

pub fn int_overflow_sites(file: &SolFile, text: &str) -> Vec<IntOverflowSite> {
    let mut sites = Vec::new();
    if !matches!(pragma_lt(&file.pragma, 0, 8), Ok(true)) {
        return sites;
    }
    for contract in file.contracts() {
        if uses_safemath(contract) {
            continue;
        }
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            let locals = local_names(f);
            scan_overflow(&body.stmts, contract, &locals, text, &mut sites);
        }
    }
    sites
}

fn scan_overflow(
    stmts: &[SolStmt],
    contract: &SolContract,
    locals: &BTreeSet<String>,
    text: &str,
    out: &mut Vec<IntOverflowSite>,
) {
    for (i, stmt) in stmts.iter().enumerate() {
        if let SolStmt::Expr { expr, span } = stmt {
            if let Some(site) = overflow_site(expr, *span, contract, locals) {
                let guarded = i > 0 && require_covers_operands(&stmts[i - 1], &site, text);
                if !guarded {
                    out.push(site);
                }
            }
        }
        match stmt {
            SolStmt::If { then_branch, else_branch, .. } => {
                scan_overflow(std::slice::from_ref(then_branch), contract, locals, text, out);
                if let Some(e) = else_branch {
                    scan_overflow(std::slice::from_ref(e), contract, locals, text, out);
                }
            }
            SolStmt::While { body, .. } | SolStmt::For { body, .. } => {
                scan_overflow(std::slice::from_ref(body), contract, locals, text, out);
            }
            SolStmt::Block(b) => scan_overflow(&b.stmts, contract, locals, text, out),
            _ => {}
        }
    }
}

fn overflow_site(
    expr: &SolExpr,
    stmt_span: Span,
    contract: &SolContract,
    locals: &BTreeSet<String>,
) -> Option<IntOverflowSite> {
    let SolExprKind::Assign { op, lhs, rhs } = &expr.kind else {
        return None;
    };
    let root = lhs.root_ident()?;
    if !is_storage_root(contract, locals, root) {
        return None;
    }
    if let Some(arith) = op.arithmetic() {
        return Some(IntOverflowSite {
            op: arith,
            op_span: expr.span,
            stmt_span,
            lhs_span: lhs.span,
            rhs_span: rhs.span,
        });
    }
    match &rhs.unwrap_parens().kind {
        SolExprKind::Binary { op, lhs: a, rhs: b } if op.is_arithmetic() => Some(IntOverflowSite {
            op: *op,
            op_span: rhs.unwrap_parens().span,
            stmt_span,
            lhs_span: a.span,
            rhs_span: b.span,
        }),
        _ => None,
    }
}

/// Immediately preceding `require` mentioning both operand snippets
/// (whitespace-insensitive containment).
fn require_covers_operands(prev: &SolStmt, site: &IntOverflowSite, text: &str) -> bool {
    let Some(args) = require_args(prev) else {
        return false;
    };
    let Some(cond) = args.first() else {
        return false;
    };
    let cond_text = strip_ws(cond.span.slice(text));
    let a = strip_ws(site.lhs_span.slice(text));
    let b = strip_ws(site.rhs_span.slice(text));
    cond_text.contains(&a) && cond_text.contains(&b)
}

pub fn detect_sol_overflow(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    int_overflow_sites(file, &unit.text)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::IntOverflow,
                s.op_span,
                "unchecked arithmetic on storage under a pre-0.8 compiler",
                !matches!(s.op, SolBinOp::Mul),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// DOS
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct DosSite {
    pub span: Span,
}

pub fn dos_sites(file: &SolFile) -> Vec<DosSite> {
    let mut sites = Vec::new();
    for contract in file.contracts() {
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            scan_dos(&body.stmts, contract, &mut sites);
        }
    }
    sites.sort_by_key(|s| s.span.start_byte);
    sites
}

fn scan_dos(stmts: &[SolStmt], contract: &SolContract, out: &mut Vec<DosSite>) {
    for stmt in stmts {
        match stmt {
            SolStmt::For { cond, body, span, .. } => {
                scan_dos_loop(cond.as_ref(), body, *span, contract, out);
            }
            SolStmt::While { cond, body, span } => {
                scan_dos_loop(Some(cond), body, *span, contract, out);
            }
            SolStmt::If { then_branch, else_branch, .. } => {
                scan_dos(std::slice::from_ref(then_branch), contract, out);
                if let Some(e) = else_branch {
                    scan_dos(std::slice::from_ref(e), contract, out);
                }
            }
            SolStmt::Block(b) => scan_dos(&b.stmts, contract, out),
            _ => {}
        }
    }
}

fn scan_dos_loop(
    cond: Option<&SolExpr>,
    body: &SolStmt,
    loop_span: Span,
    contract: &SolContract,
    out: &mut Vec<DosSite>,
) {
    let over_state_array = cond
        .map(|c| cond_bounded_by_state_length(c, contract))
        .unwrap_or(false);
    let mut has_ext = false;
    walk_sol_stmts(std::slice::from_ref(body), &mut |s| {
        if stmt_has_external_call(s) {
            has_ext = true;
        }
    });
    if over_state_array && has_ext {
        out.push(DosSite { span: loop_span });
        return; // a flagged loop does not re-flag its require sites
    }
    // any require(send/transfer…) inside the loop body
    walk_sol_stmts(std::slice::from_ref(body), &mut |s| {
        if let Some(args) = require_args(s) {
            let mut has_send = false;
            for a in args {
                walk_sol_expr(a, &mut |e| {
                    if let SolExprKind::ExternalCall {
                        form:
                            CallForm::Send
                            | CallForm::Transfer
                            | CallForm::CallValueLegacy
                            | CallForm::CallValueOptions,
                        ..
                    } = &e.kind
                    {
                        has_send = true;
                    }
                });
            }
            if has_send {
                out.push(DosSite { span: s.span() });
            }
        }
    });
}

fn cond_bounded_by_state_length(cond: &SolExpr, contract: &SolContract) -> bool {
    let mut found = false;
    walk_sol_expr(cond, &mut |e| {
        if let SolExprKind::Member { base, member } = &e.kind {
            if member == "length" {
                if let Some(root) = base.root_ident() {
                    if contract.is_state_var(root) {
                        found = true;
                    }
                }
            }
        }
    });
    found
}

pub fn detect_sol_dos(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    dos_sites(file)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::DenialOfService,
                s.span,
                "a single failing or unbounded external call can block this path for everyone",
                false,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// ACCESS_CONTROL
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct AccessSite {
    pub fn_span: Span,
    pub fn_name: String,
    /// Byte offset just after the body's `{`.
    pub body_open: usize,
    pub first_stmt_span: Option<Span>,
    pub has_owner_var: bool,
}

pub fn access_sites(file: &SolFile) -> Vec<AccessSite> {
    let mut sites = Vec::new();
    for contract in file.contracts() {
        let has_owner_var = contract.is_state_var("owner");
        for f in contract.functions() {
            if f.kind == FnKind::Constructor {
                continue;
            }
            if !matches!(
                f.visibility,
                SolVisibility::Public | SolVisibility::External | SolVisibility::Default
            ) {
                continue;
            }
            if !f.modifiers.is_empty() {
                continue;
            }
            let Some(body) = &f.body else { continue };
            if body_requires_sender(body) {
                continue;
            }
            let locals = local_names(f);
            let mut writes_ownerlike = false;
            let mut dangerous = false;
            walk_sol_stmts(&body.stmts, &mut |stmt| {
                walk_stmt_exprs(stmt, &mut |e| {
                    if let Some(root) = storage_write_root(e, contract, &locals) {
                        let lower = root.to_lowercase();
                        if OWNER_PATTERNS.iter().any(|p| lower.contains(p)) {
                            writes_ownerlike = true;
                        }
                    }
                    match &e.kind {
                        SolExprKind::ExternalCall { form, value, .. } => {
                            if !matches!(form, CallForm::BareCall) || value.is_some() {
                                dangerous = true;
                            }
                        }
                        SolExprKind::Call { callee, .. } => {
                            if let SolExprKind::Ident(name) = &callee.kind {
                                if name == "selfdestruct" || name == "suicide" {
                                    dangerous = true;
                                }
                            }
                        }
                        _ => {}
                    }
                });
            });
            if writes_ownerlike || dangerous {
                sites.push(AccessSite {
                    fn_span: f.span,
                    fn_name: f.name.clone(),
                    body_open: body.span.start_byte + 1,
                    first_stmt_span: body.stmts.first().map(|s| s.span()),
                    has_owner_var,
                });
            }
        }
    }
    sites
}

fn body_requires_sender(body: &SolBlock) -> bool {
    let mut found = false;
    walk_sol_stmts(&body.stmts, &mut |stmt| {
        if let Some(args) = require_args(stmt) {
            for a in args {
                if !atom_spans(a, |k| k == AtomKind::MsgSender).is_empty() {
                    found = true;
                }
            }
        }
    });
    found
}

pub fn detect_sol_access(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    access_sites(file)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::AccessControl,
                s.fn_span,
                format!("`{}` performs privileged operations without a caller check", s.fn_name),
                s.has_owner_var,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// UNINIT_STORAGE
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UninitStorageSite {
    pub decl_span: Span,
    /// Byte offset of the variable name; the fix inserts `memory ` here.
    pub name_offset: usize,
}

pub fn uninit_storage_sites(file: &SolFile, text: &str) -> Vec<UninitStorageSite> {
    let mut sites = Vec::new();
    if !matches!(pragma_lt(&file.pragma, 0, 5), Ok(true)) {
        return sites;
    }
    for contract in file.contracts() {
        let struct_names: BTreeSet<&str> = contract.structs().map(|s| s.name.as_str()).collect();
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            walk_sol_stmts(&body.stmts, &mut |stmt| {
                let SolStmt::VarDecl { ty, loc: None, name, init: None, span } = stmt else {
                    return;
                };
                let pointer_type = match ty {
                    SolType::Named(n) => struct_names.contains(n.as_str()),
                    SolType::Array { .. } => true,
                    _ => false,
                };
                if !pointer_type {
                    return;
                }
                if let Some(offset) = name_offset_in_decl(text, *span, name) {
                    sites.push(UninitStorageSite { decl_span: *span, name_offset: offset });
                }
            });
        }
    }
    sites
}

/// Byte offset of the declared name within the declaration snippet: the
/// last identifier token equal to `name`.
fn name_offset_in_decl(text: &str, span: Span, name: &str) -> Option<usize> {
    let snippet = span.slice(text);
    let tokens = tokenize_sol(snippet).ok()?;
    tokens
        .iter()
        .rev()
        .find(|t| t.kind == SolTokenKind::Ident && t.text == name)
        .map(|t| span.start_byte + t.span.start_byte)
}

pub fn detect_sol_uninit_storage(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    uninit_storage_sites(file, &unit.text)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::UninitStorage,
                s.decl_span,
                "local of reference type defaults to a storage pointer under pre-0.5 compilers",
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// TX_ORIGIN
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TxOriginSite {
    pub atom_span: Span,
}

pub fn txorigin_sites(file: &SolFile) -> Vec<TxOriginSite> {
    let mut sites = Vec::new();
    for contract in file.contracts() {
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            walk_sol_stmts(&body.stmts, &mut |stmt| {
                if let Some(args) = require_args(stmt) {
                    for a in args {
                        for span in atom_spans(a, |k| k == AtomKind::TxOrigin) {
                            sites.push(TxOriginSite { atom_span: span });
                        }
                    }
                    return;
                }
                walk_stmt_exprs(stmt, &mut |e| {
                    if let SolExprKind::Binary { op, lhs, rhs } = &e.kind {
                        if op.is_comparison() {
                            for side in [lhs, rhs] {
                                for span in atom_spans(side, |k| k == AtomKind::TxOrigin) {
                                    sites.push(TxOriginSite { atom_span: span });
                                }
                            }
                        }
                    }
                });
            });
        }
    }
    sites.sort_by_key(|s| s.atom_span.start_byte);
    sites.dedup_by_key(|s| s.atom_span);
    sites
}

pub fn detect_sol_txorigin(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    txorigin_sites(file)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::TxOrigin,
                s.atom_span,
                "authentication via tx.origin is phishable; use msg.sender",
                true,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// TIMESTAMP
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TimestampSite {
    pub atom_span: Span,
}

pub fn timestamp_sites(file: &SolFile) -> Vec<TimestampSite> {
    let mut sites = Vec::new();
    for contract in file.contracts() {
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            let locals = local_names(f);
            let mut effectful = false;
            walk_sol_stmts(&body.stmts, &mut |stmt| {
                if stmt_sends_value(stmt)
                    || stmt_storage_write_root(stmt, contract, &locals).is_some()
                {
                    effectful = true;
                }
            });
            if !effectful {
                continue;
            }
            walk_sol_stmts(&body.stmts, &mut |stmt| {
                let conditions: Vec<&SolExpr> = match stmt {
                    SolStmt::If { cond, .. } | SolStmt::While { cond, .. } => vec![cond],
                    SolStmt::For { cond: Some(cond), .. } => vec![cond],
                    _ => match require_args(stmt) {
                        Some(args) => args.iter().collect(),
                        None => Vec::new(),
                    },
                };
                for cond in conditions {
                    for span in atom_spans(cond, |k| k.is_timestamp()) {
                        sites.push(TimestampSite { atom_span: span });
                    }
                }
            });
        }
    }
    sites.sort_by_key(|s| s.atom_span.start_byte);
    sites.dedup_by_key(|s| s.atom_span);
    sites
}

pub fn detect_sol_timestamp(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    timestamp_sites(file)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::Timestamp,
                s.atom_span,
                "block timestamp steers a value-moving decision and miners can skew it",
                false,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// GAS_LIMIT
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GasSite {
    pub loop_span: Span,
}

pub fn gas_sites(file: &SolFile) -> Vec<GasSite> {
    let mut sites = Vec::new();
    for contract in file.contracts() {
        for f in contract.functions() {
            let Some(body) = &f.body else { continue };
            let locals = local_names(f);
            walk_sol_stmts(&body.stmts, &mut |stmt| {
                let (cond, loop_body, span) = match stmt {
                    SolStmt::For { cond: Some(cond), body, span, .. } => (cond, body, *span),
                    SolStmt::While { cond, body, span } => (cond, body, *span),
                    _ => return,
                };
                if !cond_bounded_by_state_length(cond, contract) {
                    return;
                }
                let mut effectful = false;
                walk_sol_stmts(std::slice::from_ref(loop_body), &mut |s| {
                    if stmt_sends_value(s)
                        || stmt_storage_write_root(s, contract, &locals).is_some()
                    {
                        effectful = true;
                    }
                });
                if effectful {
                    sites.push(GasSite { loop_span: span });
                }
            });
        }
    }
    sites
}

pub fn detect_sol_gas(file: &SolFile, unit: &SourceUnit) -> Vec<Finding> {
    gas_sites(file)
        .into_iter()
        .map(|s| {
            Finding::new(
                unit,
                DefectCategory::GasLimit,
                s.loop_span,
                "iteration is bounded by a growable state array and can exceed the block gas limit",
                false,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use crate::source::{Language, SourceUnit};

    fn categories(text: &str) -> Vec<&'static str> {
        let unit = SourceUnit::new(Language::Solidity, text);
        crate::detectors::audit(&unit)
            .unwrap()
            .findings
            .iter()
            .map(|f| f.category.code())
            .collect()
    }

    const WITHDRAW_VULN: &str = r#"pragma solidity ^0.4.24;
contract Vault {
    mapping(address => uint256) balances;
    function withdraw() public {
        uint256 amount = balances[msg.sender];
        require(msg.sender.call.value(amount)());
        balances[msg.sender] = 0;
    }
}"#;

    const WITHDRAW_SAFE: &str = r#"pragma solidity ^0.4.24;
contract Vault {
    mapping(address => uint256) balances;
    function withdraw() public {
        uint256 amount = balances[msg.sender];
        balances[msg.sender] = 0;
        require(msg.sender.call.value(amount)());
    }
}"#;

    #[test]
    fn reentrancy_call_then_write() {
        assert_eq!(categories(WITHDRAW_VULN), vec!["REENTRANCY"]);
    }

    #[test]
    fn reentrancy_checks_effects_interactions_order_passes() {
        assert_eq!(categories(WITHDRAW_SAFE), Vec::<&str>::new());
    }

    #[test]
    fn reentrancy_no_later_write_passes() {
        let text = r#"pragma solidity ^0.4.24;
contract Payout {
    mapping(address => uint256) balances;
    function pay(address to) internal {
        to.transfer(1 ether);
    }
}"#;
        assert_eq!(categories(text), Vec::<&str>::new());
    }

    #[test]
    fn overflow_era_gate() {
        let old = r#"pragma solidity ^0.4.24;
contract Token {
    mapping(address => uint256) balances;
    function mint(address to, uint256 amount) internal {
        balances[to] += amount;
    }
}"#;
        assert_eq!(categories(old), vec!["INT_OVERFLOW"]);
        let new = old.replace("^0.4.24", "^0.8.0");
        assert_eq!(categories(&new), Vec::<&str>::new());
    }

    #[test]
    fn overflow_guarded_subtraction_passes() {
        let text = r#"pragma solidity ^0.4.24;
contract Token {
    mapping(address => uint256) balances;
    function burn(address from, uint256 amount) internal {
        require(balances[from] >= amount);
        balances[from] -= amount;
    }
}"#;
        assert_eq!(categories(text), Vec::<&str>::new());
    }

    #[test]
    fn overflow_suppressed_by_safemath() {
        let text = r#"pragma solidity ^0.4.24;
contract Token {
    using SafeMath for uint256;
    mapping(address => uint256) balances;
    function mint(address to, uint256 amount) internal {
        balances[to] += amount;
    }
}"#;
        assert_eq!(categories(text), Vec::<&str>::new());
    }

    #[test]
    fn dos_dividend_loop() {
        let text = r#"pragma solidity ^0.4.24;
contract Dividends {
    address[] public holders;
    function payAll() internal {
        for (uint i = 0; i < holders.length; i++) {
            require(holders[i].send(1 ether));
        }
    }
}"#;
        let cats = categories(text);
        assert!(cats.contains(&"DOS"), "{cats:?}");
    }

    #[test]
    fn access_unguarded_set_owner() {
        let text = r#"pragma solidity ^0.4.24;
contract Owned {
    address owner;
    function setOwner(address newOwner) public {
        owner = newOwner;
    }
}"#;
        assert_eq!(categories(text), vec!["ACCESS_CONTROL"]);
    }

    #[test]
    fn access_guarded_variants_pass() {
        let with_modifier = r#"pragma solidity ^0.4.24;
contract Owned {
    address owner;
    modifier onlyOwner() { require(msg.sender == owner); _; }
    function setOwner(address newOwner) public onlyOwner {
        owner = newOwner;
    }
}"#;
        assert_eq!(categories(with_modifier), Vec::<&str>::new());
        let with_require = r#"pragma solidity ^0.4.24;
contract Owned {
    address owner;
    function setOwner(address newOwner) public {
        require(msg.sender == owner);
        owner = newOwner;
    }
}"#;
        assert_eq!(categories(with_require), Vec::<&str>::new());
    }

    #[test]
    fn uninit_storage_pointer() {
        let text = r#"pragma solidity ^0.4.24;
contract Wallets {
    struct Wallet { uint256 amount; address holder; }
    function open() public {
        Wallet w;
        w.amount = 1;
    }
}"#;
        assert_eq!(categories(text), vec!["UNINIT_STORAGE"]);
        let with_memory = text.replace("Wallet w;", "Wallet memory w;");
        assert_eq!(categories(&with_memory), Vec::<&str>::new());
        let newer = text.replace("^0.4.24", "^0.5.0");
        assert_eq!(categories(&newer), Vec::<&str>::new());
    }

    #[test]
    fn txorigin_in_require_only() {
        let flagged = r#"pragma solidity ^0.4.24;
contract Auth {
    address owner;
    function pay() public {
        require(tx.origin == owner);
    }
}"#;
        assert_eq!(categories(flagged), vec!["TX_ORIGIN"]);
        let sender = flagged.replace("tx.origin", "msg.sender");
        assert_eq!(categories(&sender), Vec::<&str>::new());
    }

    #[test]
    fn timestamp_needs_effect() {
        let flagged = r#"pragma solidity ^0.4.24;
contract Lottery {
    address winner;
    function draw(address player) public {
        if (now % 2 == 0) {
            winner = player;
        }
    }
}"#;
        assert_eq!(categories(flagged), vec!["TIMESTAMP"]);
        let readonly = r#"pragma solidity ^0.4.24;
contract Clock {
    function when() public view returns (uint256) {
        return now;
    }
}"#;
        assert_eq!(categories(readonly), Vec::<&str>::new());
    }

    #[test]
    fn gas_unbounded_loop() {
        let flagged = r#"pragma solidity ^0.8.0;
contract Airdrop {
    address[] public holders;
    mapping(address => uint256) public credits;
    function creditAll() public {
        for (uint i = 0; i < holders.length; i++) {
            credits[holders[i]] = 1;
        }
    }
}"#;
        let cats = categories(flagged);
        assert!(cats.contains(&"GAS_LIMIT"), "{cats:?}");
        let fixed_bound = flagged.replace("holders.length", "10");
        assert_eq!(categories(&fixed_bound), Vec::<&str>::new());
    }
}
