//! Intra-module symbol resolution: constant reference counts, the
//! module-local call graph, function visibility, and local integer type
//! inference.
//!
//! Type inference is local and flow-insensitive: literal suffixes,
//! declared parameter/let types, and cast targets, propagated through
//! binary operators with equal-typed operands. Anything else stays
//! unknown, which downstream detectors treat as "do not flag".

use crate::move_lang::ast::*;
use crate::move_lang::lexer::IntWidth;
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Debug, Default)]
pub struct MoveSymbols {
    /// Constant name → number of resolved references.
    pub const_refs: BTreeMap<String, usize>,
    /// Function name → intra-module callees.
    pub call_graph: BTreeMap<String, BTreeSet<String>>,
    pub fn_visibility: BTreeMap<String, Visibility>,
    /// Expression id → inferred integer type, where determinable.
    pub expr_types: HashMap<NodeId, IntWidth>,
}

impl MoveSymbols {
    pub fn width_of(&self, expr: &MoveExpr) -> Option<IntWidth> {
        self.expr_types.get(&expr.id).copied()
    }
}

pub fn build_move_symbols(module: &MoveModule) -> MoveSymbols {
    let mut symbols = MoveSymbols::default();
    let const_names: BTreeSet<String> = module.constants().map(|c| c.name.clone()).collect();
    let fn_names: BTreeSet<String> = module.functions().map(|f| f.name.clone()).collect();

    for c in module.constants() {
        symbols.const_refs.insert(c.name.clone(), 0);
    }
    for f in module.functions() {
        symbols.call_graph.insert(f.name.clone(), BTreeSet::new());
        symbols.fn_visibility.insert(f.name.clone(), f.visibility);
    }

    // Constant initializers may reference earlier constants.
    for c in module.constants() {
        count_refs(&c.value, &const_names, &BTreeSet::new(), &mut symbols.const_refs);
    }

    for f in module.functions() {
        let locals = collect_local_names(f);
        let mut callees = BTreeSet::new();
        for_each_body_expr(&f.body, &mut |e| {
            count_refs_one(e, &const_names, &locals, &mut symbols.const_refs);
            if let MoveExprKind::Call { path, is_macro: false, .. } = &e.kind {
                if path.len() == 1 && fn_names.contains(&path[0]) {
                    callees.insert(path[0].clone());
                }
            }
        });
        symbols.call_graph.insert(f.name.clone(), callees);

        let mut env: HashMap<String, IntWidth> = HashMap::new();
        for (name, ty) in &f.params {
            if let Some(w) = ty.int_width() {
                env.insert(name.clone(), w);
            }
        }
        infer_block(&f.body, &mut env, &mut symbols.expr_types);
    }

    symbols
}

/// Parameter and let-bound names, used to keep shadowed constants from
/// counting as references.
fn collect_local_names(f: &MoveFunction) -> BTreeSet<String> {
    let mut names: BTreeSet<String> = f.params.iter().map(|(n, _)| n.clone()).collect();
    walk_block_stmts(&f.body, &mut |stmt| {
        if let MoveStmt::Let { name, .. } = stmt {
            names.insert(name.clone());
        }
    });
    names
}

fn for_each_body_expr(block: &Block, f: &mut impl FnMut(&MoveExpr)) {
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

fn count_refs(
    expr: &MoveExpr,
    consts: &BTreeSet<String>,
    locals: &BTreeSet<String>,
    out: &mut BTreeMap<String, usize>,
) {
    walk_expr(expr, &mut |e| count_refs_one(e, consts, locals, out));
}

fn count_refs_one(
    e: &MoveExpr,
    consts: &BTreeSet<String>,
    locals: &BTreeSet<String>,
    out: &mut BTreeMap<String, usize>,
) {
    if let MoveExprKind::Name { path } = &e.kind {
        if path.len() == 1 && consts.contains(&path[0]) && !locals.contains(&path[0]) {
            *out.get_mut(&path[0]).unwrap() += 1;
        }
    }
}

fn infer_block(
    block: &Block,
    env: &mut HashMap<String, IntWidth>,
    types: &mut HashMap<NodeId, IntWidth>,
) {
    for stmt in &block.stmts {
        match stmt {
            MoveStmt::Let { name, ty, init, .. } => {
                let init_width = init.as_ref().and_then(|e| infer_expr(e, env, types));
                let declared = ty.as_ref().and_then(|t| t.int_width());
                if let Some(w) = declared.or(init_width) {
                    env.insert(name.clone(), w);
                } else {
                    env.remove(name);
                }
            }
            MoveStmt::Expr { expr, .. } => {
                infer_expr(expr, env, types);
            }
            MoveStmt::Opaque(_) => {}
        }
    }
    if let Some(tail) = &block.tail {
        infer_expr(tail, env, types);
    }
}

fn infer_expr(
    expr: &MoveExpr,
    env: &HashMap<String, IntWidth>,
    types: &mut HashMap<NodeId, IntWidth>,
) -> Option<IntWidth> {
    let width = match &expr.kind {
        MoveExprKind::IntLit { width, .. } => *width,
        MoveExprKind::Name { path } if path.len() == 1 => env.get(&path[0]).copied(),
        MoveExprKind::Paren(inner) => infer_expr(inner, env, types),
        MoveExprKind::Cast { expr: inner, target } => {
            infer_expr(inner, env, types);
            target.int_width()
        }
        MoveExprKind::Binary { op, lhs, rhs } => {
            let lw = infer_expr(lhs, env, types);
            let rw = infer_expr(rhs, env, types);
            match op {
                BinOp::Shl | BinOp::Shr => lw,
                BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod => {
                    if lw.is_some() && lw == rw {
                        lw
                    } else {
                        None
                    }
                }
                _ => None,
            }
        }
        MoveExprKind::Assign { lhs, rhs } => {
            infer_expr(lhs, env, types);
            infer_expr(rhs, env, types);
            None
        }
        MoveExprKind::Unary { expr: inner, .. } => {
            infer_expr(inner, env, types);
            None
        }
        MoveExprKind::FieldAccess { base, .. } => {
            infer_expr(base, env, types);
            None
        }
        MoveExprKind::Call { args, .. } => {
            for a in args {
                infer_expr(a, env, types);
            }
            None
        }
        MoveExprKind::If { cond, then_branch, else_branch } => {
            infer_expr(cond, env, types);
            let tw = infer_expr(then_branch, env, types);
            let ew = else_branch.as_ref().and_then(|e| infer_expr(e, env, types));
            if tw.is_some() && tw == ew {
                tw
            } else {
                None
            }
        }
        MoveExprKind::While { cond, body } => {
            infer_expr(cond, env, types);
            infer_expr(body, env, types);
            None
        }
        MoveExprKind::Loop { body } => {
            infer_expr(body, env, types);
            None
        }
        MoveExprKind::Block(b) => {
            let mut inner_env = env.clone();
            infer_block_value(b, &mut inner_env, types)
        }
        MoveExprKind::Abort(code) => {
            infer_expr(code, env, types);
            None
        }
        MoveExprKind::Return(Some(value)) => {
            infer_expr(value, env, types);
            None
        }
        _ => None,
    };
    if let Some(w) = width {
        types.insert(expr.id, w);
    }
    width
}

fn infer_block_value(
    block: &Block,
    env: &mut HashMap<String, IntWidth>,
    types: &mut HashMap<NodeId, IntWidth>,
) -> Option<IntWidth> {
    for stmt in &block.stmts {
        match stmt {
            MoveStmt::Let { name, ty, init, .. } => {
                let init_width = init.as_ref().and_then(|e| infer_expr(e, env, types));
                let declared = ty.as_ref().and_then(|t| t.int_width());
                if let Some(w) = declared.or(init_width) {
                    env.insert(name.clone(), w);
                } else {
                    env.remove(name);
                }
            }
            MoveStmt::Expr { expr, .. } => {
                infer_expr(expr, env, types);
            }
            MoveStmt::Opaque(_) => {}
        }
    }
    block.tail.as_ref().and_then(|tail| infer_expr(tail, env, types))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::move_lang::parser::parse_move;

    fn module(text: &str) -> MoveModule {
        parse_move(text).unwrap().remove(0)
    }

    #[test]
    fn unreferenced_constant_counts_zero() {
        let m = module("module 0x1::m { const C: u64 = 5; }");
        let s = build_move_symbols(&m);
        assert_eq!(s.const_refs.get("C"), Some(&0));
    }

    #[test]
    fn call_graph_edges() {
        let m = module("module 0x1::m { fun f() { g(); } fun g() { } }");
        let s = build_move_symbols(&m);
        assert_eq!(
            s.call_graph.get("f").unwrap().iter().collect::<Vec<_>>(),
            vec!["g"]
        );
        assert!(s.call_graph.get("g").unwrap().is_empty());
    }

    #[test]
    fn cast_records_source_and_target_widths() {
        let m = module("module 0x1::m { fun f() { let x: u64 = 1; let _y = (x as u64); } }");
        let s = build_move_symbols(&m);
        let f = m.functions().next().unwrap();
        // find the cast node and its operand
        let mut cast_widths = None;
        for stmt in &f.body.stmts {
            if let MoveStmt::Let { init: Some(e), .. } = stmt {
                walk_expr(e, &mut |n| {
                    if let MoveExprKind::Cast { expr: inner, target } = &n.kind {
                        cast_widths = Some((s.width_of(inner), target.int_width()));
                    }
                });
            }
        }
        assert_eq!(cast_widths, Some((Some(IntWidth::U64), Some(IntWidth::U64))));
    }

    #[test]
    fn totality_over_declarations() {
        let m = module(
            "module 0x1::m { const A: u64 = 1; const B: u8 = 2; fun f() { } public fun g() { } }",
        );
        let s = build_move_symbols(&m);
        assert_eq!(s.const_refs.len(), 2);
        assert_eq!(s.fn_visibility.len(), 2);
        assert_eq!(s.fn_visibility.get("g"), Some(&Visibility::Public));
    }

    #[test]
    fn equal_typed_binary_propagates() {
        let m = module("module 0x1::m { fun f(a: u64, b: u64): u64 { a * b } }");
        let s = build_move_symbols(&m);
        let f = m.functions().next().unwrap();
        let tail = f.body.tail.as_ref().unwrap();
        assert_eq!(s.width_of(tail), Some(IntWidth::U64));
    }

    #[test]
    fn shadowed_constant_not_counted() {
        let m = module("module 0x1::m { const C: u64 = 1; fun f() { let C = 2; let _x = C; } }");
        let s = build_move_symbols(&m);
        assert_eq!(s.const_refs.get("C"), Some(&0));
    }
}
