//! AST for the Move subset. Every node carries a span into the unit text;
//! expressions additionally carry a parser-assigned id used by the symbol
//! table to attach inferred integer types.

use crate::move_lang::lexer::IntWidth;
use crate::source::Span;

/// Parser-assigned expression id, unique within one parse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveType {
    Int(IntWidth),
    Bool,
    Address,
    Signer,
    Named { path: Vec<String>, args: Vec<MoveType> },
    Ref { is_mut: bool, inner: Box<MoveType> },
}

impl MoveType {
    pub fn int_width(&self) -> Option<IntWidth> {
        match self {
            MoveType::Int(w) => Some(*w),
            _ => None,
        }
    }
}

/// One `module addr::name { … }` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveModule {
    pub address: String,
    pub name: String,
    /// Declarations in source order; printing preserves this order.
    pub items: Vec<ModuleItem>,
    pub span: Span,
}

impl MoveModule {
    pub fn uses(&self) -> impl Iterator<Item = &UseDecl> {
        self.items.iter().filter_map(|i| match i {
            ModuleItem::Use(u) => Some(u),
            _ => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &ConstDecl> {
        self.items.iter().filter_map(|i| match i {
            ModuleItem::Const(c) => Some(c),
            _ => None,
        })
    }

    pub fn records(&self) -> impl Iterator<Item = &RecordDecl> {
        self.items.iter().filter_map(|i| match i {
            ModuleItem::Record(r) => Some(r),
            _ => None,
        })
    }

    pub fn functions(&self) -> impl Iterator<Item = &MoveFunction> {
        self.items.iter().filter_map(|i| match i {
            ModuleItem::Function(f) => Some(f),
            _ => None,
        })
    }

    /// True when any item or statement was captured opaquely. Detectors
    /// that reason about the whole module treat this conservatively.
    pub fn has_opaque(&self) -> bool {
        if self.items.iter().any(|i| matches!(i, ModuleItem::Opaque(_))) {
            return true;
        }
        let mut found = false;
        for f in self.functions() {
            walk_block_stmts(&f.body, &mut |stmt| {
                if matches!(stmt, MoveStmt::Opaque(_)) {
                    found = true;
                }
            });
        }
        found
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleItem {
    Use(UseDecl),
    Friend(FriendDecl),
    Const(ConstDecl),
    Record(RecordDecl),
    Function(MoveFunction),
    Opaque(OpaqueNode),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UseDecl {
    /// Raw import path text, e.g. `std::vector` or `sui::tx_context::{Self, TxContext}`.
    pub path: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriendDecl {
    pub path: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: String,
    pub ty: MoveType,
    pub value: MoveExpr,
    pub span: Span,
}

/// Named record declaration (object-language `struct`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordDecl {
    pub name: String,
    pub abilities: Vec<String>,
    pub fields: Vec<(String, MoveType)>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Visibility {
    Private,
    Public,
    PublicFriend,
    Entry,
}

impl Visibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Visibility::Private => "private",
            Visibility::Public => "public",
            Visibility::PublicFriend => "public(friend)",
            Visibility::Entry => "entry",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveFunction {
    pub name: String,
    pub visibility: Visibility,
    pub params: Vec<(String, MoveType)>,
    /// Empty list means unit return.
    pub return_types: Vec<MoveType>,
    pub acquires: Vec<String>,
    pub body: Block,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub stmts: Vec<MoveStmt>,
    /// Trailing expression without `;` — the block's value.
    pub tail: Option<Box<MoveExpr>>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveStmt {
    Let {
        name: String,
        ty: Option<MoveType>,
        init: Option<MoveExpr>,
        span: Span,
    },
    Expr {
        expr: MoveExpr,
        /// Block-like expressions (`if`, `while`, `loop`, bare blocks) may
        /// stand as statements without a semicolon.
        has_semi: bool,
        span: Span,
    },
    Opaque(OpaqueNode),
}

impl MoveStmt {
    pub fn span(&self) -> Span {
        match self {
            MoveStmt::Let { span, .. } | MoveStmt::Expr { span, .. } => *span,
            MoveStmt::Opaque(o) => o.span,
        }
    }
}

/// Balanced region outside the grammar subset, reproduced byte-exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpaqueNode {
    pub raw: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveExpr {
    pub id: NodeId,
    pub kind: MoveExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveExprKind {
    /// Original literal text kept for printing (hex, underscores, suffix).
    IntLit { text: String, width: Option<IntWidth> },
    BoolLit(bool),
    ByteStringLit(String),
    AddressLit(String),
    Name { path: Vec<String> },
    FieldAccess { base: Box<MoveExpr>, field: String },
    Binary { op: BinOp, lhs: Box<MoveExpr>, rhs: Box<MoveExpr> },
    Unary { op: UnOp, expr: Box<MoveExpr> },
    Cast { expr: Box<MoveExpr>, target: MoveType },
    Call { path: Vec<String>, is_macro: bool, args: Vec<MoveExpr> },
    If { cond: Box<MoveExpr>, then_branch: Box<MoveExpr>, else_branch: Option<Box<MoveExpr>> },
    While { cond: Box<MoveExpr>, body: Box<MoveExpr> },
    Loop { body: Box<MoveExpr> },
    Block(Block),
    Paren(Box<MoveExpr>),
    Assign { lhs: Box<MoveExpr>, rhs: Box<MoveExpr> },
    Abort(Box<MoveExpr>),
    Return(Option<Box<MoveExpr>>),
    Break,
    Continue,
}

impl MoveExpr {
    /// Strip wrapping parens.
    pub fn unwrap_parens(&self) -> &MoveExpr {
        match &self.kind {
            MoveExprKind::Paren(inner) => inner.unwrap_parens(),
            _ => self,
        }
    }

    /// Single-segment name, if this expression is one.
    pub fn as_simple_name(&self) -> Option<&str> {
        match &self.kind {
            MoveExprKind::Name { path } if path.len() == 1 => Some(path[0].as_str()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Shl,
    Shr,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn as_str(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Shl => "<<",
            BinOp::Shr => ">>",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod)
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Borrow,
    BorrowMut,
    Deref,
}

// ---------------------------------------------------------------------------
// Traversal helpers
// ---------------------------------------------------------------------------

/// Visit every statement in a block, recursing into nested blocks and
/// block-like expressions, in source order.
pub fn walk_block_stmts(block: &Block, f: &mut impl FnMut(&MoveStmt)) {
    for stmt in &block.stmts {
        f(stmt);
        match stmt {
            MoveStmt::Let { init: Some(e), .. } => walk_expr_stmts(e, f),
            MoveStmt::Expr { expr, .. } => walk_expr_stmts(expr, f),
            _ => {}
        }
    }
    if let Some(tail) = &block.tail {
        walk_expr_stmts(tail, f);
    }
}

fn walk_expr_stmts(expr: &MoveExpr, f: &mut impl FnMut(&MoveStmt)) {
    walk_expr(expr, &mut |e| {
        if let MoveExprKind::Block(b) = &e.kind {
            for stmt in &b.stmts {
                f(stmt);
            }
        }
    });
}

/// Pre-order walk over an expression tree.
pub fn walk_expr(expr: &MoveExpr, f: &mut impl FnMut(&MoveExpr)) {
    f(expr);
    match &expr.kind {
        MoveExprKind::FieldAccess { base, .. } => walk_expr(base, f),
        MoveExprKind::Binary { lhs, rhs, .. } => {
            walk_expr(lhs, f);
            walk_expr(rhs, f);
        }
        MoveExprKind::Unary { expr: e, .. }
        | MoveExprKind::Cast { expr: e, .. }
        | MoveExprKind::Paren(e)
        | MoveExprKind::Abort(e)
        | MoveExprKind::Loop { body: e } => walk_expr(e, f),
        MoveExprKind::Call { args, .. } => {
            for a in args {
                walk_expr(a, f);
            }
        }
        MoveExprKind::If { cond, then_branch, else_branch } => {
            walk_expr(cond, f);
            walk_expr(then_branch, f);
            if let Some(e) = else_branch {
                walk_expr(e, f);
            }
        }
        MoveExprKind::While { cond, body } => {
            walk_expr(cond, f);
            walk_expr(body, f);
        }
        MoveExprKind::Block(b) => {
            for stmt in &b.stmts {
                match stmt {
                    MoveStmt::Let { init: Some(e), .. } => walk_expr(e, f),
                    MoveStmt::Expr { expr: e, .. } => walk_expr(e, f),
                    _ => {}
                }
            }
            if let Some(tail) = &b.tail {
                walk_expr(tail, f);
            }
        }
        MoveExprKind::Assign { lhs, rhs } => {
            walk_expr(lhs, f);
            walk_expr(rhs, f);
        }
        MoveExprKind::Return(Some(e)) => walk_expr(e, f),
        _ => {}
    }
}

/// Walk every expression in every function body plus constant initializers.
pub fn walk_module_exprs(module: &MoveModule, f: &mut impl FnMut(&MoveExpr)) {
    for item in &module.items {
        match item {
            ModuleItem::Const(c) => walk_expr(&c.value, f),
            ModuleItem::Function(func) => {
                for stmt in &func.body.stmts {
                    match stmt {
                        MoveStmt::Let { init: Some(e), .. } => walk_expr(e, f),
                        MoveStmt::Expr { expr, .. } => walk_expr(expr, f),
                        _ => {}
                    }
                }
                if let Some(tail) = &func.body.tail {
                    walk_expr(tail, f);
                }
            }
            _ => {}
        }
    }
}

// ---------------------------------------------------------------------------
// Structural normalization (spans and ids zeroed) for round-trip equality
// ---------------------------------------------------------------------------

pub fn normalize_module(module: &MoveModule) -> MoveModule {
    let mut m = module.clone();
    m.span = Span::default();
    for item in &mut m.items {
        match item {
            ModuleItem::Use(u) => u.span = Span::default(),
            ModuleItem::Friend(fr) => fr.span = Span::default(),
            ModuleItem::Const(c) => {
                c.span = Span::default();
                normalize_expr(&mut c.value);
            }
            ModuleItem::Record(r) => r.span = Span::default(),
            ModuleItem::Function(f) => {
                f.span = Span::default();
                normalize_block(&mut f.body);
            }
            ModuleItem::Opaque(o) => o.span = Span::default(),
        }
    }
    m
}

fn normalize_block(block: &mut Block) {
    block.span = Span::default();
    for stmt in &mut block.stmts {
        match stmt {
            MoveStmt::Let { init, span, .. } => {
                *span = Span::default();
                if let Some(e) = init {
                    normalize_expr(e);
                }
            }
            MoveStmt::Expr { expr, span, .. } => {
                *span = Span::default();
                normalize_expr(expr);
            }
            MoveStmt::Opaque(o) => o.span = Span::default(),
        }
    }
    if let Some(tail) = &mut block.tail {
        normalize_expr(tail);
    }
}

fn normalize_expr(expr: &mut MoveExpr) {
    expr.id = NodeId(0);
    expr.span = Span::default();
    match &mut expr.kind {
        MoveExprKind::FieldAccess { base, .. } => normalize_expr(base),
        MoveExprKind::Binary { lhs, rhs, .. } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
        MoveExprKind::Unary { expr: e, .. }
        | MoveExprKind::Cast { expr: e, .. }
        | MoveExprKind::Paren(e)
        | MoveExprKind::Abort(e)
        | MoveExprKind::Loop { body: e } => normalize_expr(e),
        MoveExprKind::Call { args, .. } => args.iter_mut().for_each(normalize_expr),
        MoveExprKind::If { cond, then_branch, else_branch } => {
            normalize_expr(cond);
            normalize_expr(then_branch);
            if let Some(e) = else_branch {
                normalize_expr(e);
            }
        }
        MoveExprKind::While { cond, body } => {
            normalize_expr(cond);
            normalize_expr(body);
        }
        MoveExprKind::Block(b) => normalize_block(b),
        MoveExprKind::Assign { lhs, rhs } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
        MoveExprKind::Return(Some(e)) => normalize_expr(e),
        _ => {}
    }
}
