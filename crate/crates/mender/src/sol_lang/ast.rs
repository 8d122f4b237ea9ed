//! AST for the Solidity subset.

use crate::source::Span;

pub use crate::move_lang::ast::{NodeId, OpaqueNode};

/// Parsed source file: extracted pragma plus top-level items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolFile {
    pub pragma: PragmaVersion,
    pub items: Vec<SolTopItem>,
    pub span: Span,
}

impl SolFile {
    pub fn contracts(&self) -> impl Iterator<Item = &SolContract> {
        self.items.iter().filter_map(|i| match i {
            SolTopItem::Contract(c) => Some(c),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolTopItem {
    /// Raw pragma text for printing; the parsed form lives on `SolFile`.
    Pragma(OpaqueNode),
    Contract(SolContract),
    Opaque(OpaqueNode),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Caret,
    Exact,
    Range,
    Absent,
}

/// Minimum compiler version admitted by the pragma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PragmaVersion {
    pub comparator: Comparator,
    pub major: u32,
    pub minor: u32,
    pub patch: u32,
}

impl PragmaVersion {
    pub fn absent() -> PragmaVersion {
        PragmaVersion { comparator: Comparator::Absent, major: 0, minor: 0, patch: 0 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("pragma comparison on a unit with no pragma")]
pub struct AbsentPragma;

/// True iff the minimum version admitted by `p` precedes `(major, minor)`.
pub fn pragma_lt(p: &PragmaVersion, major: u32, minor: u32) -> Result<bool, AbsentPragma> {
    if p.comparator == Comparator::Absent {
        return Err(AbsentPragma);
    }
    Ok((p.major, p.minor) < (major, minor))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolContract {
    pub name: String,
    /// Raw `is …` clause, preserved verbatim.
    pub inherits_raw: Option<String>,
    pub members: Vec<SolMember>,
    pub span: Span,
}

impl SolContract {
    pub fn state_vars(&self) -> impl Iterator<Item = &StateVarDecl> {
        self.members.iter().filter_map(|m| match m {
            SolMember::StateVar(v) => Some(v),
            _ => None,
        })
    }

    pub fn functions(&self) -> impl Iterator<Item = &SolFunction> {
        self.members.iter().filter_map(|m| match m {
            SolMember::Function(f) => Some(f),
            _ => None,
        })
    }

    pub fn structs(&self) -> impl Iterator<Item = &SolStructDecl> {
        self.members.iter().filter_map(|m| match m {
            SolMember::Struct(s) => Some(s),
            _ => None,
        })
    }

    pub fn is_state_var(&self, name: &str) -> bool {
        self.state_vars().any(|v| v.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolMember {
    StateVar(StateVarDecl),
    Function(SolFunction),
    Modifier(ModifierDecl),
    Struct(SolStructDecl),
    /// `using X for Y;` — raw; SafeMath use is detected lexically.
    Using(OpaqueNode),
    Opaque(OpaqueNode),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVarDecl {
    pub name: String,
    pub ty: SolType,
    pub visibility: SolVisibility,
    pub is_constant: bool,
    pub init: Option<SolExpr>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolVisibility {
    Public,
    External,
    Internal,
    Private,
    /// Pre-0.5 sources may omit visibility entirely.
    Default,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutability {
    Payable,
    View,
    Pure,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnKind {
    Function,
    Constructor,
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolFunction {
    pub name: String,
    pub kind: FnKind,
    pub visibility: SolVisibility,
    pub mutability: Mutability,
    pub modifiers: Vec<ModifierInvocation>,
    pub params: Vec<SolParam>,
    pub returns: Vec<SolParam>,
    /// `None` for bodiless declarations.
    pub body: Option<SolBlock>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifierInvocation {
    pub name: String,
    /// Raw argument list including parentheses, when present.
    pub args_raw: Option<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolParam {
    pub name: Option<String>,
    pub ty: SolType,
    pub loc: Option<DataLoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifierDecl {
    pub name: String,
    /// Raw parameter list including parentheses, when present.
    pub params_raw: Option<String>,
    pub body: SolBlock,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolStructDecl {
    pub name: String,
    pub fields: Vec<(String, SolType)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolType {
    /// `uint`, `uint256`, `address`, `bool`, `bytes32`, `string`, …
    Elementary(String),
    Mapping { key: Box<SolType>, value: Box<SolType> },
    Array { elem: Box<SolType>, len: Option<String> },
    /// Struct or contract name.
    Named(String),
}

impl SolType {
    pub fn is_dynamic_array(&self) -> bool {
        matches!(self, SolType::Array { len: None, .. })
    }

    /// Integer-typed per the elementary name (`uint*`/`int*`).
    pub fn is_integer(&self) -> bool {
        match self {
            SolType::Elementary(name) => name.starts_with("uint") || name.starts_with("int"),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataLoc {
    Memory,
    Storage,
    Calldata,
}

impl DataLoc {
    pub fn as_str(self) -> &'static str {
        match self {
            DataLoc::Memory => "memory",
            DataLoc::Storage => "storage",
            DataLoc::Calldata => "calldata",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolBlock {
    pub stmts: Vec<SolStmt>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolStmt {
    VarDecl {
        ty: SolType,
        loc: Option<DataLoc>,
        name: String,
        init: Option<SolExpr>,
        span: Span,
    },
    Expr {
        expr: SolExpr,
        span: Span,
    },
    If {
        cond: SolExpr,
        then_branch: Box<SolStmt>,
        else_branch: Option<Box<SolStmt>>,
        span: Span,
    },
    While {
        cond: SolExpr,
        body: Box<SolStmt>,
        span: Span,
    },
    For {
        init: Option<Box<SolStmt>>,
        cond: Option<SolExpr>,
        update: Option<SolExpr>,
        body: Box<SolStmt>,
        span: Span,
    },
    Block(SolBlock),
    Return {
        value: Option<SolExpr>,
        span: Span,
    },
    Emit {
        call: SolExpr,
        span: Span,
    },
    Opaque(OpaqueNode),
}

impl SolStmt {
    pub fn span(&self) -> Span {
        match self {
            SolStmt::VarDecl { span, .. }
            | SolStmt::Expr { span, .. }
            | SolStmt::If { span, .. }
            | SolStmt::While { span, .. }
            | SolStmt::For { span, .. }
            | SolStmt::Return { span, .. }
            | SolStmt::Emit { span, .. } => *span,
            SolStmt::Block(b) => b.span,
            SolStmt::Opaque(o) => o.span,
        }
    }
}

/// Special identifiers recognized as distinct atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    MsgSender,
    MsgValue,
    TxOrigin,
    BlockTimestamp,
    Now,
}

impl AtomKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AtomKind::MsgSender => "msg.sender",
            AtomKind::MsgValue => "msg.value",
            AtomKind::TxOrigin => "tx.origin",
            AtomKind::BlockTimestamp => "block.timestamp",
            AtomKind::Now => "now",
        }
    }

    pub fn is_timestamp(self) -> bool {
        matches!(self, AtomKind::BlockTimestamp | AtomKind::Now)
    }
}

/// Surface syntax of a normalized external value call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CallForm {
    /// `addr.call{value: v}(…)`
    CallValueOptions,
    /// `addr.call.value(v)(…)`
    CallValueLegacy,
    /// `addr.send(v)`
    Send,
    /// `addr.transfer(v)`
    Transfer,
    /// `addr.call(…)` with no explicit value
    BareCall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolBinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
    Shl,
    Shr,
    BitAnd,
    BitOr,
    BitXor,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
}

impl SolBinOp {
    pub fn as_str(self) -> &'static str {
        match self {
            SolBinOp::Add => "+",
            SolBinOp::Sub => "-",
            SolBinOp::Mul => "*",
            SolBinOp::Div => "/",
            SolBinOp::Mod => "%",
            SolBinOp::Pow => "**",
            SolBinOp::Shl => "<<",
            SolBinOp::Shr => ">>",
            SolBinOp::BitAnd => "&",
            SolBinOp::BitOr => "|",
            SolBinOp::BitXor => "^",
            SolBinOp::Eq => "==",
            SolBinOp::Ne => "!=",
            SolBinOp::Lt => "<",
            SolBinOp::Gt => ">",
            SolBinOp::Le => "<=",
            SolBinOp::Ge => ">=",
            SolBinOp::And => "&&",
            SolBinOp::Or => "||",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            SolBinOp::Eq | SolBinOp::Ne | SolBinOp::Lt | SolBinOp::Gt | SolBinOp::Le | SolBinOp::Ge
        )
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, SolBinOp::Add | SolBinOp::Sub | SolBinOp::Mul | SolBinOp::Div | SolBinOp::Mod)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssignOp {
    Assign,
    AddAssign,
    SubAssign,
    MulAssign,
    DivAssign,
}

impl AssignOp {
    pub fn as_str(self) -> &'static str {
        match self {
            AssignOp::Assign => "=",
            AssignOp::AddAssign => "+=",
            AssignOp::SubAssign => "-=",
            AssignOp::MulAssign => "*=",
            AssignOp::DivAssign => "/=",
        }
    }

    /// Arithmetic performed by a compound assignment.
    pub fn arithmetic(self) -> Option<SolBinOp> {
        match self {
            AssignOp::AddAssign => Some(SolBinOp::Add),
            AssignOp::SubAssign => Some(SolBinOp::Sub),
            AssignOp::MulAssign => Some(SolBinOp::Mul),
            AssignOp::DivAssign => Some(SolBinOp::Div),
            AssignOp::Assign => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolExpr {
    pub id: NodeId,
    pub kind: SolExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolExprKind {
    NumberLit { text: String, unit: Option<String> },
    StringLit(String),
    BoolLit(bool),
    Ident(String),
    Atom(AtomKind),
    Member { base: Box<SolExpr>, member: String },
    Index { base: Box<SolExpr>, index: Box<SolExpr> },
    Call { callee: Box<SolExpr>, args: Vec<SolExpr> },
    /// Normalized external value call; detectors match this kind
    /// regardless of the surface form.
    ExternalCall {
        base: Box<SolExpr>,
        form: CallForm,
        value: Option<Box<SolExpr>>,
        gas: Option<Box<SolExpr>>,
        args: Vec<SolExpr>,
    },
    New { ty: SolType },
    Binary { op: SolBinOp, lhs: Box<SolExpr>, rhs: Box<SolExpr> },
    Unary { op: String, prefix: bool, expr: Box<SolExpr> },
    Assign { op: AssignOp, lhs: Box<SolExpr>, rhs: Box<SolExpr> },
    Ternary { cond: Box<SolExpr>, then_expr: Box<SolExpr>, else_expr: Box<SolExpr> },
    Paren(Box<SolExpr>),
}

impl SolExpr {
    pub fn unwrap_parens(&self) -> &SolExpr {
        match &self.kind {
            SolExprKind::Paren(inner) => inner.unwrap_parens(),
            _ => self,
        }
    }

    /// Leftmost identifier of a member/index chain; the name resolution
    /// root for storage classification.
    pub fn root_ident(&self) -> Option<&str> {
        match &self.kind {
            SolExprKind::Ident(name) => Some(name),
            SolExprKind::Member { base, .. } | SolExprKind::Index { base, .. } => base.root_ident(),
            SolExprKind::Paren(inner) => inner.root_ident(),
            _ => None,
        }
    }

    pub fn is_call_to(&self, name: &str) -> Option<&[SolExpr]> {
        match &self.kind {
            SolExprKind::Call { callee, args } => match &callee.kind {
                SolExprKind::Ident(id) if id == name => Some(args),
                _ => None,
            },
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Traversals
// ---------------------------------------------------------------------------

/// Pre-order walk over an expression tree.
pub fn walk_sol_expr(expr: &SolExpr, f: &mut impl FnMut(&SolExpr)) {
    f(expr);
    match &expr.kind {
        SolExprKind::Member { base, .. } => walk_sol_expr(base, f),
        SolExprKind::Index { base, index } => {
            walk_sol_expr(base, f);
            walk_sol_expr(index, f);
        }
        SolExprKind::Call { callee, args } => {
            walk_sol_expr(callee, f);
            for a in args {
                walk_sol_expr(a, f);
            }
        }
        SolExprKind::ExternalCall { base, value, gas, args, .. } => {
            walk_sol_expr(base, f);
            if let Some(v) = value {
                walk_sol_expr(v, f);
            }
            if let Some(g) = gas {
                walk_sol_expr(g, f);
            }
            for a in args {
                walk_sol_expr(a, f);
            }
        }
        SolExprKind::Binary { lhs, rhs, .. } => {
            walk_sol_expr(lhs, f);
            walk_sol_expr(rhs, f);
        }
        SolExprKind::Unary { expr: inner, .. } | SolExprKind::Paren(inner) => {
            walk_sol_expr(inner, f)
        }
        SolExprKind::Assign { lhs, rhs, .. } => {
            walk_sol_expr(lhs, f);
            walk_sol_expr(rhs, f);
        }
        SolExprKind::Ternary { cond, then_expr, else_expr } => {
            walk_sol_expr(cond, f);
            walk_sol_expr(then_expr, f);
            walk_sol_expr(else_expr, f);
        }
        _ => {}
    }
}

/// Pre-order walk over statements, recursing into nested blocks and
/// control-flow bodies in source order.
pub fn walk_sol_stmts(stmts: &[SolStmt], f: &mut impl FnMut(&SolStmt)) {
    for stmt in stmts {
        f(stmt);
        match stmt {
            SolStmt::If { then_branch, else_branch, .. } => {
                walk_sol_stmts(std::slice::from_ref(then_branch), f);
                if let Some(e) = else_branch {
                    walk_sol_stmts(std::slice::from_ref(e), f);
                }
            }
            SolStmt::While { body, .. } | SolStmt::For { body, .. } => {
                walk_sol_stmts(std::slice::from_ref(body), f);
            }
            SolStmt::Block(b) => walk_sol_stmts(&b.stmts, f),
            _ => {}
        }
    }
}

/// Every expression reachable from a statement, pre-order.
pub fn walk_stmt_exprs(stmt: &SolStmt, f: &mut impl FnMut(&SolExpr)) {
    match stmt {
        SolStmt::VarDecl { init: Some(e), .. } => walk_sol_expr(e, f),
        SolStmt::VarDecl { .. } => {}
        SolStmt::Expr { expr, .. } => walk_sol_expr(expr, f),
        SolStmt::If { cond, then_branch, else_branch, .. } => {
            walk_sol_expr(cond, f);
            walk_stmt_exprs(then_branch, f);
            if let Some(e) = else_branch {
                walk_stmt_exprs(e, f);
            }
        }
        SolStmt::While { cond, body, .. } => {
            walk_sol_expr(cond, f);
            walk_stmt_exprs(body, f);
        }
        SolStmt::For { init, cond, update, body, .. } => {
            if let Some(i) = init {
                walk_stmt_exprs(i, f);
            }
            if let Some(c) = cond {
                walk_sol_expr(c, f);
            }
            if let Some(u) = update {
                walk_sol_expr(u, f);
            }
            walk_stmt_exprs(body, f);
        }
        SolStmt::Block(b) => {
            for s in &b.stmts {
                walk_stmt_exprs(s, f);
            }
        }
        SolStmt::Return { value: Some(e), .. } => walk_sol_expr(e, f),
        SolStmt::Return { .. } => {}
        SolStmt::Emit { call, .. } => walk_sol_expr(call, f),
        SolStmt::Opaque(_) => {}
    }
}

// ---------------------------------------------------------------------------
// Structural normalization for round-trip tests
// ---------------------------------------------------------------------------

pub fn normalize_sol_file(file: &SolFile) -> SolFile {
    let mut f = file.clone();
    f.span = Span::default();
    for item in &mut f.items {
        match item {
            SolTopItem::Pragma(o) | SolTopItem::Opaque(o) => o.span = Span::default(),
            SolTopItem::Contract(c) => normalize_contract(c),
        }
    }
    f
}

fn normalize_contract(c: &mut SolContract) {
    c.span = Span::default();
    for member in &mut c.members {
        match member {
            SolMember::StateVar(v) => {
                v.span = Span::default();
                if let Some(e) = &mut v.init {
                    normalize_expr(e);
                }
            }
            SolMember::Function(f) => {
                f.span = Span::default();
                for m in &mut f.modifiers {
                    m.span = Span::default();
                }
                if let Some(b) = &mut f.body {
                    normalize_block(b);
                }
            }
            SolMember::Modifier(m) => {
                m.span = Span::default();
                normalize_block(&mut m.body);
            }
            SolMember::Struct(s) => s.span = Span::default(),
            SolMember::Using(o) | SolMember::Opaque(o) => o.span = Span::default(),
        }
    }
}

fn normalize_block(b: &mut SolBlock) {
    b.span = Span::default();
    for stmt in &mut b.stmts {
        normalize_stmt(stmt);
    }
}

fn normalize_stmt(stmt: &mut SolStmt) {
    match stmt {
        SolStmt::VarDecl { init, span, .. } => {
            *span = Span::default();
            if let Some(e) = init {
                normalize_expr(e);
            }
        }
        SolStmt::Expr { expr, span } => {
            *span = Span::default();
            normalize_expr(expr);
        }
        SolStmt::If { cond, then_branch, else_branch, span } => {
            *span = Span::default();
            normalize_expr(cond);
            normalize_stmt(then_branch);
            if let Some(e) = else_branch {
                normalize_stmt(e);
            }
        }
        SolStmt::While { cond, body, span } => {
            *span = Span::default();
            normalize_expr(cond);
            normalize_stmt(body);
        }
        SolStmt::For { init, cond, update, body, span } => {
            *span = Span::default();
            if let Some(i) = init {
                normalize_stmt(i);
            }
            if let Some(c) = cond {
                normalize_expr(c);
            }
            if let Some(u) = update {
                normalize_expr(u);
            }
            normalize_stmt(body);
        }
        SolStmt::Block(b) => normalize_block(b),
        SolStmt::Return { value, span } => {
            *span = Span::default();
            if let Some(e) = value {
                normalize_expr(e);
            }
        }
        SolStmt::Emit { call, span } => {
            *span = Span::default();
            normalize_expr(call);
        }
        SolStmt::Opaque(o) => o.span = Span::default(),
    }
}

fn normalize_expr(expr: &mut SolExpr) {
    expr.id = NodeId(0);
    expr.span = Span::default();
    match &mut expr.kind {
        SolExprKind::Member { base, .. } => normalize_expr(base),
        SolExprKind::Index { base, index } => {
            normalize_expr(base);
            normalize_expr(index);
        }
        SolExprKind::Call { callee, args } => {
            normalize_expr(callee);
            args.iter_mut().for_each(normalize_expr);
        }
        SolExprKind::ExternalCall { base, value, gas, args, .. } => {
            normalize_expr(base);
            if let Some(v) = value {
                normalize_expr(v);
            }
            if let Some(g) = gas {
                normalize_expr(g);
            }
            args.iter_mut().for_each(normalize_expr);
        }
        SolExprKind::Binary { lhs, rhs, .. } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
        SolExprKind::Unary { expr: inner, .. } | SolExprKind::Paren(inner) => normalize_expr(inner),
        SolExprKind::Assign { lhs, rhs, .. } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
        SolExprKind::Ternary { cond, then_expr, else_expr } => {
            normalize_expr(cond);
            normalize_expr(then_expr);
            normalize_expr(else_expr);
        }
        _ => {}
    }
}
