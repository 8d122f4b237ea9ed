//! Recursive-descent parser for the Move subset.
//!
//! Item signatures parse strictly and report hard diagnostics. Inside
//! function bodies, any statement that fails the subset grammar but is
//! balanced is captured as an opaque statement so the printer can
//! reproduce it byte-exact. Generic items, `spec` blocks, and `native`
//! declarations are captured as opaque items.

use crate::move_lang::ast::*;
use crate::move_lang::lexer::{tokenize_move, IntWidth, LexError, Token, TokenKind};
use crate::source::Span;
use thiserror::Error;

const MAX_DIAGNOSTICS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

impl std::fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "line {}, col {}: expected {}, found {}",
            self.span.line, self.span.col, self.expected, self.found
        )
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{}{}", .0.first().map(|d| d.to_string()).unwrap_or_default(),
            if .0.len() > 1 { format!(" (+{} more)", .0.len() - 1) } else { String::new() })]
    Syntax(Vec<ParseDiagnostic>),
}

impl ParseError {
    pub fn diagnostics(&self) -> Vec<ParseDiagnostic> {
        match self {
            ParseError::Lex(e) => vec![ParseDiagnostic {
                span: e.span,
                expected: "valid token".to_string(),
                found: e.message.clone(),
            }],
            ParseError::Syntax(d) => d.clone(),
        }
    }
}

/// Parse every `module` block in `text`.
pub fn parse_move(text: &str) -> Result<Vec<MoveModule>, ParseError> {
    let tokens = tokenize_move(text)?;
    let mut parser = Parser {
        text,
        tokens,
        pos: 0,
        diagnostics: Vec::new(),
        next_id: 1,
    };
    let modules = parser.file();
    if parser.diagnostics.is_empty() {
        Ok(modules)
    } else {
        parser.diagnostics.truncate(MAX_DIAGNOSTICS);
        Err(ParseError::Syntax(parser.diagnostics))
    }
}

/// Soft failure: the construct is outside the subset or malformed; the
/// caller may recover by capturing an opaque region.
struct Soft(ParseDiagnostic);

type Res<T> = Result<T, Soft>;

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    diagnostics: Vec<ParseDiagnostic>,
    next_id: u32,
}

impl<'a> Parser<'a> {
    // -- token utilities ----------------------------------------------------

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn peek_text(&self) -> &str {
        self.peek().map(|t| t.text.as_str()).unwrap_or("")
    }

    fn at(&self, text: &str) -> bool {
        self.peek_text() == text
    }

    fn at_kind(&self, kind: TokenKind) -> bool {
        self.peek().map(|t| t.kind == kind).unwrap_or(false)
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        self.pos += 1;
        tok
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eof_span(&self) -> Span {
        let end = self.text.len();
        let (line, col) = crate::source::line_col(self.text, end);
        Span::new(end, end, line, col)
    }

    fn found_desc(&self) -> (Span, String) {
        match self.peek() {
            Some(t) => (t.span, format!("`{}`", t.text)),
            None => (self.eof_span(), "end of input".to_string()),
        }
    }

    fn soft(&self, expected: impl Into<String>) -> Soft {
        let (span, found) = self.found_desc();
        Soft(ParseDiagnostic { span, expected: expected.into(), found })
    }

    fn expect(&mut self, text: &str, expected: &str) -> Res<Token> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.soft(expected))
        }
    }

    fn expect_ident(&mut self, expected: &str) -> Res<Token> {
        if self.at_kind(TokenKind::Ident) {
            Ok(self.bump())
        } else {
            Err(self.soft(expected))
        }
    }

    fn record(&mut self, soft: Soft) {
        if self.diagnostics.len() < MAX_DIAGNOSTICS {
            self.diagnostics.push(soft.0);
        }
    }

    fn node_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn expr(&mut self, kind: MoveExprKind, span: Span) -> MoveExpr {
        MoveExpr { id: self.node_id(), kind, span }
    }

    // -- file / module ------------------------------------------------------

    fn file(&mut self) -> Vec<MoveModule> {
        let mut modules = Vec::new();
        while self.peek().is_some() {
            if self.at("module") {
                match self.module() {
                    Ok(m) => modules.push(m),
                    Err(soft) => {
                        self.record(soft);
                        self.sync_to_module();
                    }
                }
            } else {
                let soft = self.soft("`module`");
                self.record(soft);
                self.sync_to_module();
            }
            if self.diagnostics.len() >= MAX_DIAGNOSTICS {
                break;
            }
        }
        modules
    }

    fn sync_to_module(&mut self) {
        if self.at("module") {
            self.pos += 1;
        }
        while let Some(t) = self.peek() {
            if t.text == "module" {
                return;
            }
            self.pos += 1;
        }
    }

    fn module(&mut self) -> Res<MoveModule> {
        let kw = self.expect("module", "`module`")?;
        let addr = match self.peek() {
            Some(t) if t.kind == TokenKind::Ident || t.kind == TokenKind::Int => self.bump().text,
            _ => return Err(self.soft("module address")),
        };
        self.expect("::", "`::`")?;
        let name = self.expect_ident("module name")?.text;
        self.expect("{", "`{`")?;
        let mut items = Vec::new();
        loop {
            if self.at("}") {
                let close = self.bump();
                return Ok(MoveModule {
                    address: addr,
                    name,
                    items,
                    span: kw.span.join(close.span),
                });
            }
            if self.peek().is_none() {
                return Err(self.soft("`}` or module item"));
            }
            match self.item() {
                Ok(item) => items.push(item),
                Err(soft) => {
                    self.record(soft);
                    self.sync_to_item();
                    if self.diagnostics.len() >= MAX_DIAGNOSTICS {
                        return Err(self.soft("`}`"));
                    }
                }
            }
        }
    }

    fn sync_to_item(&mut self) {
        const ITEM_STARTS: &[&str] =
            &["fun", "public", "entry", "const", "struct", "use", "friend", "spec", "native", "}"];
        while let Some(t) = self.peek() {
            if ITEM_STARTS.contains(&t.text.as_str()) {
                return;
            }
            self.pos += 1;
        }
    }

    // -- items --------------------------------------------------------------

    fn item(&mut self) -> Res<ModuleItem> {
        match self.peek_text() {
            "use" => self.use_decl().map(ModuleItem::Use),
            "friend" => self.friend_decl().map(ModuleItem::Friend),
            "const" => self.const_decl().map(ModuleItem::Const),
            "struct" => self.struct_decl(),
            "spec" | "native" | "#" => self.opaque_item().map(ModuleItem::Opaque),
            "fun" | "public" | "entry" => self.function_item(),
            _ => Err(self.soft("module item")),
        }
    }

    /// Raw-text declaration terminated by `;` (`use`/`friend` paths).
    fn raw_path_decl(&mut self, kw: &str) -> Res<(String, Span)> {
        let start = self.expect(kw, kw)?;
        let path_start = self.peek().map(|t| t.span.start_byte);
        let mut path_end = start.span.end_byte;
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t.text.as_str() {
                ";" if depth == 0 => {
                    let semi = self.bump();
                    let path = match path_start {
                        Some(s) if path_end > s => self.text[s..path_end].to_string(),
                        _ => String::new(),
                    };
                    return Ok((path, start.span.join(semi.span)));
                }
                "{" => {
                    depth += 1;
                    path_end = self.bump().span.end_byte;
                }
                "}" => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    path_end = self.bump().span.end_byte;
                }
                _ => path_end = self.bump().span.end_byte,
            }
        }
        Err(self.soft("`;`"))
    }

    fn use_decl(&mut self) -> Res<UseDecl> {
        let (path, span) = self.raw_path_decl("use")?;
        Ok(UseDecl { path, span })
    }

    fn friend_decl(&mut self) -> Res<FriendDecl> {
        let (path, span) = self.raw_path_decl("friend")?;
        Ok(FriendDecl { path, span })
    }

    fn const_decl(&mut self) -> Res<ConstDecl> {
        let kw = self.expect("const", "`const`")?;
        let name = self.expect_ident("constant name")?.text;
        self.expect(":", "`:`")?;
        let ty = self.type_ref()?;
        self.expect("=", "`=`")?;
        let value = self.parse_expr()?;
        let semi = self.expect(";", "`;`")?;
        Ok(ConstDecl { name, ty, value, span: kw.span.join(semi.span) })
    }

    fn struct_decl(&mut self) -> Res<ModuleItem> {
        // Generic record declarations fall outside the subset.
        if self.peek_at(2).map(|t| t.text == "<").unwrap_or(false) {
            return self.opaque_item().map(ModuleItem::Opaque);
        }
        let kw = self.expect("struct", "`struct`")?;
        let name = self.expect_ident("record name")?.text;
        let mut abilities = Vec::new();
        if self.eat("has") {
            loop {
                abilities.push(self.expect_ident("ability name")?.text);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("{", "`{`")?;
        let mut fields = Vec::new();
        while !self.at("}") {
            let fname = self.expect_ident("field name or `}`")?.text;
            self.expect(":", "`:`")?;
            let fty = self.type_ref()?;
            fields.push((fname, fty));
            if !self.eat(",") {
                break;
            }
        }
        let close = self.expect("}", "`}`")?;
        Ok(ModuleItem::Record(RecordDecl {
            name,
            abilities,
            fields,
            span: kw.span.join(close.span),
        }))
    }

    fn function_item(&mut self) -> Res<ModuleItem> {
        let start_pos = self.pos;
        let start_span = self.peek().map(|t| t.span).unwrap_or_else(|| self.eof_span());
        let mut visibility = Visibility::Private;
        if self.eat("public") {
            visibility = Visibility::Public;
            if self.eat("(") {
                let kind = self.bump();
                self.expect(")", "`)`")?;
                if kind.text == "friend" {
                    visibility = Visibility::PublicFriend;
                }
            }
        }
        if self.eat("entry") {
            visibility = Visibility::Entry;
        }
        if self.at("native") {
            self.pos = start_pos;
            return self.opaque_item().map(ModuleItem::Opaque);
        }
        self.expect("fun", "`fun`")?;
        if self.peek_at(1).map(|t| t.text == "<").unwrap_or(false) {
            // generic function: capture the whole item opaquely
            self.pos = start_pos;
            return self.opaque_item().map(ModuleItem::Opaque);
        }
        let name = self.expect_ident("function name")?.text;
        self.expect("(", "`(`")?;
        let mut params = Vec::new();
        while !self.at(")") {
            let pname = self.expect_ident("parameter or `)`")?.text;
            self.expect(":", "`:`")?;
            let pty = self.type_ref()?;
            params.push((pname, pty));
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")", "parameter or `)`")?;
        let mut return_types = Vec::new();
        if self.eat(":") {
            if self.eat("(") {
                while !self.at(")") {
                    return_types.push(self.type_ref()?);
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect(")", "`)`")?;
            } else {
                return_types.push(self.type_ref()?);
            }
        }
        let mut acquires = Vec::new();
        if self.eat("acquires") {
            loop {
                acquires.push(self.expect_ident("record name")?.text);
                if !self.eat(",") {
                    break;
                }
            }
        }
        let body = self.block()?;
        let span = start_span.join(body.span);
        Ok(ModuleItem::Function(MoveFunction {
            name,
            visibility,
            params,
            return_types,
            acquires,
            body,
            span,
        }))
    }

    /// Capture a balanced item-level region: through a matching `}` (with
    /// optional trailing `;`) or a top-level `;`, whichever ends it.
    fn opaque_item(&mut self) -> Res<OpaqueNode> {
        let start = match self.peek() {
            Some(t) => t.span,
            None => return Err(self.soft("module item")),
        };
        // Attributes are their own opaque item: `#[...]`.
        if self.at("#") {
            let hash = self.bump();
            self.expect("[", "`[`")?;
            let mut depth = 1usize;
            let mut end = hash.span;
            while depth > 0 {
                match self.peek() {
                    Some(t) if t.text == "[" => {
                        depth += 1;
                        end = self.bump().span;
                    }
                    Some(t) if t.text == "]" => {
                        depth -= 1;
                        end = self.bump().span;
                    }
                    Some(_) => end = self.bump().span,
                    None => return Err(self.soft("`]`")),
                }
            }
            let span = start.join(end);
            return Ok(OpaqueNode { raw: span.slice(self.text).to_string(), span });
        }
        let mut depth = 0usize;
        let mut end = start;
        loop {
            let Some(t) = self.peek() else {
                return Err(self.soft("balanced item"));
            };
            let text = t.text.clone();
            match text.as_str() {
                "{" | "(" | "[" => {
                    depth += 1;
                    end = self.bump().span;
                }
                "}" | ")" | "]" => {
                    if depth == 0 {
                        break; // module's closing brace
                    }
                    depth -= 1;
                    end = self.bump().span;
                    if depth == 0 && text == "}" {
                        break;
                    }
                }
                ";" if depth == 0 => {
                    end = self.bump().span;
                    break;
                }
                _ => end = self.bump().span,
            }
        }
        let span = start.join(end);
        Ok(OpaqueNode { raw: span.slice(self.text).to_string(), span })
    }

    // -- types --------------------------------------------------------------

    fn type_ref(&mut self) -> Res<MoveType> {
        if self.at("&") {
            self.bump();
            let is_mut = self.eat("mut");
            let inner = self.type_ref()?;
            return Ok(MoveType::Ref { is_mut, inner: Box::new(inner) });
        }
        let first = self.expect_ident("type name")?.text;
        if let Some(w) = IntWidth::from_name(&first) {
            return Ok(MoveType::Int(w));
        }
        match first.as_str() {
            "bool" => return Ok(MoveType::Bool),
            "address" => return Ok(MoveType::Address),
            "signer" => return Ok(MoveType::Signer),
            _ => {}
        }
        let mut path = vec![first];
        while self.at("::") {
            self.bump();
            path.push(self.expect_ident("type name")?.text);
        }
        let mut args = Vec::new();
        if self.eat("<") {
            loop {
                args.push(self.type_ref()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(">", "`>`")?;
        }
        Ok(MoveType::Named { path, args })
    }

    // -- statements ---------------------------------------------------------

    fn block(&mut self) -> Res<Block> {
        let open = self.expect("{", "`{`")?;
        let mut stmts = Vec::new();
        let mut tail = None;
        loop {
            if self.at("}") {
                let close = self.bump();
                return Ok(Block { stmts, tail, span: open.span.join(close.span) });
            }
            if self.peek().is_none() {
                return Err(self.soft("`}` or statement"));
            }
            let stmt_start = self.pos;
            match self.statement() {
                Ok(StmtOrTail::Stmt(s)) => stmts.push(s),
                Ok(StmtOrTail::Tail(e)) => {
                    tail = Some(Box::new(e));
                    let close = self.expect("}", "`}`")?;
                    return Ok(Block { stmts, tail, span: open.span.join(close.span) });
                }
                Err(_) => {
                    // Outside the subset: capture the statement opaquely.
                    self.pos = stmt_start;
                    let op = self.opaque_stmt()?;
                    stmts.push(MoveStmt::Opaque(op));
                }
            }
        }
    }

    /// Balanced capture from the current token through `;` at depth 0, or
    /// up to (not including) the enclosing `}`.
    fn opaque_stmt(&mut self) -> Res<OpaqueNode> {
        let start = match self.peek() {
            Some(t) => t.span,
            None => return Err(self.soft("statement")),
        };
        let mut depth = 0usize;
        let mut end = start;
        loop {
            let Some(t) = self.peek() else {
                return Err(self.soft("`;` or `}`"));
            };
            match t.text.as_str() {
                "{" | "(" | "[" => {
                    depth += 1;
                    end = self.bump().span;
                }
                "}" | ")" | "]" => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    end = self.bump().span;
                }
                ";" if depth == 0 => {
                    end = self.bump().span;
                    break;
                }
                _ => end = self.bump().span,
            }
        }
        let span = start.join(end);
        if span.is_empty() {
            return Err(self.soft("statement"));
        }
        Ok(OpaqueNode { raw: span.slice(self.text).to_string(), span })
    }

    fn statement(&mut self) -> Res<StmtOrTail> {
        if self.at("let") {
            return self.let_stmt().map(StmtOrTail::Stmt);
        }
        let expr = self.parse_expr()?;
        if self.at(";") {
            let semi = self.bump();
            let span = expr.span.join(semi.span);
            return Ok(StmtOrTail::Stmt(MoveStmt::Expr { expr, has_semi: true, span }));
        }
        if self.at("}") {
            return Ok(StmtOrTail::Tail(expr));
        }
        if is_block_like(&expr) {
            let span = expr.span;
            return Ok(StmtOrTail::Stmt(MoveStmt::Expr { expr, has_semi: false, span }));
        }
        Err(self.soft("`;`"))
    }

    fn let_stmt(&mut self) -> Res<MoveStmt> {
        let kw = self.expect("let", "`let`")?;
        if self.at("(") {
            // tuple patterns are outside the subset
            return Err(self.soft("binding name"));
        }
        let name = if self.at("mut") {
            self.bump();
            self.expect_ident("binding name")?.text
        } else {
            self.expect_ident("binding name")?.text
        };
        let ty = if self.eat(":") { Some(self.type_ref()?) } else { None };
        let init = if self.eat("=") { Some(self.parse_expr()?) } else { None };
        let semi = self.expect(";", "`;`")?;
        Ok(MoveStmt::Let { name, ty, init, span: kw.span.join(semi.span) })
    }

    // -- expressions ----------------------------------------------------------

    fn parse_expr(&mut self) -> Res<MoveExpr> {
        let lhs = self.cast_level()?;
        if self.at("=") {
            self.bump();
            let rhs = self.parse_expr()?;
            let span = lhs.span.join(rhs.span);
            return Ok(self.expr(
                MoveExprKind::Assign { lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
            ));
        }
        Ok(lhs)
    }

    fn cast_level(&mut self) -> Res<MoveExpr> {
        let mut e = self.binary_level(0)?;
        while self.at("as") {
            self.bump();
            let target = self.type_ref()?;
            let end = self.prev_span();
            let span = e.span.join(end);
            e = self.expr(MoveExprKind::Cast { expr: Box::new(e), target }, span);
        }
        Ok(e)
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos - 1].span
    }

    fn binary_level(&mut self, level: usize) -> Res<MoveExpr> {
        const LEVELS: &[&[(&str, BinOp)]] = &[
            &[("||", BinOp::Or)],
            &[("&&", BinOp::And)],
            &[("==", BinOp::Eq), ("!=", BinOp::Ne)],
            &[("<", BinOp::Lt), (">", BinOp::Gt), ("<=", BinOp::Le), (">=", BinOp::Ge)],
            &[("<<", BinOp::Shl), (">>", BinOp::Shr)],
            &[("+", BinOp::Add), ("-", BinOp::Sub)],
            &[("*", BinOp::Mul), ("/", BinOp::Div), ("%", BinOp::Mod)],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary_level(level + 1)?;
        loop {
            let op = LEVELS[level]
                .iter()
                .find(|(text, _)| self.at(text))
                .map(|(_, op)| *op);
            let Some(op) = op else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.binary_level(level + 1)?;
            let span = lhs.span.join(rhs.span);
            lhs = self.expr(
                MoveExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
            );
        }
    }

    fn unary(&mut self) -> Res<MoveExpr> {
        let (op, kw_span) = match self.peek_text() {
            "!" => (Some(UnOp::Not), self.peek().unwrap().span),
            "&" => (
                Some(if self.peek_at(1).map(|t| t.text == "mut").unwrap_or(false) {
                    UnOp::BorrowMut
                } else {
                    UnOp::Borrow
                }),
                self.peek().unwrap().span,
            ),
            "*" => (Some(UnOp::Deref), self.peek().unwrap().span),
            _ => (None, Span::default()),
        };
        if let Some(op) = op {
            self.bump();
            if op == UnOp::BorrowMut {
                self.bump(); // mut
            }
            let inner = self.unary()?;
            let span = kw_span.join(inner.span);
            return Ok(self.expr(MoveExprKind::Unary { op, expr: Box::new(inner) }, span));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Res<MoveExpr> {
        let mut e = self.primary()?;
        while self.at(".") {
            self.bump();
            let field = self.expect_ident("field name")?;
            let span = e.span.join(field.span);
            e = self.expr(
                MoveExprKind::FieldAccess { base: Box::new(e), field: field.text },
                span,
            );
        }
        Ok(e)
    }

    fn primary(&mut self) -> Res<MoveExpr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.soft("expression"));
        };
        match tok.kind {
            TokenKind::Int => {
                self.bump();
                Ok(self.expr(
                    MoveExprKind::IntLit { text: tok.text, width: tok.width },
                    tok.span,
                ))
            }
            TokenKind::Bool => {
                self.bump();
                Ok(self.expr(MoveExprKind::BoolLit(tok.text == "true"), tok.span))
            }
            TokenKind::ByteString => {
                self.bump();
                Ok(self.expr(MoveExprKind::ByteStringLit(tok.text), tok.span))
            }
            TokenKind::Address => {
                self.bump();
                Ok(self.expr(MoveExprKind::AddressLit(tok.text), tok.span))
            }
            TokenKind::Ident => self.path_expr(),
            TokenKind::Keyword => match tok.text.as_str() {
                "if" => self.if_expr(),
                "while" => self.while_expr(),
                "loop" => {
                    let kw = self.bump();
                    let body = self.block()?;
                    let span = kw.span.join(body.span);
                    let body_span = body.span;
                    let body_expr = self.expr(MoveExprKind::Block(body), body_span);
                    Ok(self.expr(MoveExprKind::Loop { body: Box::new(body_expr) }, span))
                }
                "abort" => {
                    let kw = self.bump();
                    let code = self.parse_expr()?;
                    let span = kw.span.join(code.span);
                    Ok(self.expr(MoveExprKind::Abort(Box::new(code)), span))
                }
                "return" => {
                    let kw = self.bump();
                    if self.at(";") || self.at("}") {
                        Ok(self.expr(MoveExprKind::Return(None), kw.span))
                    } else {
                        let value = self.parse_expr()?;
                        let span = kw.span.join(value.span);
                        Ok(self.expr(MoveExprKind::Return(Some(Box::new(value))), span))
                    }
                }
                "break" => {
                    let kw = self.bump();
                    Ok(self.expr(MoveExprKind::Break, kw.span))
                }
                "continue" => {
                    let kw = self.bump();
                    Ok(self.expr(MoveExprKind::Continue, kw.span))
                }
                _ => Err(self.soft("expression")),
            },
            TokenKind::Delim => match tok.text.as_str() {
                "(" => {
                    let open = self.bump();
                    let inner = self.parse_expr()?;
                    let close = self.expect(")", "`)`")?;
                    let span = open.span.join(close.span);
                    Ok(self.expr(MoveExprKind::Paren(Box::new(inner)), span))
                }
                "{" => {
                    let block = self.block()?;
                    let span = block.span;
                    Ok(self.expr(MoveExprKind::Block(block), span))
                }
                _ => Err(self.soft("expression")),
            },
            TokenKind::Op => Err(self.soft("expression")),
        }
    }

    fn path_expr(&mut self) -> Res<MoveExpr> {
        let first = self.bump();
        let mut path = vec![first.text];
        let mut span = first.span;
        while self.at("::") {
            self.bump();
            let seg = self.expect_ident("path segment")?;
            span = span.join(seg.span);
            path.push(seg.text);
        }
        // Generic calls are outside the subset; soft-fail so the caller
        // captures the statement opaquely.
        if self.at("<") && self.looks_like_generic_call() {
            return Err(self.soft("non-generic call"));
        }
        let is_macro = self.at("!") && self.peek_at(1).map(|t| t.text == "(").unwrap_or(false);
        if is_macro {
            self.bump(); // !
        }
        if self.at("(") {
            self.bump();
            let mut args = Vec::new();
            while !self.at(")") {
                args.push(self.parse_expr()?);
                if !self.eat(",") {
                    break;
                }
            }
            let close = self.expect(")", "`)` or `,`")?;
            let span = span.join(close.span);
            return Ok(self.expr(MoveExprKind::Call { path, is_macro, args }, span));
        }
        if is_macro {
            return Err(self.soft("`(`"));
        }
        Ok(self.expr(MoveExprKind::Name { path }, span))
    }

    /// Lookahead for `<` type-args `>` `(`: identifiers, `::`, commas, and
    /// nested angle brackets only.
    fn looks_like_generic_call(&self) -> bool {
        let mut i = self.pos + 1;
        let mut depth = 1usize;
        while let Some(t) = self.tokens.get(i) {
            match t.text.as_str() {
                "<" => depth += 1,
                ">" => {
                    depth -= 1;
                    if depth == 0 {
                        return self.tokens.get(i + 1).map(|t| t.text == "(").unwrap_or(false);
                    }
                }
                "::" | "," => {}
                "&" | "mut" => {}
                _ if t.kind == TokenKind::Ident => {}
                _ => return false,
            }
            i += 1;
        }
        false
    }

    fn if_expr(&mut self) -> Res<MoveExpr> {
        let kw = self.expect("if", "`if`")?;
        self.expect("(", "`(`")?;
        let cond = self.parse_expr()?;
        self.expect(")", "`)`")?;
        let then_branch = self.parse_expr()?;
        let mut span = kw.span.join(then_branch.span);
        let else_branch = if self.eat("else") {
            let e = self.parse_expr()?;
            span = span.join(e.span);
            Some(Box::new(e))
        } else {
            None
        };
        Ok(self.expr(
            MoveExprKind::If {
                cond: Box::new(cond),
                then_branch: Box::new(then_branch),
                else_branch,
            },
            span,
        ))
    }

    fn while_expr(&mut self) -> Res<MoveExpr> {
        let kw = self.expect("while", "`while`")?;
        self.expect("(", "`(`")?;
        let cond = self.parse_expr()?;
        self.expect(")", "`)`")?;
        let body = self.parse_expr()?;
        let span = kw.span.join(body.span);
        Ok(self.expr(
            MoveExprKind::While { cond: Box::new(cond), body: Box::new(body) },
            span,
        ))
    }
}

enum StmtOrTail {
    Stmt(MoveStmt),
    Tail(MoveExpr),
}

fn is_block_like(expr: &MoveExpr) -> bool {
    matches!(
        expr.kind,
        MoveExprKind::If { .. }
            | MoveExprKind::While { .. }
            | MoveExprKind::Loop { .. }
            | MoveExprKind::Block(_)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_module() {
        let mods = parse_move("module 0x1::m { }").unwrap();
        assert_eq!(mods.len(), 1);
        assert_eq!(mods[0].address, "0x1");
        assert_eq!(mods[0].name, "m");
        assert_eq!(mods[0].functions().count(), 0);
        assert_eq!(mods[0].constants().count(), 0);
    }

    #[test]
    fn const_and_function() {
        let mods =
            parse_move("module 0x1::m { const C: u64 = 5; fun f(): u64 { C } }").unwrap();
        let m = &mods[0];
        let consts: Vec<_> = m.constants().collect();
        assert_eq!(consts.len(), 1);
        assert_eq!(consts[0].name, "C");
        assert_eq!(consts[0].ty, MoveType::Int(IntWidth::U64));
        let funs: Vec<_> = m.functions().collect();
        assert_eq!(funs.len(), 1);
        assert_eq!(funs[0].name, "f");
        assert_eq!(funs[0].visibility, Visibility::Private);
        assert_eq!(funs[0].return_types, vec![MoveType::Int(IntWidth::U64)]);
        let tail = funs[0].body.tail.as_ref().expect("tail expression");
        assert_eq!(tail.as_simple_name(), Some("C"));
    }

    #[test]
    fn broken_signature_reports_expected_and_found() {
        let err = parse_move("module 0x1::m { fun f( }").unwrap_err();
        let diags = err.diagnostics();
        assert!(!diags.is_empty());
        assert_eq!(diags[0].expected, "parameter or `)`");
        assert_eq!(diags[0].found, "`}`");
    }

    #[test]
    fn unsupported_statement_becomes_opaque() {
        let text = "module 0x1::m { fun f() { let (a, b) = pair(); a; } }";
        let mods = parse_move(text).unwrap();
        let f = mods[0].functions().next().unwrap();
        assert!(matches!(f.body.stmts[0], MoveStmt::Opaque(_)));
        if let MoveStmt::Opaque(o) = &f.body.stmts[0] {
            assert_eq!(o.raw, "let (a, b) = pair();");
        }
        assert!(mods[0].has_opaque());
    }

    #[test]
    fn generic_function_is_opaque_item() {
        let text = "module 0x1::m { fun id<T>(x: T): T { x } fun g() { } }";
        let mods = parse_move(text).unwrap();
        assert_eq!(mods[0].functions().count(), 1);
        assert!(mods[0].items.iter().any(|i| matches!(i, ModuleItem::Opaque(_))));
    }

    #[test]
    fn spans_nest_within_parents() {
        let text = "module 0x1::m { fun f(x: u64): u64 { if (x > 1) { x * 2 } else { x } } }";
        let mods = parse_move(text).unwrap();
        let m = &mods[0];
        let f = m.functions().next().unwrap();
        assert!(m.span.contains(f.span));
        assert!(f.span.contains(f.body.span));
        let tail = f.body.tail.as_ref().unwrap();
        assert!(f.body.span.contains(tail.span));
        walk_expr(tail, &mut |e| {
            assert!(tail.span.contains(e.span), "span escapes parent: {:?}", e.span);
        });
    }

    #[test]
    fn diagnostics_capped_at_ten() {
        let mut text = String::from("module 0x1::m {\n");
        for _ in 0..15 {
            text.push_str("fun ( ) broken\n");
        }
        text.push('}');
        match parse_move(&text) {
            Err(ParseError::Syntax(diags)) => assert!(diags.len() <= 10),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn cast_parses_with_loose_precedence() {
        let text = "module 0x1::m { fun f(a: u64, b: u64): u64 { ((a as u128) * (b as u128)) as u64 } }";
        let mods = parse_move(text).unwrap();
        let f = mods[0].functions().next().unwrap();
        let tail = f.body.tail.as_ref().unwrap();
        match &tail.kind {
            MoveExprKind::Cast { target, .. } => {
                assert_eq!(*target, MoveType::Int(IntWidth::U64));
            }
            other => panic!("expected cast, got {other:?}"),
        }
    }
}
