//! Recursive-descent parser for the Solidity subset with opaque fallback
//! inside function bodies and at item level.

use crate::move_lang::ast::NodeId;
use crate::move_lang::parser::{ParseDiagnostic, ParseError};
use crate::sol_lang::ast::*;
use crate::sol_lang::lexer::{tokenize_sol, SolToken, SolTokenKind};
use crate::source::Span;

const MAX_DIAGNOSTICS: usize = 10;

const ETHER_UNITS: &[&str] =
    &["wei", "szabo", "finney", "ether", "seconds", "minutes", "hours", "days", "weeks"];

const ELEMENTARY_PREFIXES: &[&str] = &["uint", "int", "bytes", "fixed", "ufixed"];

fn is_elementary(name: &str) -> bool {
    matches!(name, "address" | "bool" | "string" | "byte")
        || ELEMENTARY_PREFIXES.iter().any(|p| {
            name.strip_prefix(p)
                .map(|rest| rest.is_empty() || rest.chars().all(|c| c.is_ascii_digit()))
                .unwrap_or(false)
        })
}

/// Parse a Solidity source file.
pub fn parse_sol(text: &str) -> Result<SolFile, ParseError> {
    let tokens = tokenize_sol(text).map_err(|e| {
        ParseError::Syntax(vec![ParseDiagnostic {
            span: e.span,
            expected: "valid token".to_string(),
            found: e.message,
        }])
    })?;
    let mut parser = SolParser {
        text,
        tokens,
        pos: 0,
        diagnostics: Vec::new(),
        next_id: 1,
    };
    let file = parser.file();
    if parser.diagnostics.is_empty() {
        Ok(file)
    } else {
        parser.diagnostics.truncate(MAX_DIAGNOSTICS);
        Err(ParseError::Syntax(parser.diagnostics))
    }
}

struct Soft(ParseDiagnostic);

type Res<T> = Result<T, Soft>;

struct SolParser<'a> {
    text: &'a str,
    tokens: Vec<SolToken>,
    pos: usize,
    diagnostics: Vec<ParseDiagnostic>,
    next_id: u32,
}

impl<'a> SolParser<'a> {
    // -- token utilities ------------------------------------------------------

    fn peek(&self) -> Option<&SolToken> {
        self.tokens.get(self.pos)
    }

    fn peek_text(&self) -> &str {
        self.peek().map(|t| t.text.as_str()).unwrap_or("")
    }

    fn at(&self, text: &str) -> bool {
        self.peek_text() == text
    }

    fn bump(&mut self) -> SolToken {
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

    fn soft(&self, expected: impl Into<String>) -> Soft {
        let (span, found) = match self.peek() {
            Some(t) => (t.span, format!("`{}`", t.text)),
            None => (self.eof_span(), "end of input".to_string()),
        };
        Soft(ParseDiagnostic { span, expected: expected.into(), found })
    }

    fn expect(&mut self, text: &str, expected: &str) -> Res<SolToken> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.soft(expected))
        }
    }

    fn expect_ident(&mut self, expected: &str) -> Res<SolToken> {
        if self.peek().map(|t| t.kind == SolTokenKind::Ident).unwrap_or(false) {
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

    fn expr(&mut self, kind: SolExprKind, span: Span) -> SolExpr {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        SolExpr { id, kind, span }
    }

    // -- file -----------------------------------------------------------------

    fn file(&mut self) -> SolFile {
        let mut pragma = PragmaVersion::absent();
        let mut items = Vec::new();
        let file_start = self.peek().map(|t| t.span).unwrap_or_else(|| self.eof_span());
        let mut file_end = file_start;
        while let Some(tok) = self.peek() {
            file_end = tok.span;
            match tok.text.as_str() {
                "pragma" => match self.pragma_decl() {
                    Ok((version, raw)) => {
                        pragma = version;
                        items.push(SolTopItem::Pragma(raw));
                    }
                    Err(soft) => {
                        self.record(soft);
                        self.skip_past(";");
                    }
                },
                "contract" => match self.contract() {
                    Ok(c) => items.push(SolTopItem::Contract(c)),
                    Err(soft) => {
                        self.record(soft);
                        self.sync_to_top();
                    }
                },
                _ => match self.opaque_region() {
                    Ok(o) => items.push(SolTopItem::Opaque(o)),
                    Err(soft) => {
                        self.record(soft);
                        self.sync_to_top();
                    }
                },
            }
            if self.diagnostics.len() >= MAX_DIAGNOSTICS {
                break;
            }
        }
        SolFile { pragma, items, span: file_start.join(file_end) }
    }

    fn skip_past(&mut self, text: &str) {
        while let Some(t) = self.peek() {
            let hit = t.text == text;
            self.pos += 1;
            if hit {
                return;
            }
        }
    }

    fn sync_to_top(&mut self) {
        while let Some(t) = self.peek() {
            if t.text == "contract" || t.text == "pragma" {
                return;
            }
            self.pos += 1;
        }
    }

    fn pragma_decl(&mut self) -> Res<(PragmaVersion, OpaqueNode)> {
        let start = self.expect("pragma", "`pragma`")?;
        let mut version_tokens: Vec<SolToken> = Vec::new();
        while let Some(t) = self.peek() {
            if t.text == ";" {
                let semi = self.bump();
                let span = start.span.join(semi.span);
                let raw = OpaqueNode { raw: span.slice(self.text).to_string(), span };
                return Ok((parse_version(&version_tokens), raw));
            }
            version_tokens.push(self.bump());
        }
        Err(self.soft("`;`"))
    }

    /// Balanced region ending at a top-level `;` or matching `}`.
    fn opaque_region(&mut self) -> Res<OpaqueNode> {
        let start = match self.peek() {
            Some(t) => t.span,
            None => return Err(self.soft("item")),
        };
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
                        break;
                    }
                    depth -= 1;
                    end = self.bump().span;
                    if depth == 0 && text == "}" {
                        // `} ;` also closes pre-0.5 struct-in-fn corners
                        if self.at(";") {
                            end = self.bump().span;
                        }
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
        if span.is_empty() {
            return Err(self.soft("item"));
        }
        Ok(OpaqueNode { raw: span.slice(self.text).to_string(), span })
    }

    // -- contract ---------------------------------------------------------------

    fn contract(&mut self) -> Res<SolContract> {
        let kw = self.expect("contract", "`contract`")?;
        let name = self.expect_ident("contract name")?.text;
        let inherits_raw = if self.at("is") {
            let is_start = self.bump().span;
            let mut end = is_start;
            while let Some(t) = self.peek() {
                if t.text == "{" {
                    break;
                }
                end = self.bump().span;
            }
            Some(is_start.join(end).slice(self.text).to_string())
        } else {
            None
        };
        self.expect("{", "`{`")?;
        let mut members = Vec::new();
        loop {
            if self.at("}") {
                let close = self.bump();
                return Ok(SolContract {
                    name,
                    inherits_raw,
                    members,
                    span: kw.span.join(close.span),
                });
            }
            if self.peek().is_none() {
                return Err(self.soft("`}` or contract member"));
            }
            let member_start = self.pos;
            match self.member(&name) {
                Ok(m) => members.push(m),
                Err(_) => {
                    self.pos = member_start;
                    let o = self.opaque_region()?;
                    members.push(SolMember::Opaque(o));
                }
            }
        }
    }

    fn member(&mut self, contract_name: &str) -> Res<SolMember> {
        match self.peek_text() {
            "function" | "constructor" => self.function(contract_name).map(SolMember::Function),
            "modifier" => self.modifier_decl().map(SolMember::Modifier),
            "struct" => self.struct_decl().map(SolMember::Struct),
            "using" => self.opaque_region().map(SolMember::Using),
            "event" | "enum" => self.opaque_region().map(SolMember::Opaque),
            _ => self.state_var().map(SolMember::StateVar),
        }
    }

    fn state_var(&mut self) -> Res<StateVarDecl> {
        let start = self.peek().map(|t| t.span).unwrap_or_else(|| self.eof_span());
        let ty = self.type_ref()?;
        let mut visibility = SolVisibility::Default;
        let mut is_constant = false;
        loop {
            match self.peek_text() {
                "public" => {
                    visibility = SolVisibility::Public;
                    self.bump();
                }
                "internal" => {
                    visibility = SolVisibility::Internal;
                    self.bump();
                }
                "private" => {
                    visibility = SolVisibility::Private;
                    self.bump();
                }
                "constant" => {
                    is_constant = true;
                    self.bump();
                }
                _ => break,
            }
        }
        let name = self.expect_ident("state variable name")?.text;
        let init = if self.eat("=") { Some(self.parse_expr()?) } else { None };
        let semi = self.expect(";", "`;`")?;
        Ok(StateVarDecl { name, ty, visibility, is_constant, init, span: start.join(semi.span) })
    }

    fn struct_decl(&mut self) -> Res<SolStructDecl> {
        let kw = self.expect("struct", "`struct`")?;
        let name = self.expect_ident("struct name")?.text;
        self.expect("{", "`{`")?;
        let mut fields = Vec::new();
        while !self.at("}") {
            let fty = self.type_ref()?;
            let fname = self.expect_ident("field name")?.text;
            self.expect(";", "`;`")?;
            fields.push((fname, fty));
        }
        let close = self.expect("}", "`}`")?;
        Ok(SolStructDecl { name, fields, span: kw.span.join(close.span) })
    }

    fn modifier_decl(&mut self) -> Res<ModifierDecl> {
        let kw = self.expect("modifier", "`modifier`")?;
        let name = self.expect_ident("modifier name")?.text;
        let params_raw = if self.at("(") {
            Some(self.raw_paren_group()?)
        } else {
            None
        };
        let body = self.block()?;
        let span = kw.span.join(body.span);
        Ok(ModifierDecl { name, params_raw, body, span })
    }

    fn raw_paren_group(&mut self) -> Res<String> {
        let open = self.expect("(", "`(`")?;
        let mut depth = 1usize;
        let mut end = open.span;
        while depth > 0 {
            let Some(t) = self.peek() else {
                return Err(self.soft("`)`"));
            };
            match t.text.as_str() {
                "(" => depth += 1,
                ")" => depth -= 1,
                _ => {}
            }
            end = self.bump().span;
        }
        Ok(open.span.join(end).slice(self.text).to_string())
    }

    fn function(&mut self, contract_name: &str) -> Res<SolFunction> {
        let kw = self.bump(); // function | constructor
        let (mut kind, name) = if kw.text == "constructor" {
            (FnKind::Constructor, "constructor".to_string())
        } else if self.at("(") {
            (FnKind::Fallback, String::new())
        } else {
            let n = self.expect_ident("function name")?.text;
            (FnKind::Function, n)
        };
        if kind == FnKind::Function && name == contract_name {
            kind = FnKind::Constructor;
        }
        self.expect("(", "`(`")?;
        let params = self.param_list()?;
        let mut visibility = SolVisibility::Default;
        let mut mutability = Mutability::None;
        let mut modifiers = Vec::new();
        let mut returns = Vec::new();
        loop {
            match self.peek_text() {
                "public" => {
                    visibility = SolVisibility::Public;
                    self.bump();
                }
                "external" => {
                    visibility = SolVisibility::External;
                    self.bump();
                }
                "internal" => {
                    visibility = SolVisibility::Internal;
                    self.bump();
                }
                "private" => {
                    visibility = SolVisibility::Private;
                    self.bump();
                }
                "payable" => {
                    mutability = Mutability::Payable;
                    self.bump();
                }
                "view" | "constant" => {
                    mutability = Mutability::View;
                    self.bump();
                }
                "pure" => {
                    mutability = Mutability::Pure;
                    self.bump();
                }
                "returns" => {
                    self.bump();
                    self.expect("(", "`(`")?;
                    returns = self.param_list()?;
                }
                "{" | ";" => break,
                _ => {
                    let tok = self.expect_ident("function attribute")?;
                    let args_raw =
                        if self.at("(") { Some(self.raw_paren_group()?) } else { None };
                    modifiers.push(ModifierInvocation { name: tok.text, args_raw, span: tok.span });
                }
            }
        }
        let (body, end_span) = if self.at(";") {
            let semi = self.bump();
            (None, semi.span)
        } else {
            let b = self.block()?;
            let s = b.span;
            (Some(b), s)
        };
        Ok(SolFunction {
            name,
            kind,
            visibility,
            mutability,
            modifiers,
            params,
            returns,
            body,
            span: kw.span.join(end_span),
        })
    }

    /// Parses up to and including the closing `)`.
    fn param_list(&mut self) -> Res<Vec<SolParam>> {
        let mut params = Vec::new();
        while !self.at(")") {
            let ty = self.type_ref()?;
            let loc = self.data_loc();
            let name = if self.peek().map(|t| t.kind == SolTokenKind::Ident).unwrap_or(false) {
                Some(self.bump().text)
            } else {
                None
            };
            params.push(SolParam { name, ty, loc });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")", "parameter or `)`")?;
        Ok(params)
    }

    fn data_loc(&mut self) -> Option<DataLoc> {
        let loc = match self.peek_text() {
            "memory" => Some(DataLoc::Memory),
            "storage" => Some(DataLoc::Storage),
            "calldata" => Some(DataLoc::Calldata),
            _ => None,
        };
        if loc.is_some() {
            self.bump();
        }
        loc
    }

    // -- types ------------------------------------------------------------------

    fn type_ref(&mut self) -> Res<SolType> {
        let base = if self.at("mapping") {
            self.bump();
            self.expect("(", "`(`")?;
            let key = self.type_ref()?;
            self.expect("=>", "`=>`")?;
            let value = self.type_ref()?;
            self.expect(")", "`)`")?;
            SolType::Mapping { key: Box::new(key), value: Box::new(value) }
        } else {
            let tok = match self.peek() {
                Some(t) if t.kind == SolTokenKind::Ident => self.bump(),
                _ => return Err(self.soft("type name")),
            };
            let mut name = tok.text;
            // `address payable`
            if name == "address" && self.at("payable") {
                self.bump();
                name.push_str(" payable");
            }
            if is_elementary(name.split(' ').next().unwrap_or(&name)) {
                SolType::Elementary(name)
            } else {
                SolType::Named(name)
            }
        };
        let mut ty = base;
        while self.at("[") {
            self.bump();
            let len = if self.at("]") {
                None
            } else {
                let tok = self.bump();
                Some(tok.text)
            };
            self.expect("]", "`]`")?;
            ty = SolType::Array { elem: Box::new(ty), len };
        }
        Ok(ty)
    }

    // -- statements ---------------------------------------------------------------

    fn block(&mut self) -> Res<SolBlock> {
        let open = self.expect("{", "`{`")?;
        let mut stmts = Vec::new();
        loop {
            if self.at("}") {
                let close = self.bump();
                return Ok(SolBlock { stmts, span: open.span.join(close.span) });
            }
            if self.peek().is_none() {
                return Err(self.soft("`}` or statement"));
            }
            let start = self.pos;
            match self.statement() {
                Ok(s) => stmts.push(s),
                Err(_) => {
                    self.pos = start;
                    let o = self.opaque_stmt()?;
                    stmts.push(SolStmt::Opaque(o));
                }
            }
        }
    }

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
            let text = t.text.clone();
            match text.as_str() {
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
        if span.is_empty() {
            return Err(self.soft("statement"));
        }
        Ok(OpaqueNode { raw: span.slice(self.text).to_string(), span })
    }

    fn statement(&mut self) -> Res<SolStmt> {
        match self.peek_text() {
            "{" => {
                let b = self.block()?;
                return Ok(SolStmt::Block(b));
            }
            "if" => return self.if_stmt(),
            "while" => return self.while_stmt(),
            "for" => return self.for_stmt(),
            "return" => {
                let kw = self.bump();
                let value = if self.at(";") { None } else { Some(self.parse_expr()?) };
                let semi = self.expect(";", "`;`")?;
                return Ok(SolStmt::Return { value, span: kw.span.join(semi.span) });
            }
            "emit" => {
                let kw = self.bump();
                let call = self.parse_expr()?;
                let semi = self.expect(";", "`;`")?;
                return Ok(SolStmt::Emit { call, span: kw.span.join(semi.span) });
            }
            "assembly" => return Err(self.soft("statement")),
            _ => {}
        }
        // Variable declaration vs expression: attempt the declaration and
        // backtrack on failure.
        let start = self.pos;
        if let Ok(decl) = self.try_var_decl() {
            return Ok(decl);
        }
        self.pos = start;
        let expr = self.parse_expr()?;
        let semi = self.expect(";", "`;`")?;
        let span = expr.span.join(semi.span);
        Ok(SolStmt::Expr { expr, span })
    }

    fn try_var_decl(&mut self) -> Res<SolStmt> {
        let start = self.peek().map(|t| t.span).unwrap_or_else(|| self.eof_span());
        let first_is_decl_keyword = self.at("mapping")
            || self
                .peek()
                .map(|t| t.kind == SolTokenKind::Ident && is_elementary(&t.text))
                .unwrap_or(false);
        let ty = self.type_ref()?;
        // A bare named type is only a declaration when followed by a data
        // location or an identifier.
        if !first_is_decl_keyword
            && !matches!(ty, SolType::Array { .. })
            && !matches!(self.peek_text(), "memory" | "storage" | "calldata")
            && !self.peek().map(|t| t.kind == SolTokenKind::Ident).unwrap_or(false)
        {
            return Err(self.soft("declaration"));
        }
        let loc = self.data_loc();
        let name = self.expect_ident("variable name")?.text;
        let init = if self.eat("=") { Some(self.parse_expr()?) } else { None };
        let semi = self.expect(";", "`;`")?;
        Ok(SolStmt::VarDecl { ty, loc, name, init, span: start.join(semi.span) })
    }

    fn if_stmt(&mut self) -> Res<SolStmt> {
        let kw = self.expect("if", "`if`")?;
        self.expect("(", "`(`")?;
        let cond = self.parse_expr()?;
        self.expect(")", "`)`")?;
        let then_branch = Box::new(self.statement()?);
        let mut span = kw.span.join(then_branch.span());
        let else_branch = if self.eat("else") {
            let s = self.statement()?;
            span = span.join(s.span());
            Some(Box::new(s))
        } else {
            None
        };
        Ok(SolStmt::If { cond, then_branch, else_branch, span })
    }

    fn while_stmt(&mut self) -> Res<SolStmt> {
        let kw = self.expect("while", "`while`")?;
        self.expect("(", "`(`")?;
        let cond = self.parse_expr()?;
        self.expect(")", "`)`")?;
        let body = Box::new(self.statement()?);
        let span = kw.span.join(body.span());
        Ok(SolStmt::While { cond, body, span })
    }

    fn for_stmt(&mut self) -> Res<SolStmt> {
        let kw = self.expect("for", "`for`")?;
        self.expect("(", "`(`")?;
        let init = if self.eat(";") {
            None
        } else {
            let start = self.pos;
            let stmt = match self.try_var_decl() {
                Ok(s) => s,
                Err(_) => {
                    self.pos = start;
                    let e = self.parse_expr()?;
                    let semi = self.expect(";", "`;`")?;
                    let span = e.span.join(semi.span);
                    SolStmt::Expr { expr: e, span }
                }
            };
            Some(Box::new(stmt))
        };
        let cond = if self.at(";") { None } else { Some(self.parse_expr()?) };
        self.expect(";", "`;`")?;
        let update = if self.at(")") { None } else { Some(self.parse_expr()?) };
        self.expect(")", "`)`")?;
        let body = Box::new(self.statement()?);
        let span = kw.span.join(body.span());
        Ok(SolStmt::For { init, cond, update, body, span })
    }

    // -- expressions ----------------------------------------------------------------

    fn parse_expr(&mut self) -> Res<SolExpr> {
        let lhs = self.ternary()?;
        let op = match self.peek_text() {
            "=" => Some(AssignOp::Assign),
            "+=" => Some(AssignOp::AddAssign),
            "-=" => Some(AssignOp::SubAssign),
            "*=" => Some(AssignOp::MulAssign),
            "/=" => Some(AssignOp::DivAssign),
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let rhs = self.parse_expr()?;
            let span = lhs.span.join(rhs.span);
            return Ok(self.expr(
                SolExprKind::Assign { op, lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
            ));
        }
        Ok(lhs)
    }

    fn ternary(&mut self) -> Res<SolExpr> {
        let cond = self.binary_level(0)?;
        if self.eat("?") {
            let then_expr = self.parse_expr()?;
            self.expect(":", "`:`")?;
            let else_expr = self.parse_expr()?;
            let span = cond.span.join(else_expr.span);
            return Ok(self.expr(
                SolExprKind::Ternary {
                    cond: Box::new(cond),
                    then_expr: Box::new(then_expr),
                    else_expr: Box::new(else_expr),
                },
                span,
            ));
        }
        Ok(cond)
    }

    fn binary_level(&mut self, level: usize) -> Res<SolExpr> {
        const LEVELS: &[&[(&str, SolBinOp)]] = &[
            &[("||", SolBinOp::Or)],
            &[("&&", SolBinOp::And)],
            &[("==", SolBinOp::Eq), ("!=", SolBinOp::Ne)],
            &[("<", SolBinOp::Lt), (">", SolBinOp::Gt), ("<=", SolBinOp::Le), (">=", SolBinOp::Ge)],
            &[("|", SolBinOp::BitOr)],
            &[("^", SolBinOp::BitXor)],
            &[("&", SolBinOp::BitAnd)],
            &[("<<", SolBinOp::Shl), (">>", SolBinOp::Shr)],
            &[("+", SolBinOp::Add), ("-", SolBinOp::Sub)],
            &[("*", SolBinOp::Mul), ("/", SolBinOp::Div), ("%", SolBinOp::Mod)],
            &[("**", SolBinOp::Pow)],
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
                SolExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
            );
        }
    }

    fn unary(&mut self) -> Res<SolExpr> {
        let op_text = self.peek_text();
        if matches!(op_text, "!" | "-" | "~" | "++" | "--" | "delete") {
            let op = self.bump();
            let inner = self.unary()?;
            let span = op.span.join(inner.span);
            let op_string = if op.text == "delete" { "delete ".to_string() } else { op.text };
            return Ok(self.expr(
                SolExprKind::Unary { op: op_string, prefix: true, expr: Box::new(inner) },
                span,
            ));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Res<SolExpr> {
        let mut e = self.primary()?;
        loop {
            match self.peek_text() {
                "." => {
                    self.bump();
                    let member = match self.peek() {
                        Some(t)
                            if t.kind == SolTokenKind::Ident
                                || t.kind == SolTokenKind::Keyword =>
                        {
                            self.bump()
                        }
                        _ => return Err(self.soft("member name")),
                    };
                    let span = e.span.join(member.span);
                    e = self.fold_member(e, member.text, span);
                }
                "[" => {
                    self.bump();
                    let index = self.parse_expr()?;
                    let close = self.expect("]", "`]`")?;
                    let span = e.span.join(close.span);
                    e = self.expr(
                        SolExprKind::Index { base: Box::new(e), index: Box::new(index) },
                        span,
                    );
                }
                "(" => {
                    self.bump();
                    let mut args = Vec::new();
                    while !self.at(")") {
                        args.push(self.parse_expr()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    let close = self.expect(")", "`)` or `,`")?;
                    let span = e.span.join(close.span);
                    e = self.fold_call(e, args, span);
                }
                "{" if is_call_member(&e) => {
                    // call options: `.call{value: v, gas: g}(…)`
                    self.bump();
                    let mut value = None;
                    let mut gas = None;
                    while !self.at("}") {
                        let key = self.expect_ident("`value` or `gas`")?.text;
                        self.expect(":", "`:`")?;
                        let arg = self.parse_expr()?;
                        match key.as_str() {
                            "value" => value = Some(Box::new(arg)),
                            "gas" => gas = Some(Box::new(arg)),
                            _ => return Err(self.soft("`value` or `gas`")),
                        }
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect("}", "`}`")?;
                    self.expect("(", "`(`")?;
                    let mut args = Vec::new();
                    while !self.at(")") {
                        args.push(self.parse_expr()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    let close = self.expect(")", "`)` or `,`")?;
                    let span = e.span.join(close.span);
                    let base = match e.kind {
                        SolExprKind::Member { base, .. } => base,
                        _ => Box::new(e),
                    };
                    e = self.expr(
                        SolExprKind::ExternalCall {
                            base,
                            form: CallForm::CallValueOptions,
                            value,
                            gas,
                            args,
                        },
                        span,
                    );
                }
                "++" | "--" => {
                    let op = self.bump();
                    let span = e.span.join(op.span);
                    e = self.expr(
                        SolExprKind::Unary { op: op.text, prefix: false, expr: Box::new(e) },
                        span,
                    );
                }
                _ => return Ok(e),
            }
        }
    }

    fn fold_member(&mut self, base: SolExpr, member: String, span: Span) -> SolExpr {
        if let SolExprKind::Ident(name) = &base.kind {
            let atom = match (name.as_str(), member.as_str()) {
                ("msg", "sender") => Some(AtomKind::MsgSender),
                ("msg", "value") => Some(AtomKind::MsgValue),
                ("tx", "origin") => Some(AtomKind::TxOrigin),
                ("block", "timestamp") => Some(AtomKind::BlockTimestamp),
                _ => None,
            };
            if let Some(atom) = atom {
                return self.expr(SolExprKind::Atom(atom), span);
            }
        }
        self.expr(SolExprKind::Member { base: Box::new(base), member }, span)
    }

    /// Normalize `X.transfer(v)` / `X.send(v)` / `X.call(...)` /
    /// `X.call.value(v)[.gas(g)](...)` into the external-call kind.
    fn fold_call(&mut self, callee: SolExpr, args: Vec<SolExpr>, span: Span) -> SolExpr {
        match callee.kind {
            SolExprKind::Member { base, member } => match member.as_str() {
                "transfer" if args.len() == 1 => {
                    let value = args.into_iter().next().unwrap();
                    self.expr(
                        SolExprKind::ExternalCall {
                            base,
                            form: CallForm::Transfer,
                            value: Some(Box::new(value)),
                            gas: None,
                            args: Vec::new(),
                        },
                        span,
                    )
                }
                "send" if args.len() == 1 => {
                    let value = args.into_iter().next().unwrap();
                    self.expr(
                        SolExprKind::ExternalCall {
                            base,
                            form: CallForm::Send,
                            value: Some(Box::new(value)),
                            gas: None,
                            args: Vec::new(),
                        },
                        span,
                    )
                }
                "call" => self.expr(
                    SolExprKind::ExternalCall {
                        base,
                        form: CallForm::BareCall,
                        value: None,
                        gas: None,
                        args,
                    },
                    span,
                ),
                "value" => {
                    // `<pending .call>.value(v)` — upgrade a bare call chain
                    if let SolExprKind::Member { base: inner, member: m2 } = &base.kind {
                        if m2 == "call" && args.len() == 1 {
                            let value = args.into_iter().next().unwrap();
                            return self.expr(
                                SolExprKind::ExternalCall {
                                    base: inner.clone(),
                                    form: CallForm::CallValueLegacy,
                                    value: Some(Box::new(value)),
                                    gas: None,
                                    args: Vec::new(),
                                },
                                span,
                            );
                        }
                    }
                    let callee = self.expr(SolExprKind::Member { base, member }, span);
                    self.expr(SolExprKind::Call { callee: Box::new(callee), args }, span)
                }
                "gas" => {
                    // `.gas(g)` tacked onto a legacy call chain
                    if let SolExprKind::ExternalCall {
                        base: b,
                        form: CallForm::CallValueLegacy,
                        value,
                        args: prev_args,
                        ..
                    } = &base.kind
                    {
                        if prev_args.is_empty() && args.len() == 1 {
                            let gas = args.into_iter().next().unwrap();
                            return self.expr(
                                SolExprKind::ExternalCall {
                                    base: b.clone(),
                                    form: CallForm::CallValueLegacy,
                                    value: value.clone(),
                                    gas: Some(Box::new(gas)),
                                    args: Vec::new(),
                                },
                                span,
                            );
                        }
                    }
                    let callee = self.expr(SolExprKind::Member { base, member }, span);
                    self.expr(SolExprKind::Call { callee: Box::new(callee), args }, span)
                }
                _ => {
                    let callee = self.expr(SolExprKind::Member { base, member }, span);
                    self.expr(SolExprKind::Call { callee: Box::new(callee), args }, span)
                }
            },
            // `addr.call.value(v)(actual args)` — fill the pending arg list
            SolExprKind::ExternalCall {
                base,
                form: form @ (CallForm::CallValueLegacy | CallForm::BareCall),
                value,
                gas,
                args: prev_args,
            } if prev_args.is_empty() => self.expr(
                SolExprKind::ExternalCall { base, form, value, gas, args },
                span,
            ),
            other => {
                let callee = SolExpr { id: callee.id, kind: other, span: callee.span };
                self.expr(SolExprKind::Call { callee: Box::new(callee), args }, span)
            }
        }
    }

    fn primary(&mut self) -> Res<SolExpr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.soft("expression"));
        };
        match tok.kind {
            SolTokenKind::Number => {
                self.bump();
                let unit = match self.peek() {
                    Some(t)
                        if t.kind == SolTokenKind::Ident
                            && ETHER_UNITS.contains(&t.text.as_str()) =>
                    {
                        Some(self.bump())
                    }
                    _ => None,
                };
                let span = unit.as_ref().map(|u| tok.span.join(u.span)).unwrap_or(tok.span);
                Ok(self.expr(
                    SolExprKind::NumberLit { text: tok.text, unit: unit.map(|u| u.text) },
                    span,
                ))
            }
            SolTokenKind::Str => {
                self.bump();
                Ok(self.expr(SolExprKind::StringLit(tok.text), tok.span))
            }
            SolTokenKind::Bool => {
                self.bump();
                Ok(self.expr(SolExprKind::BoolLit(tok.text == "true"), tok.span))
            }
            SolTokenKind::Ident => {
                self.bump();
                if tok.text == "now" {
                    return Ok(self.expr(SolExprKind::Atom(AtomKind::Now), tok.span));
                }
                Ok(self.expr(SolExprKind::Ident(tok.text), tok.span))
            }
            SolTokenKind::Keyword => match tok.text.as_str() {
                "new" => {
                    self.bump();
                    let ty = self.type_ref()?;
                    let span = tok.span;
                    Ok(self.expr(SolExprKind::New { ty }, span))
                }
                // `require` and a few builtins read like identifiers in
                // expression position.
                "require" | "payable" => {
                    self.bump();
                    Ok(self.expr(SolExprKind::Ident(tok.text), tok.span))
                }
                _ => Err(self.soft("expression")),
            },
            SolTokenKind::Delim if tok.text == "(" => {
                self.bump();
                let inner = self.parse_expr()?;
                let close = self.expect(")", "`)`")?;
                let span = tok.span.join(close.span);
                Ok(self.expr(SolExprKind::Paren(Box::new(inner)), span))
            }
            _ => Err(self.soft("expression")),
        }
    }
}

fn is_call_member(e: &SolExpr) -> bool {
    matches!(&e.kind, SolExprKind::Member { member, .. } if member == "call")
}

fn parse_version(tokens: &[SolToken]) -> PragmaVersion {
    // Skip the leading `solidity` identifier.
    let rest: Vec<&SolToken> = tokens.iter().filter(|t| t.text != "solidity").collect();
    if rest.is_empty() {
        return PragmaVersion::absent();
    }
    let mut comparator = Comparator::Exact;
    let mut i = 0;
    match rest[0].text.as_str() {
        "^" => {
            comparator = Comparator::Caret;
            i = 1;
        }
        ">=" | ">" => {
            comparator = Comparator::Range;
            i = 1;
        }
        "<" | "<=" => {
            // Only an upper bound: minimum admitted version is 0.0.0.
            return PragmaVersion { comparator: Comparator::Range, major: 0, minor: 0, patch: 0 };
        }
        "=" => {
            i = 1;
        }
        _ => {}
    }
    let mut nums = Vec::new();
    while i < rest.len() && nums.len() < 3 {
        let t = rest[i];
        if t.kind == SolTokenKind::Number {
            if let Ok(n) = t.text.parse::<u32>() {
                nums.push(n);
            }
        } else if t.text != "." {
            break;
        }
        i += 1;
    }
    PragmaVersion {
        comparator,
        major: nums.first().copied().unwrap_or(0),
        minor: nums.get(1).copied().unwrap_or(0),
        patch: nums.get(2).copied().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_contract_with_pragma() {
        let file = parse_sol("pragma solidity ^0.8.0; contract C {}").unwrap();
        assert_eq!(
            file.pragma,
            PragmaVersion { comparator: Comparator::Caret, major: 0, minor: 8, patch: 0 }
        );
        let c: Vec<_> = file.contracts().collect();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].name, "C");
        assert!(c[0].members.is_empty());
    }

    #[test]
    fn missing_pragma_is_absent() {
        let file = parse_sol("contract C {}").unwrap();
        assert_eq!(file.pragma.comparator, Comparator::Absent);
        assert_eq!(pragma_lt(&file.pragma, 0, 8), Err(AbsentPragma));
    }

    #[test]
    fn pragma_lt_boundaries() {
        let caret_04 = PragmaVersion { comparator: Comparator::Caret, major: 0, minor: 4, patch: 24 };
        let caret_081 = PragmaVersion { comparator: Comparator::Caret, major: 0, minor: 8, patch: 1 };
        let exact_080 = PragmaVersion { comparator: Comparator::Exact, major: 0, minor: 8, patch: 0 };
        assert_eq!(pragma_lt(&caret_04, 0, 8), Ok(true));
        assert_eq!(pragma_lt(&caret_081, 0, 8), Ok(false));
        assert_eq!(pragma_lt(&exact_080, 0, 8), Ok(false));
    }

    #[test]
    fn call_then_write_order_preserved() {
        let text = r#"
pragma solidity ^0.4.24;
contract Vault {
    mapping(address => uint256) balances;
    function withdraw() public {
        uint256 amount = balances[msg.sender];
        require(msg.sender.call.value(amount)());
        balances[msg.sender] = 0;
    }
}
"#;
        let file = parse_sol(text).unwrap();
        let c = file.contracts().next().unwrap();
        assert!(c.is_state_var("balances"));
        let f = c.functions().next().unwrap();
        let body = f.body.as_ref().unwrap();
        assert_eq!(body.stmts.len(), 3);
        // statement 2 contains the external value call
        let mut saw_call = false;
        walk_stmt_exprs(&body.stmts[1], &mut |e| {
            if let SolExprKind::ExternalCall { form, .. } = &e.kind {
                assert_eq!(*form, CallForm::CallValueLegacy);
                saw_call = true;
            }
        });
        assert!(saw_call);
        // statement 3 assigns to storage
        match &body.stmts[2] {
            SolStmt::Expr { expr, .. } => match &expr.kind {
                SolExprKind::Assign { lhs, .. } => {
                    assert_eq!(lhs.root_ident(), Some("balances"));
                }
                other => panic!("expected assignment, got {other:?}"),
            },
            other => panic!("expected expression statement, got {other:?}"),
        }
    }

    #[test]
    fn truncated_function_reports_eof() {
        let err = parse_sol("contract C { function f() public {").unwrap_err();
        let diags = err.diagnostics();
        assert!(diags.iter().any(|d| d.found == "end of input"), "{diags:?}");
    }

    #[test]
    fn atoms_are_recognized() {
        let text = "contract C { function f() public { require(tx.origin == msg.sender); } }";
        let file = parse_sol(text).unwrap();
        let c = file.contracts().next().unwrap();
        let f = c.functions().next().unwrap();
        let mut atoms = Vec::new();
        walk_stmt_exprs(&f.body.as_ref().unwrap().stmts[0], &mut |e| {
            if let SolExprKind::Atom(a) = &e.kind {
                atoms.push(*a);
            }
        });
        assert_eq!(atoms, vec![AtomKind::TxOrigin, AtomKind::MsgSender]);
    }

    #[test]
    fn call_options_form_normalizes() {
        let text = r#"pragma solidity ^0.8.0;
contract C {
    function pay(address payable to) public {
        to.call{value: 1 ether}("");
    }
}"#;
        let file = parse_sol(text).unwrap();
        let c = file.contracts().next().unwrap();
        let f = c.functions().next().unwrap();
        let mut form = None;
        walk_stmt_exprs(&f.body.as_ref().unwrap().stmts[0], &mut |e| {
            if let SolExprKind::ExternalCall { form: fm, value, .. } = &e.kind {
                form = Some(*fm);
                assert!(value.is_some());
            }
        });
        assert_eq!(form, Some(CallForm::CallValueOptions));
    }

    #[test]
    fn struct_local_declaration() {
        let text = r#"pragma solidity ^0.4.24;
contract C {
    struct Wallet { uint256 amount; address holder; }
    function f() public {
        Wallet w;
        w.amount = 1;
    }
}"#;
        let file = parse_sol(text).unwrap();
        let c = file.contracts().next().unwrap();
        assert_eq!(c.structs().count(), 1);
        let f = c.functions().next().unwrap();
        match &f.body.as_ref().unwrap().stmts[0] {
            SolStmt::VarDecl { ty, loc, init, .. } => {
                assert_eq!(*ty, SolType::Named("Wallet".to_string()));
                assert!(loc.is_none());
                assert!(init.is_none());
            }
            other => panic!("expected declaration, got {other:?}"),
        }
    }
}
