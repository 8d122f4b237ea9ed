//! Span-free pretty printer. Output reparses to a structurally equal
//! module; opaque nodes are emitted byte-exact.

use crate::move_lang::ast::*;

const INDENT: &str = "    ";

pub fn print_move(module: &MoveModule) -> String {
    let mut p = Printer { out: String::new(), depth: 0 };
    p.module(module);
    p.out
}

struct Printer {
    out: String,
    depth: usize,
}

impl Printer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.depth {
            self.out.push_str(INDENT);
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn module(&mut self, m: &MoveModule) {
        self.line(&format!("module {}::{} {{", m.address, m.name));
        self.depth += 1;
        for item in &m.items {
            match item {
                ModuleItem::Use(u) => self.line(&format!("use {};", u.path)),
                ModuleItem::Friend(f) => self.line(&format!("friend {};", f.path)),
                ModuleItem::Const(c) => {
                    let value = expr_text(&c.value);
                    self.line(&format!("const {}: {} = {};", c.name, type_text(&c.ty), value));
                }
                ModuleItem::Record(r) => self.record(r),
                ModuleItem::Function(f) => self.function(f),
                ModuleItem::Opaque(o) => self.raw_lines(&o.raw),
            }
        }
        self.depth -= 1;
        self.line("}");
    }

    /// Opaque regions keep their own internal layout; emit lines as-is,
    /// indenting only the first.
    fn raw_lines(&mut self, raw: &str) {
        let mut first = true;
        for line in raw.split_inclusive('\n') {
            if first {
                for _ in 0..self.depth {
                    self.out.push_str(INDENT);
                }
                first = false;
            }
            self.out.push_str(line);
        }
        if !raw.ends_with('\n') {
            self.out.push('\n');
        }
    }

    fn record(&mut self, r: &RecordDecl) {
        let abilities = if r.abilities.is_empty() {
            String::new()
        } else {
            format!(" has {}", r.abilities.join(", "))
        };
        if r.fields.is_empty() {
            self.line(&format!("struct {}{} {{ }}", r.name, abilities));
            return;
        }
        self.line(&format!("struct {}{} {{", r.name, abilities));
        self.depth += 1;
        for (name, ty) in &r.fields {
            self.line(&format!("{}: {},", name, type_text(ty)));
        }
        self.depth -= 1;
        self.line("}");
    }

    fn function(&mut self, f: &MoveFunction) {
        let vis = match f.visibility {
            Visibility::Private => "",
            Visibility::Public => "public ",
            Visibility::PublicFriend => "public(friend) ",
            Visibility::Entry => "entry ",
        };
        let params = f
            .params
            .iter()
            .map(|(n, t)| format!("{}: {}", n, type_text(t)))
            .collect::<Vec<_>>()
            .join(", ");
        let rets = match f.return_types.len() {
            0 => String::new(),
            1 => format!(": {}", type_text(&f.return_types[0])),
            _ => format!(
                ": ({})",
                f.return_types.iter().map(type_text).collect::<Vec<_>>().join(", ")
            ),
        };
        let acquires = if f.acquires.is_empty() {
            String::new()
        } else {
            format!(" acquires {}", f.acquires.join(", "))
        };
        self.line(&format!("{}fun {}({}){}{} {{", vis, f.name, params, rets, acquires));
        self.block_body(&f.body);
        self.line("}");
    }

    fn block_body(&mut self, block: &Block) {
        self.depth += 1;
        for stmt in &block.stmts {
            self.stmt(stmt);
        }
        if let Some(tail) = &block.tail {
            let text = expr_text(tail);
            self.line(&text);
        }
        self.depth -= 1;
    }

    fn stmt(&mut self, stmt: &MoveStmt) {
        match stmt {
            MoveStmt::Let { name, ty, init, .. } => {
                let mut s = format!("let {}", name);
                if let Some(t) = ty {
                    s.push_str(&format!(": {}", type_text(t)));
                }
                if let Some(e) = init {
                    s.push_str(&format!(" = {}", expr_text(e)));
                }
                s.push(';');
                self.line(&s);
            }
            MoveStmt::Expr { expr, has_semi, .. } => {
                let mut s = expr_text(expr);
                if *has_semi {
                    s.push(';');
                }
                self.line(&s);
            }
            MoveStmt::Opaque(o) => self.raw_lines(&o.raw),
        }
    }
}

pub fn type_text(ty: &MoveType) -> String {
    match ty {
        MoveType::Int(w) => w.name().to_string(),
        MoveType::Bool => "bool".to_string(),
        MoveType::Address => "address".to_string(),
        MoveType::Signer => "signer".to_string(),
        MoveType::Named { path, args } => {
            let mut s = path.join("::");
            if !args.is_empty() {
                s.push('<');
                s.push_str(&args.iter().map(type_text).collect::<Vec<_>>().join(", "));
                s.push('>');
            }
            s
        }
        MoveType::Ref { is_mut, inner } => {
            format!("&{}{}", if *is_mut { "mut " } else { "" }, type_text(inner))
        }
    }
}

/// Single-line rendering of an expression. Blocks render inline.
pub fn expr_text(expr: &MoveExpr) -> String {
    match &expr.kind {
        MoveExprKind::IntLit { text, .. } => text.clone(),
        MoveExprKind::BoolLit(b) => b.to_string(),
        MoveExprKind::ByteStringLit(s) | MoveExprKind::AddressLit(s) => s.clone(),
        MoveExprKind::Name { path } => path.join("::"),
        MoveExprKind::FieldAccess { base, field } => {
            format!("{}.{}", expr_text(base), field)
        }
        MoveExprKind::Binary { op, lhs, rhs } => {
            format!("{} {} {}", expr_text(lhs), op.as_str(), expr_text(rhs))
        }
        MoveExprKind::Unary { op, expr: inner } => {
            let op_text = match op {
                UnOp::Not => "!",
                UnOp::Borrow => "&",
                UnOp::BorrowMut => "&mut ",
                UnOp::Deref => "*",
            };
            format!("{}{}", op_text, expr_text(inner))
        }
        MoveExprKind::Cast { expr: inner, target } => {
            format!("{} as {}", expr_text(inner), type_text(target))
        }
        MoveExprKind::Call { path, is_macro, args } => {
            let args = args.iter().map(expr_text).collect::<Vec<_>>().join(", ");
            format!("{}{}({})", path.join("::"), if *is_macro { "!" } else { "" }, args)
        }
        MoveExprKind::If { cond, then_branch, else_branch } => {
            let mut s = format!("if ({}) {}", expr_text(cond), expr_text(then_branch));
            if let Some(e) = else_branch {
                s.push_str(&format!(" else {}", expr_text(e)));
            }
            s
        }
        MoveExprKind::While { cond, body } => {
            format!("while ({}) {}", expr_text(cond), expr_text(body))
        }
        MoveExprKind::Loop { body } => format!("loop {}", expr_text(body)),
        MoveExprKind::Block(b) => block_text(b),
        MoveExprKind::Paren(inner) => format!("({})", expr_text(inner)),
        MoveExprKind::Assign { lhs, rhs } => {
            format!("{} = {}", expr_text(lhs), expr_text(rhs))
        }
        MoveExprKind::Abort(code) => format!("abort {}", expr_text(code)),
        MoveExprKind::Return(value) => match value {
            Some(e) => format!("return {}", expr_text(e)),
            None => "return".to_string(),
        },
        MoveExprKind::Break => "break".to_string(),
        MoveExprKind::Continue => "continue".to_string(),
    }
}

fn block_text(block: &Block) -> String {
    let mut parts = Vec::new();
    for stmt in &block.stmts {
        match stmt {
            MoveStmt::Let { name, ty, init, .. } => {
                let mut s = format!("let {}", name);
                if let Some(t) = ty {
                    s.push_str(&format!(": {}", type_text(t)));
                }
                if let Some(e) = init {
                    s.push_str(&format!(" = {}", expr_text(e)));
                }
                s.push(';');
                parts.push(s);
            }
            MoveStmt::Expr { expr, has_semi, .. } => {
                let mut s = expr_text(expr);
                if *has_semi {
                    s.push(';');
                }
                parts.push(s);
            }
            MoveStmt::Opaque(o) => parts.push(o.raw.clone()),
        }
    }
    if let Some(tail) = &block.tail {
        parts.push(expr_text(tail));
    }
    if parts.is_empty() {
        "{ }".to_string()
    } else {
        format!("{{ {} }}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::move_lang::parser::parse_move;

    fn round_trip(text: &str) {
        let first = parse_move(text).expect("fixture parses");
        let printed = print_move(&first[0]);
        let second = parse_move(&printed)
            .unwrap_or_else(|e| panic!("printed output must reparse: {e}\n{printed}"));
        assert_eq!(
            normalize_module(&first[0]),
            normalize_module(&second[0]),
            "round trip changed structure:\n{printed}"
        );
    }

    #[test]
    fn minimal_module_round_trips() {
        round_trip("module 0x1::m { }");
    }

    #[test]
    fn boolean_if_shape_preserved() {
        let text = "module 0x1::m { fun f(x: bool): u64 { if (x == true) { 1 } else { 0 } } }";
        let ast = parse_move(text).unwrap();
        let printed = print_move(&ast[0]);
        assert!(printed.contains("if (x == true) { 1 } else { 0 }"));
        round_trip(text);
    }

    #[test]
    fn opaque_statement_bytes_unchanged() {
        let text = "module 0x1::m { fun f() { let (a,b) = two();\n a; } }";
        let ast = parse_move(text).unwrap();
        let printed = print_move(&ast[0]);
        assert!(printed.contains("let (a,b) = two();"));
        round_trip(text);
    }

    #[test]
    fn nested_control_flow_round_trips() {
        round_trip(
            "module 0x7::loops {\n fun f(n: u64): u64 {\n let i = 0;\n let acc = 0;\n while (i < n) {\n if (i % 2 == 0) { acc = acc + i; } else { acc = acc + 1; };\n i = i + 1;\n };\n acc\n }\n}",
        );
    }
}
