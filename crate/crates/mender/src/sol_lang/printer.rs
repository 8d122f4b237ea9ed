//! Pretty printer for the Solidity subset; output reparses structurally
//! equal, opaque regions byte-exact.

use crate::sol_lang::ast::*;

const INDENT: &str = "    ";

pub fn print_sol(file: &SolFile) -> String {
    let mut p = Printer { out: String::new(), depth: 0 };
    for item in &file.items {
        match item {
            SolTopItem::Pragma(o) | SolTopItem::Opaque(o) => p.raw_lines(&o.raw),
            SolTopItem::Contract(c) => p.contract(c),
        }
    }
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

    fn contract(&mut self, c: &SolContract) {
        let inherits = c.inherits_raw.as_deref().map(|s| format!(" {s}")).unwrap_or_default();
        self.line(&format!("contract {}{} {{", c.name, inherits));
        self.depth += 1;
        for member in &c.members {
            match member {
                SolMember::StateVar(v) => self.state_var(v),
                SolMember::Function(f) => self.function(f),
                SolMember::Modifier(m) => self.modifier_decl(m),
                SolMember::Struct(s) => self.struct_decl(s),
                SolMember::Using(o) | SolMember::Opaque(o) => self.raw_lines(&o.raw),
            }
        }
        self.depth -= 1;
        self.line("}");
    }

    fn state_var(&mut self, v: &StateVarDecl) {
        let mut s = type_text(&v.ty);
        match v.visibility {
            SolVisibility::Public => s.push_str(" public"),
            SolVisibility::Internal => s.push_str(" internal"),
            SolVisibility::Private => s.push_str(" private"),
            SolVisibility::External | SolVisibility::Default => {}
        }
        if v.is_constant {
            s.push_str(" constant");
        }
        s.push(' ');
        s.push_str(&v.name);
        if let Some(init) = &v.init {
            s.push_str(" = ");
            s.push_str(&expr_text(init));
        }
        s.push(';');
        self.line(&s);
    }

    fn struct_decl(&mut self, d: &SolStructDecl) {
        self.line(&format!("struct {} {{", d.name));
        self.depth += 1;
        for (name, ty) in &d.fields {
            self.line(&format!("{} {};", type_text(ty), name));
        }
        self.depth -= 1;
        self.line("}");
    }

    fn modifier_decl(&mut self, m: &ModifierDecl) {
        let params = m.params_raw.as_deref().unwrap_or("");
        self.line(&format!("modifier {}{} {{", m.name, params));
        self.block_stmts(&m.body);
        self.line("}");
    }

    fn function(&mut self, f: &SolFunction) {
        let header = function_header(f);
        match &f.body {
            Some(body) => {
                self.line(&format!("{header} {{"));
                self.block_stmts(body);
                self.line("}");
            }
            None => self.line(&format!("{header};")),
        }
    }

    fn block_stmts(&mut self, block: &SolBlock) {
        self.depth += 1;
        for stmt in &block.stmts {
            self.stmt(stmt);
        }
        self.depth -= 1;
    }

    fn stmt(&mut self, stmt: &SolStmt) {
        match stmt {
            SolStmt::VarDecl { ty, loc, name, init, .. } => {
                let mut s = type_text(ty);
                if let Some(loc) = loc {
                    s.push(' ');
                    s.push_str(loc.as_str());
                }
                s.push(' ');
                s.push_str(name);
                if let Some(e) = init {
                    s.push_str(" = ");
                    s.push_str(&expr_text(e));
                }
                s.push(';');
                self.line(&s);
            }
            SolStmt::Expr { expr, .. } => {
                self.line(&format!("{};", expr_text(expr)));
            }
            SolStmt::If { cond, then_branch, else_branch, .. } => {
                self.line(&format!("if ({}) {{", expr_text(cond)));
                self.branch(then_branch);
                match else_branch {
                    Some(e) => {
                        self.line("} else {");
                        self.branch(e);
                        self.line("}");
                    }
                    None => self.line("}"),
                }
            }
            SolStmt::While { cond, body, .. } => {
                self.line(&format!("while ({}) {{", expr_text(cond)));
                self.branch(body);
                self.line("}");
            }
            SolStmt::For { init, cond, update, body, .. } => {
                let init_text = match init {
                    Some(s) => stmt_inline_text(s),
                    None => ";".to_string(),
                };
                let cond_text = cond.as_ref().map(expr_text).unwrap_or_default();
                let update_text = update.as_ref().map(|e| expr_text(e)).unwrap_or_default();
                self.line(&format!("for ({init_text} {cond_text}; {update_text}) {{"));
                self.branch(body);
                self.line("}");
            }
            SolStmt::Block(b) => {
                self.line("{");
                self.block_stmts(b);
                self.line("}");
            }
            SolStmt::Return { value, .. } => match value {
                Some(e) => self.line(&format!("return {};", expr_text(e))),
                None => self.line("return;"),
            },
            SolStmt::Emit { call, .. } => self.line(&format!("emit {};", expr_text(call))),
            SolStmt::Opaque(o) => self.raw_lines(&o.raw),
        }
    }

    /// Print a control-flow body; single statements brace-wrap so the
    /// printed form reparses to a block. Block bodies inline their
    /// statements since the header already opened a brace.
    fn branch(&mut self, body: &SolStmt) {
        match body {
            SolStmt::Block(b) => self.block_stmts(b),
            other => {
                self.depth += 1;
                self.stmt(other);
                self.depth -= 1;
            }
        }
    }
}

pub fn function_header(f: &SolFunction) -> String {
    let mut s = if f.name == "constructor" {
        "constructor".to_string()
    } else if f.name.is_empty() {
        "function".to_string()
    } else {
        format!("function {}", f.name)
    };
    s.push('(');
    s.push_str(&params_text(&f.params));
    s.push(')');
    match f.visibility {
        SolVisibility::Public => s.push_str(" public"),
        SolVisibility::External => s.push_str(" external"),
        SolVisibility::Internal => s.push_str(" internal"),
        SolVisibility::Private => s.push_str(" private"),
        SolVisibility::Default => {}
    }
    match f.mutability {
        Mutability::Payable => s.push_str(" payable"),
        Mutability::View => s.push_str(" view"),
        Mutability::Pure => s.push_str(" pure"),
        Mutability::None => {}
    }
    for m in &f.modifiers {
        s.push(' ');
        s.push_str(&m.name);
        if let Some(args) = &m.args_raw {
            s.push_str(args);
        }
    }
    if !f.returns.is_empty() {
        s.push_str(&format!(" returns ({})", params_text(&f.returns)));
    }
    s
}

fn params_text(params: &[SolParam]) -> String {
    params
        .iter()
        .map(|p| {
            let mut s = type_text(&p.ty);
            if let Some(loc) = p.loc {
                s.push(' ');
                s.push_str(loc.as_str());
            }
            if let Some(name) = &p.name {
                s.push(' ');
                s.push_str(name);
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn stmt_inline_text(stmt: &SolStmt) -> String {
    match stmt {
        SolStmt::VarDecl { ty, loc, name, init, .. } => {
            let mut s = type_text(ty);
            if let Some(loc) = loc {
                s.push(' ');
                s.push_str(loc.as_str());
            }
            s.push(' ');
            s.push_str(name);
            if let Some(e) = init {
                s.push_str(" = ");
                s.push_str(&expr_text(e));
            }
            s.push(';');
            s
        }
        SolStmt::Expr { expr, .. } => format!("{};", expr_text(expr)),
        _ => ";".to_string(),
    }
}

pub fn type_text(ty: &SolType) -> String {
    match ty {
        SolType::Elementary(name) | SolType::Named(name) => name.clone(),
        SolType::Mapping { key, value } => {
            format!("mapping({} => {})", type_text(key), type_text(value))
        }
        SolType::Array { elem, len } => match len {
            Some(n) => format!("{}[{}]", type_text(elem), n),
            None => format!("{}[]", type_text(elem)),
        },
    }
}

pub fn expr_text(expr: &SolExpr) -> String {
    match &expr.kind {
        SolExprKind::NumberLit { text, unit } => match unit {
            Some(u) => format!("{text} {u}"),
            None => text.clone(),
        },
        SolExprKind::StringLit(s) => s.clone(),
        SolExprKind::BoolLit(b) => b.to_string(),
        SolExprKind::Ident(name) => name.clone(),
        SolExprKind::Atom(a) => a.as_str().to_string(),
        SolExprKind::Member { base, member } => format!("{}.{}", expr_text(base), member),
        SolExprKind::Index { base, index } => {
            format!("{}[{}]", expr_text(base), expr_text(index))
        }
        SolExprKind::Call { callee, args } => {
            format!("{}({})", expr_text(callee), args_text(args))
        }
        SolExprKind::ExternalCall { base, form, value, gas, args } => {
            let base = expr_text(base);
            match form {
                CallForm::Transfer => format!("{base}.transfer({})", opt_text(value)),
                CallForm::Send => format!("{base}.send({})", opt_text(value)),
                CallForm::BareCall => format!("{base}.call({})", args_text(args)),
                CallForm::CallValueLegacy => {
                    let gas_part = gas
                        .as_ref()
                        .map(|g| format!(".gas({})", expr_text(g)))
                        .unwrap_or_default();
                    format!("{base}.call.value({}){}({})", opt_text(value), gas_part, args_text(args))
                }
                CallForm::CallValueOptions => {
                    let mut opts = Vec::new();
                    if let Some(v) = value {
                        opts.push(format!("value: {}", expr_text(v)));
                    }
                    if let Some(g) = gas {
                        opts.push(format!("gas: {}", expr_text(g)));
                    }
                    format!("{base}.call{{{}}}({})", opts.join(", "), args_text(args))
                }
            }
        }
        SolExprKind::New { ty } => format!("new {}", type_text(ty)),
        SolExprKind::Binary { op, lhs, rhs } => {
            format!("{} {} {}", expr_text(lhs), op.as_str(), expr_text(rhs))
        }
        SolExprKind::Unary { op, prefix, expr: inner } => {
            if *prefix {
                format!("{}{}", op, expr_text(inner))
            } else {
                format!("{}{}", expr_text(inner), op)
            }
        }
        SolExprKind::Assign { op, lhs, rhs } => {
            format!("{} {} {}", expr_text(lhs), op.as_str(), expr_text(rhs))
        }
        SolExprKind::Ternary { cond, then_expr, else_expr } => {
            format!("{} ? {} : {}", expr_text(cond), expr_text(then_expr), expr_text(else_expr))
        }
        SolExprKind::Paren(inner) => format!("({})", expr_text(inner)),
    }
}

fn args_text(args: &[SolExpr]) -> String {
    args.iter().map(expr_text).collect::<Vec<_>>().join(", ")
}

fn opt_text(value: &Option<Box<SolExpr>>) -> String {
    value.as_ref().map(|v| expr_text(v)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sol_lang::parser::parse_sol;

    fn round_trip(text: &str) {
        let first = parse_sol(text).expect("fixture parses");
        let printed = print_sol(&first);
        let second = parse_sol(&printed)
            .unwrap_or_else(|e| panic!("printed output must reparse: {e}\n{printed}"));
        assert_eq!(
            normalize_sol_file(&first),
            normalize_sol_file(&second),
            "round trip changed structure:\n{printed}"
        );
    }

    #[test]
    fn minimal_contract_round_trips() {
        round_trip("pragma solidity ^0.8.0; contract C {}");
    }

    #[test]
    fn withdraw_pattern_round_trips() {
        round_trip(
            r#"pragma solidity ^0.4.24;
contract Vault {
    mapping(address => uint256) balances;
    function withdraw() public {
        uint256 amount = balances[msg.sender];
        require(msg.sender.call.value(amount)());
        balances[msg.sender] = 0;
    }
}"#,
        );
    }

    #[test]
    fn opaque_event_bytes_unchanged() {
        let text = "contract C { event Transfer(address indexed from, uint256 value); }";
        let file = parse_sol(text).unwrap();
        let printed = print_sol(&file);
        assert!(printed.contains("event Transfer(address indexed from, uint256 value);"));
        round_trip(text);
    }

    #[test]
    fn loops_and_modifiers_round_trip() {
        round_trip(
            r#"pragma solidity ^0.4.24;
contract Dividends {
    address owner;
    address[] public holders;
    modifier onlyOwner() { require(msg.sender == owner); _; }
    function payAll() public onlyOwner {
        for (uint i = 0; i < holders.length; i++) {
            holders[i].transfer(1 ether);
        }
    }
}"#,
        );
    }
}
