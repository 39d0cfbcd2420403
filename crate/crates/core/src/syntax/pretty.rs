//! Source rendering for syntax trees. The output re-parses to an equal tree.

use std::fmt::{self, Write};

use super::ast::*;

impl fmt::Display for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Sub(sub) => write_sub(&mut out, sub)?,
                Item::Stmt(stmt) => write_stmt(&mut out, stmt, 0)?,
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_expr(&mut out, self)?;
        f.write_str(&out)
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_sub(out: &mut String, sub: &SubDecl) -> fmt::Result {
    if sub.cond {
        out.push_str("cond ");
    }
    match sub.return_type {
        Some(t) => out.push_str(t.keyword()),
        None => out.push_str(sub.kind.keyword()),
    }
    write!(out, " {}(", sub.name)?;
    for (i, p) in sub.params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{} {}", p.ty, p.name)?;
    }
    out.push_str(") ");
    write_block(out, &sub.body, 0)?;
    out.push('\n');
    Ok(())
}

fn write_block(out: &mut String, block: &Block, depth: usize) -> fmt::Result {
    out.push_str("{\n");
    for stmt in block {
        write_stmt(out, stmt, depth + 1)?;
    }
    indent(out, depth);
    out.push('}');
    Ok(())
}

fn write_stmt(out: &mut String, stmt: &Stmt, depth: usize) -> fmt::Result {
    indent(out, depth);
    match &stmt.kind {
        StmtKind::VarDecl { ty, name, init } => {
            write!(out, "{} {name}", ty.keyword())?;
            if let Some(e) = init {
                out.push_str(" = ");
                write_expr(out, e)?;
            }
            out.push(';');
        }
        StmtKind::ConstDecl { name, value } => {
            write!(out, "const {name} = ")?;
            write_expr(out, value)?;
            out.push(';');
        }
        StmtKind::RegAlloc { name, size } => {
            write!(out, "qureg {name}[")?;
            write_expr(out, size)?;
            out.push_str("];");
        }
        StmtKind::RegAlias { ty, name, value } => {
            write!(out, "{} {name} = ", ty.keyword())?;
            write_expr(out, value)?;
            out.push(';');
        }
        StmtKind::Assign { name, value } => {
            write!(out, "{name} = ")?;
            write_expr(out, value)?;
            out.push(';');
        }
        StmtKind::Call { name, args, invert } => {
            if *invert {
                out.push('!');
            }
            write!(out, "{name}(")?;
            write_args(out, args)?;
            out.push_str(");");
        }
        StmtKind::If { cond, then_block, else_block, .. } => {
            out.push_str("if ");
            write_expr(out, cond)?;
            out.push(' ');
            write_block(out, then_block, depth)?;
            if let Some(b) = else_block {
                out.push_str(" else ");
                write_block(out, b, depth)?;
            }
        }
        StmtKind::For { var, from, to, step, body } => {
            write!(out, "for {var} = ")?;
            write_expr(out, from)?;
            out.push_str(" to ");
            write_expr(out, to)?;
            if let Some(s) = step {
                out.push_str(" step ");
                write_expr(out, s)?;
            }
            out.push(' ');
            write_block(out, body, depth)?;
        }
        StmtKind::While { cond, body } => {
            out.push_str("while ");
            write_expr(out, cond)?;
            out.push(' ');
            write_block(out, body, depth)?;
        }
        StmtKind::Measure { reg, target } => {
            out.push_str("measure ");
            write_expr(out, reg)?;
            if let Some(t) = target {
                write!(out, ", {t}")?;
            }
            out.push(';');
        }
        StmtKind::Reset => out.push_str("reset;"),
        StmtKind::Dump => out.push_str("dump;"),
        StmtKind::Exit => out.push_str("exit;"),
        StmtKind::Print(args) => {
            out.push_str("print ");
            write_args(out, args)?;
            out.push(';');
        }
        StmtKind::Return(value) => {
            out.push_str("return");
            if let Some(v) = value {
                out.push(' ');
                write_expr(out, v)?;
            }
            out.push(';');
        }
        StmtKind::Block(b) => write_block(out, b, depth)?,
    }
    out.push('\n');
    Ok(())
}

fn write_args(out: &mut String, args: &[Expr]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a)?;
    }
    Ok(())
}

fn write_operand(out: &mut String, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        out.push('(');
        write_expr(out, e)?;
        out.push(')');
        Ok(())
    } else {
        write_expr(out, e)
    }
}

fn binary_prec(e: &Expr) -> Option<u8> {
    match &e.kind {
        ExprKind::Binary(op, _, _) => Some(op.precedence()),
        _ => None,
    }
}

/// Whether `e` must be parenthesized before `[...]`.
fn needs_parens_as_base(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Binary(..) | ExprKind::Unary(..))
}

fn write_expr(out: &mut String, e: &Expr) -> fmt::Result {
    match &e.kind {
        ExprKind::Int(v) => write!(out, "{v}"),
        ExprKind::Real(v) => write!(out, "{v:?}"),
        ExprKind::Complex(re, im) => {
            out.push('(');
            write_expr(out, re)?;
            out.push_str(", ");
            write_expr(out, im)?;
            out.push(')');
            Ok(())
        }
        ExprKind::Var(name) => write!(out, "{name}"),
        ExprKind::Unary(op, a) => {
            out.push_str(match op {
                UnaryOp::Neg => "-",
                UnaryOp::Not => "not ",
                UnaryOp::Length => "#",
            });
            write_operand(out, a, binary_prec(a).is_some())
        }
        ExprKind::Binary(op, a, b) => {
            let prec = op.precedence();
            let (left_parens, right_parens) = match (binary_prec(a), binary_prec(b)) {
                (l, r) if *op == BinaryOp::Pow => (l.is_some_and(|l| l <= prec), r.is_some_and(|r| r < prec)),
                (l, r) => (l.is_some_and(|l| l < prec), r.is_some_and(|r| r <= prec)),
            };
            write_operand(out, a, left_parens)?;
            write!(out, " {} ", op.symbol())?;
            write_operand(out, b, right_parens)
        }
        ExprKind::Index(r, i) => {
            write_operand(out, r, needs_parens_as_base(r))?;
            out.push('[');
            write_expr(out, i)?;
            out.push(']');
            Ok(())
        }
        ExprKind::Slice(r, a, b) => {
            write_operand(out, r, needs_parens_as_base(r))?;
            out.push('[');
            write_expr(out, a)?;
            out.push(':');
            write_expr(out, b)?;
            out.push(']');
            Ok(())
        }
        ExprKind::Call(name, args) => {
            write!(out, "{name}(")?;
            write_args(out, args)?;
            out.push(')');
            Ok(())
        }
    }
}
