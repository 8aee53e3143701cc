//! Canonical printing. Output reparses to a structurally equal tree, using
//! the fewest parentheses the grammar allows.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::{Clause, Expr, Literal, Param, Program};

// Binding strength of each printed form; larger binds tighter.
const IF: u8 = 0;
const CHOICE: u8 = 1;
const CMP: u8 = 2;
const ADD: u8 = 3;
const MUL: u8 = 4;
const ATOM: u8 = 5;

fn infix_prec(name: &str) -> Option<u8> {
    match name {
        "==" | "!=" | "<" | "<=" | ">" | ">=" => Some(CMP),
        "+" | "-" => Some(ADD),
        "*" | "/" | "mod" => Some(MUL),
        _ => None,
    }
}

fn prec(expr: &Expr) -> u8 {
    match expr {
        Expr::Choice(_) => CHOICE,
        Expr::If(..) => IF,
        Expr::Call(name, args) if args.len() == 2 => infix_prec(name).unwrap_or(ATOM),
        _ => ATOM,
    }
}

/// Splits a `cons` chain into its elements and final tail.
fn list_spine(expr: &Expr) -> Option<(Vec<&Expr>, &Expr)> {
    let mut elems = Vec::new();
    let mut cur = expr;
    while let Expr::Call(name, args) = cur {
        if name.as_str() != "cons" || args.len() != 2 {
            break;
        }
        elems.push(&args[0]);
        cur = &args[1];
    }
    if elems.is_empty() {
        None
    } else {
        Some((elems, cur))
    }
}

fn is_nil(expr: &Expr) -> bool {
    matches!(expr, Expr::Lit(Literal::Atom(a)) if a.as_str() == "nil")
}

fn write_expr(f: &mut Formatter<'_>, expr: &Expr, ctx: u8) -> fmt::Result {
    let own = prec(expr);
    if own < ctx {
        f.write_char('(')?;
        write_expr(f, expr, IF)?;
        return f.write_char(')');
    }
    match expr {
        Expr::Lit(lit) => write!(f, "{lit}"),
        Expr::Var(name) => write!(f, "{name}"),
        Expr::Choice(branches) => {
            for (i, branch) in branches.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ++ ")?;
                }
                write_expr(f, branch, CHOICE + 1)?;
            }
            Ok(())
        }
        Expr::If(c, t, e) => {
            f.write_str("if ")?;
            write_expr(f, c, IF)?;
            f.write_str(" then ")?;
            write_expr(f, t, IF)?;
            f.write_str(" else ")?;
            write_expr(f, e, IF)
        }
        Expr::Call(name, args) => {
            if own != ATOM {
                let (lhs_ctx, rhs_ctx) = if own == CMP { (own + 1, own + 1) } else { (own, own + 1) };
                write_expr(f, &args[0], lhs_ctx)?;
                write!(f, " {name} ")?;
                return write_expr(f, &args[1], rhs_ctx);
            }
            if name.as_str() == "fail" && args.is_empty() {
                return f.write_str("fail");
            }
            if let Some((elems, tail)) = list_spine(expr) {
                if is_nil(tail) {
                    f.write_char('[')?;
                    write_list(f, elems.into_iter())?;
                    return f.write_char(']');
                }
            }
            write!(f, "{name}(")?;
            write_list(f, args.iter())?;
            f.write_char(')')
        }
    }
}

fn write_list<'a>(f: &mut Formatter<'_>, items: impl Iterator<Item = &'a Expr>) -> fmt::Result {
    for (i, item) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_expr(f, item, IF)?;
    }
    Ok(())
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(n) => write!(f, "{n}"),
            Literal::Atom(name) => write!(f, "{name}"),
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_expr(f, self, IF)
    }
}

impl Display for Param {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Param::Var(name) => write!(f, "{name}"),
            Param::Const(lit) => write!(f, "{lit}"),
        }
    }
}

/// Head of a clause, e.g. `fact(n)`.
pub struct Head<'a>(pub &'a Clause);

impl Display for Head<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.0.name)?;
        for (i, p) in self.0.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_char(')')
    }
}

impl Display for Clause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", Head(self), self.body)
    }
}

/// One clause per line, each terminated by `;`.
impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for clause in self.clauses() {
            writeln!(f, "{clause};")?;
        }
        Ok(())
    }
}

pub fn pretty(item: &impl Display) -> String {
    item.to_string()
}
