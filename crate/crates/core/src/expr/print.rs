use std::fmt::Write;

use super::{Domain, Expr, Owner, Section, Specification, Term, VarDecl, VarRef};

fn write_ref(out: &mut String, r: VarRef, vars: &[VarDecl]) {
    match vars.get(r.var) {
        Some(v) => out.push_str(&v.name),
        None => {
            let _ = write!(out, "#{}", r.var);
        }
    }
    if r.primed {
        out.push('\'');
    }
}

fn write_term(out: &mut String, t: &Term, vars: &[VarDecl]) {
    match t {
        Term::Int(v) => {
            let _ = write!(out, "{v}");
        }
        Term::Var(r) => write_ref(out, *r, vars),
        Term::Add(a, b) | Term::Sub(a, b) => {
            out.push('(');
            write_term(out, a, vars);
            out.push_str(if matches!(t, Term::Add(..)) {
                " + "
            } else {
                " - "
            });
            write_term(out, b, vars);
            out.push(')');
        }
    }
}

fn write_expr(out: &mut String, e: &Expr, vars: &[VarDecl]) {
    let binary = |out: &mut String, a: &Expr, op: &str, b: &Expr| {
        out.push('(');
        write_expr(out, a, vars);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_expr(out, b, vars);
        out.push(')');
    };
    match e {
        Expr::Const(true) => out.push_str("true"),
        Expr::Const(false) => out.push_str("false"),
        Expr::Atom(r) => write_ref(out, *r, vars),
        Expr::Not(inner) => {
            out.push('!');
            match **inner {
                Expr::Cmp(..) => {
                    out.push('(');
                    write_expr(out, inner, vars);
                    out.push(')');
                }
                _ => write_expr(out, inner, vars),
            }
        }
        Expr::And(a, b) => binary(out, a, "&", b),
        Expr::Or(a, b) => binary(out, a, "|", b),
        Expr::Implies(a, b) => binary(out, a, "->", b),
        Expr::Iff(a, b) => binary(out, a, "<->", b),
        Expr::Cmp(op, a, b) => {
            write_term(out, a, vars);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_term(out, b, vars);
        }
    }
}

/// Renders a formula in the textual syntax. Binary connectives are fully
/// parenthesised, so reparsing yields the same tree.
pub fn print_expr(e: &Expr, vars: &[VarDecl]) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, vars);
    out
}

/// Renders a specification in the sectioned text format.
pub fn print_spec(spec: &Specification) -> String {
    let mut out = String::new();
    for (header, owner) in [(Section::Input, Owner::Env), (Section::Output, Owner::Sys)] {
        out.push_str(header.header());
        out.push('\n');
        for v in spec.vars.iter().filter(|v| v.owner == owner) {
            let _ = match v.domain {
                Domain::Bool => writeln!(out, "{} : bool", v.name),
                Domain::Int { lo, hi } => writeln!(out, "{} : {lo}..{hi}", v.name),
            };
        }
        out.push('\n');
    }
    for (section, list) in spec.sections() {
        if list.is_empty() {
            continue;
        }
        out.push_str(section.header());
        out.push('\n');
        for e in list {
            out.push_str(&print_expr(e, &spec.vars));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
