//! Concrete-syntax printer. Output re-parses to the same tree.

use std::fmt::Write;

use crate::builtins::{self, Shape};

use super::ast::*;

pub fn pretty(p: &Program) -> String {
    let mut sections = Vec::new();
    if !p.steps.is_empty() {
        let steps: Vec<String> = p.steps.iter().map(pretty_step).collect();
        sections.push(steps.join("\n\n"));
    }
    if !p.channels.is_empty() {
        let chans: Vec<String> =
            p.channels.iter().map(|c| format!("channel {} : {}", c.name, pretty_type(&c.ty))).collect();
        sections.push(chans.join("\n"));
    }
    if !p.nodes.is_empty() {
        let nodes: Vec<String> = p.nodes.iter().map(pretty_node).collect();
        sections.push(nodes.join("\n"));
    }
    if sections.is_empty() {
        return String::new();
    }
    let mut out = sections.join("\n\n");
    out.push('\n');
    out
}

pub fn pretty_step(s: &StepDecl) -> String {
    let mut out = format!("step {} {} --> {}", s.name, params(&s.inputs), params(&s.outputs));
    if let Some(body) = &s.body {
        out.push_str("\n{\n");
        for eq in body {
            let _ = writeln!(out, "  {};", pretty_equation(eq));
        }
        out.push('}');
    }
    out
}

pub fn pretty_equation(eq: &Equation) -> String {
    format!("{} = {}", pretty_pattern(&eq.pattern, true), pretty_expr(&eq.expr))
}

fn params(ps: &[Param]) -> String {
    if ps.is_empty() {
        return "()".into();
    }
    let items: Vec<String> =
        ps.iter().map(|p| format!("{} : {}", p.name.as_deref().unwrap_or("_"), pretty_type(&p.ty))).collect();
    format!("({})", items.join(", "))
}

fn ports(ps: &[Port]) -> String {
    if ps.is_empty() {
        return "()".into();
    }
    let items: Vec<String> = ps.iter().map(|p| format!("{}{}", p.channel, if p.optional { "?" } else { "" })).collect();
    format!("({})", items.join(", "))
}

pub fn pretty_duration(us: u64) -> String {
    if us != 0 && us.is_multiple_of(1_000_000) {
        format!("{}s", us / 1_000_000)
    } else if us != 0 && us.is_multiple_of(1_000) {
        format!("{}ms", us / 1_000)
    } else {
        format!("{}us", us)
    }
}

fn pretty_node(n: &NodeDecl) -> String {
    format!(
        "node {} implements {} {} --> {} every {}",
        n.name,
        n.step,
        ports(&n.inputs),
        ports(&n.outputs),
        pretty_duration(n.period_us)
    )
}

pub fn pretty_type(t: &TypeExpr) -> String {
    match t {
        TypeExpr::Unit => "unit".into(),
        TypeExpr::Bool => "bool".into(),
        TypeExpr::Int => "int".into(),
        TypeExpr::Float => "float".into(),
        TypeExpr::Option(t) => format!("{}?", pretty_type(t)),
        TypeExpr::Tuple(ts) => {
            let items: Vec<String> = ts.iter().map(pretty_type).collect();
            format!("({})", items.join(", "))
        }
        TypeExpr::Var(v) => format!("'{}", v),
    }
}

pub fn pretty_pattern(p: &Pattern, top: bool) -> String {
    match &p.kind {
        PatternKind::Var(v) => v.clone(),
        PatternKind::Wildcard => "_".into(),
        PatternKind::Tuple(ps) => {
            let items: Vec<String> = ps.iter().map(|p| pretty_pattern(p, false)).collect();
            if top {
                items.join(", ")
            } else {
                format!("({})", items.join(", "))
            }
        }
    }
}

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    print_expr(e, 0, &mut out);
    out
}

enum Op {
    Infix(&'static str, u8),
    Prefix(&'static str),
}

fn operator(e: &Expr) -> Option<Op> {
    let ExprKind::App(name, arg) = &e.kind else {
        return None;
    };
    let b = builtins::generic(name).or_else(|| builtins::resolved(name).map(|(b, _)| b))?;
    match b.shape {
        Shape::Unary => Some(Op::Prefix(b.symbol)),
        _ => {
            if !matches!(&arg.kind, ExprKind::Tuple(items) if items.len() == 2) {
                return None;
            }
            let level = match b.name {
                "lor" => 3,
                "land" => 4,
                "eq" | "ne" | "lt" | "le" | "gt" | "ge" => 5,
                "add" | "sub" => 6,
                _ => 7,
            };
            Some(Op::Infix(b.symbol, level))
        }
    }
}

fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Tuple(_) => 0,
        ExprKind::Arrow(..) | ExprKind::If(..) | ExprKind::Either(..) => 1,
        ExprKind::Fby(..) => 2,
        ExprKind::Pre(_) | ExprKind::Some(_) => 8,
        ExprKind::App(..) => match operator(e) {
            Some(Op::Infix(_, l)) => l,
            Some(Op::Prefix(_)) => 8,
            None => 9,
        },
        ExprKind::Var(_) | ExprKind::Const(_) | ExprKind::None => 10,
    }
}

fn print_expr(e: &Expr, min: u8, out: &mut String) {
    let paren = level(e) < min;
    if paren {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Var(v) => out.push_str(v),
        ExprKind::Const(c) => match c {
            Literal::Unit => out.push_str("()"),
            Literal::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Literal::Int(i) => out.push_str(&i.to_string()),
            Literal::Float(x) => out.push_str(&format!("{:?}", x)),
        },
        ExprKind::None => out.push_str("None"),
        ExprKind::Tuple(items) => {
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(it, 1, out);
            }
        }
        ExprKind::Arrow(a, b) => {
            print_expr(a, 2, out);
            out.push_str(" -> ");
            print_expr(b, 1, out);
        }
        ExprKind::Fby(a, b) => {
            print_expr(a, 3, out);
            out.push_str(" fby ");
            print_expr(b, 2, out);
        }
        ExprKind::Pre(x) => {
            out.push_str("pre ");
            print_expr(x, 8, out);
        }
        ExprKind::Some(x) => {
            out.push_str("Some ");
            print_expr(x, 8, out);
        }
        ExprKind::If(c, t, f) => {
            out.push_str("if ");
            print_expr(c, 1, out);
            out.push_str(" then ");
            print_expr(t, 1, out);
            out.push_str(" else ");
            print_expr(f, 1, out);
        }
        ExprKind::Either(a, b) => {
            out.push_str("either ");
            print_expr(a, 1, out);
            out.push_str(" or ");
            print_expr(b, 1, out);
        }
        ExprKind::App(name, arg) => match operator(e) {
            Some(Op::Infix(sym, l)) => {
                let ExprKind::Tuple(items) = &arg.kind else { unreachable!() };
                let (lmin, rmin) = if l == 5 { (6, 6) } else { (l, l + 1) };
                print_expr(&items[0], lmin, out);
                let _ = write!(out, " {} ", sym);
                print_expr(&items[1], rmin, out);
            }
            Some(Op::Prefix(sym)) => {
                out.push_str(sym);
                print_expr(arg, 8, out);
            }
            None => {
                out.push_str(name);
                out.push(' ');
                print_expr(arg, 10, out);
            }
        },
    }
    if paren {
        out.push(')');
    }
}
