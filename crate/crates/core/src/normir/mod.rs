//! Normalised IR: flat equations whose sub-terms are names, with explicit
//! blocks for the lazily evaluated positions (`if` branches, `either`
//! fallback, `fby` operands).

pub mod copyprop;
pub mod eval;
pub mod normalise;
pub mod wf;

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::frontend::ast::Literal;
use crate::types::Type;

pub use copyprop::copy_propagate;
pub use eval::{NormInstance, NormInterpreter};
pub use normalise::{flatten_pattern, normalise_expr, normalise_program, normalise_step, Fresh};
pub use wf::check_wellformed;

#[derive(Debug, Clone, PartialEq)]
pub enum NormBase {
    Var(String),
    Const(Literal),
    None,
    SomeVar(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormExpr {
    Base(NormBase),
    Tuple(Vec<String>),
    Pre(String),
    Fby(Block, Block),
    App(String, String),
    If(String, Block, Block),
    Either(String, Block),
}

/// `x = e` when the pattern has one name, `x1, ..., xn = e` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEq {
    pub pattern: Vec<String>,
    pub expr: NormExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub eqs: Vec<NormEq>,
    pub result: NormBase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormStep {
    pub name: String,
    pub input: String,
    pub input_ty: Type,
    pub output: String,
    pub output_ty: Type,
    pub body: Block,
    /// Type of every name bound in the step, including the input.
    pub locals: BTreeMap<String, Type>,
    /// Next value of the fresh-name counter; later phases continue from here.
    pub next_fresh: u32,
}

/// An externally implemented step.
#[derive(Debug, Clone, PartialEq)]
pub struct Prototype {
    pub name: String,
    pub input_ty: Type,
    pub output_ty: Type,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NormProgram {
    pub steps: Vec<NormStep>,
    pub prototypes: Vec<Prototype>,
}

impl NormProgram {
    pub fn step(&self, name: &str) -> Option<&NormStep> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn prototype(&self, name: &str) -> Option<&Prototype> {
        self.prototypes.iter().find(|p| p.name == name)
    }
}

impl NormBase {
    pub fn var(name: impl Into<String>) -> Self {
        NormBase::Var(name.into())
    }

    /// Names read by this base expression.
    pub fn uses(&self) -> Option<&str> {
        match self {
            NormBase::Var(v) | NormBase::SomeVar(v) => Some(v),
            _ => None,
        }
    }

    pub fn rename(&mut self, from: &str, to: &str) {
        match self {
            NormBase::Var(v) | NormBase::SomeVar(v) if v == from => *v = to.to_string(),
            _ => {}
        }
    }
}

impl Block {
    pub fn new(eqs: Vec<NormEq>, result: NormBase) -> Self {
        Block { eqs, result }
    }

    /// Renames every use (not definition) of `from`, in nested blocks too.
    pub fn rename_uses(&mut self, from: &str, to: &str) {
        for eq in &mut self.eqs {
            eq.expr.rename_uses(from, to);
        }
        self.result.rename(from, to);
    }

    /// Counts uses of `name` anywhere in the block.
    pub fn count_uses(&self, name: &str) -> usize {
        self.eqs.iter().map(|e| e.expr.count_uses(name)).sum::<usize>() + usize::from(self.result.uses() == Some(name))
    }
}

impl NormExpr {
    pub fn rename_uses(&mut self, from: &str, to: &str) {
        let r = |v: &mut String| {
            if v == from {
                *v = to.to_string();
            }
        };
        match self {
            NormExpr::Base(b) => b.rename(from, to),
            NormExpr::Tuple(vs) => vs.iter_mut().for_each(r),
            NormExpr::Pre(v) | NormExpr::App(_, v) => r(v),
            NormExpr::Fby(a, b) => {
                a.rename_uses(from, to);
                b.rename_uses(from, to);
            }
            NormExpr::If(c, a, b) => {
                r(c);
                a.rename_uses(from, to);
                b.rename_uses(from, to);
            }
            NormExpr::Either(x, b) => {
                r(x);
                b.rename_uses(from, to);
            }
        }
    }

    pub fn count_uses(&self, name: &str) -> usize {
        let c = |v: &String| usize::from(v == name);
        match self {
            NormExpr::Base(b) => usize::from(b.uses() == Some(name)),
            NormExpr::Tuple(vs) => vs.iter().map(c).sum(),
            NormExpr::Pre(v) | NormExpr::App(_, v) => c(v),
            NormExpr::Fby(a, b) => a.count_uses(name) + b.count_uses(name),
            NormExpr::If(x, a, b) => c(x) + a.count_uses(name) + b.count_uses(name),
            NormExpr::Either(x, b) => c(x) + b.count_uses(name),
        }
    }
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Unit => "()".into(),
        Literal::Bool(b) => b.to_string(),
        Literal::Int(i) => i.to_string(),
        Literal::Float(x) => format!("{:?}", x),
    }
}

impl fmt::Display for NormBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormBase::Var(v) => f.write_str(v),
            NormBase::Const(c) => f.write_str(&literal(c)),
            NormBase::None => f.write_str("None"),
            NormBase::SomeVar(v) => write!(f, "Some {}", v),
        }
    }
}

fn dump_block(b: &Block, indent: usize, out: &mut String) {
    if b.eqs.is_empty() {
        let _ = write!(out, "[] {}", b.result);
        return;
    }
    out.push_str("[\n");
    for eq in &b.eqs {
        dump_eq(eq, indent + 1, out);
    }
    let _ = write!(out, "{}] {}", "  ".repeat(indent), b.result);
}

fn dump_eq(eq: &NormEq, indent: usize, out: &mut String) {
    let _ = write!(out, "{}{} = ", "  ".repeat(indent), eq.pattern.join(", "));
    match &eq.expr {
        NormExpr::Base(b) => {
            let _ = write!(out, "{}", b);
        }
        NormExpr::Tuple(vs) => {
            let _ = write!(out, "({})", vs.join(", "));
        }
        NormExpr::Pre(v) => {
            let _ = write!(out, "pre {}", v);
        }
        NormExpr::App(f, x) => {
            let _ = write!(out, "{} {}", f, x);
        }
        NormExpr::Fby(a, b) => {
            dump_block(a, indent, out);
            out.push_str(" fby ");
            dump_block(b, indent, out);
        }
        NormExpr::If(c, a, b) => {
            let _ = write!(out, "if {} then ", c);
            dump_block(a, indent, out);
            out.push_str(" else ");
            dump_block(b, indent, out);
        }
        NormExpr::Either(x, b) => {
            let _ = write!(out, "either {} or ", x);
            dump_block(b, indent, out);
        }
    }
    out.push_str(";\n");
}

/// Stable textual form: one equation per line, nested blocks indented.
pub fn dump_step(s: &NormStep) -> String {
    let mut out = format!("step {} ({} : {}) --> ({} : {})\n", s.name, s.input, s.input_ty, s.output, s.output_ty);
    dump_block(&s.body, 0, &mut out);
    out.push('\n');
    out
}

pub fn dump_program(p: &NormProgram) -> String {
    let mut parts: Vec<String> = p
        .prototypes
        .iter()
        .map(|pr| format!("prototype {} : {} -> {}\n", pr.name, pr.input_ty, pr.output_ty))
        .collect();
    parts.extend(p.steps.iter().map(dump_step));
    parts.join("\n")
}
