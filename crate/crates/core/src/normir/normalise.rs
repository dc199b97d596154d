//! Expression and step normalisation.

use std::collections::BTreeMap;

use crate::frontend::ast::*;
use crate::sema::TypedProgram;
use crate::types::Type;

use super::copyprop::copy_propagate;
use super::{Block, NormBase, NormEq, NormExpr, NormProgram, NormStep, Prototype};

/// Per-step fresh-name supply: `__<hint><n>` with one counter for all hints.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: u32,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh { next: 0 }
    }

    pub fn starting_at(next: u32) -> Self {
        Fresh { next }
    }

    pub fn name(&mut self, hint: &str) -> String {
        let n = format!("__{}{}", hint, self.next);
        self.next += 1;
        n
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

struct Cx<'a> {
    fresh: &'a mut Fresh,
    locals: &'a mut BTreeMap<String, Type>,
}

impl Cx<'_> {
    fn var(&mut self, hint: &str, ty: &Type) -> String {
        let n = self.fresh.name(hint);
        self.locals.insert(n.clone(), ty.clone());
        n
    }

    fn expr(&mut self, e: &Expr) -> (Vec<NormEq>, NormBase) {
        let ty = e.ty().clone();
        let bind = |p: &str, x: NormExpr| NormEq { pattern: vec![p.to_string()], expr: x };
        match &e.kind {
            ExprKind::Var(x) => (vec![], NormBase::var(x)),
            ExprKind::Const(c) => (vec![], NormBase::Const(*c)),
            ExprKind::None => (vec![], NormBase::None),
            ExprKind::Some(inner) => {
                let (mut s, b) = self.expr(inner);
                let payload = match b {
                    NormBase::Var(v) => v,
                    other => {
                        let x = self.var("x", inner.ty());
                        s.push(bind(&x, NormExpr::Base(other)));
                        x
                    }
                };
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::Base(NormBase::SomeVar(payload))));
                (s, NormBase::Var(r))
            }
            ExprKind::Arrow(e1, e2) => {
                let b1 = self.block(e1);
                let (mut s, b2) = self.expr(e2);
                let y = self.var("y", e2.ty());
                s.push(bind(&y, NormExpr::Base(b2)));
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::Fby(b1, Block::new(vec![], NormBase::var(&y)))));
                (s, NormBase::Var(r))
            }
            ExprKind::Pre(inner) => {
                let (mut s, b) = self.expr(inner);
                // A variable operand is its own alias; hoisting it into a copy would
                // read it before a later definition in feedback equations.
                let x = match b {
                    NormBase::Var(v) => v,
                    other => {
                        let x = self.var("x", inner.ty());
                        s.push(bind(&x, NormExpr::Base(other)));
                        x
                    }
                };
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::Pre(x)));
                (s, NormBase::Var(r))
            }
            ExprKind::Fby(e1, e2) => {
                let b1 = self.block(e1);
                let b2 = self.block(e2);
                let r = self.var("r", &ty);
                (vec![bind(&r, NormExpr::Fby(b1, b2))], NormBase::Var(r))
            }
            ExprKind::Tuple(es) => {
                let mut s = Vec::new();
                let mut bases = Vec::new();
                for e in es {
                    let (si, bi) = self.expr(e);
                    s.extend(si);
                    bases.push(bi);
                }
                let mut names = Vec::new();
                for (e, b) in es.iter().zip(bases) {
                    let t = self.var("t", e.ty());
                    s.push(bind(&t, NormExpr::Base(b)));
                    names.push(t);
                }
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::Tuple(names)));
                (s, NormBase::Var(r))
            }
            ExprKind::If(c, t, f) => {
                let (mut s, bc) = self.expr(c);
                let bt = self.block(t);
                let bf = self.block(f);
                let x = self.var("x", c.ty());
                s.push(bind(&x, NormExpr::Base(bc)));
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::If(x, bt, bf)));
                (s, NormBase::Var(r))
            }
            ExprKind::Either(a, b) => {
                let (mut s, ba) = self.expr(a);
                let bb = self.block(b);
                let x = self.var("x", a.ty());
                s.push(bind(&x, NormExpr::Base(ba)));
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::Either(x, bb)));
                (s, NormBase::Var(r))
            }
            ExprKind::App(f, arg) => {
                let (mut s, b) = self.expr(arg);
                let x = self.var("x", arg.ty());
                s.push(bind(&x, NormExpr::Base(b)));
                let r = self.var("r", &ty);
                s.push(bind(&r, NormExpr::App(f.clone(), x)));
                (s, NormBase::Var(r))
            }
        }
    }

    fn block(&mut self, e: &Expr) -> Block {
        let (s, b) = self.expr(e);
        Block::new(s, b)
    }

    fn flatten(&mut self, p: &Pattern, rhs: NormExpr, out: &mut Vec<NormEq>) {
        let ty = p.ty.clone().expect("typed pattern");
        match &p.kind {
            PatternKind::Var(x) => {
                self.locals.insert(x.clone(), ty);
                out.push(NormEq { pattern: vec![x.clone()], expr: rhs });
            }
            PatternKind::Wildcard => {
                let w = self.var("w", &ty);
                out.push(NormEq { pattern: vec![w], expr: rhs });
            }
            PatternKind::Tuple(ps) => {
                let mut names = Vec::new();
                let mut nested = Vec::new();
                for sub in ps {
                    let sty = sub.ty.clone().expect("typed pattern");
                    match &sub.kind {
                        PatternKind::Var(x) => {
                            self.locals.insert(x.clone(), sty);
                            names.push(x.clone());
                        }
                        PatternKind::Wildcard => names.push(self.var("w", &sty)),
                        PatternKind::Tuple(_) => {
                            let t = self.var("tmp", &sty);
                            nested.push((t.clone(), sub));
                            names.push(t);
                        }
                    }
                }
                out.push(NormEq { pattern: names, expr: rhs });
                for (t, sub) in nested {
                    self.flatten(sub, NormExpr::Base(NormBase::Var(t)), out);
                }
            }
        }
    }
}

/// Normalises one expression into hoisted equations and a base result.
pub fn normalise_expr(e: &Expr, fresh: &mut Fresh, locals: &mut BTreeMap<String, Type>) -> (Vec<NormEq>, NormBase) {
    Cx { fresh, locals }.expr(e)
}

/// Rewrites a possibly nested pattern into flat equations:
/// `x, (y, z) = e` becomes `x, __tmp = e; y, z = __tmp`.
pub fn flatten_pattern(
    p: &Pattern,
    rhs: NormExpr,
    fresh: &mut Fresh,
    locals: &mut BTreeMap<String, Type>,
) -> Vec<NormEq> {
    let mut out = Vec::new();
    Cx { fresh, locals }.flatten(p, rhs, &mut out);
    out
}

/// Normalises a typed, monomorphic, causally ordered step with a body.
pub fn normalise_step(step: &StepDecl) -> NormStep {
    let body = step.body.as_ref().expect("prototypes have no NormIR");
    let mut fresh = Fresh::new();
    let mut locals = BTreeMap::new();
    let ground = |p: &Param| crate::sema::ground_type(&p.ty).expect("monomorphic signature");
    let in_tys: Vec<Type> = step.inputs.iter().map(ground).collect();
    let out_tys: Vec<Type> = step.outputs.iter().map(ground).collect();
    let input_ty = Type::pack(in_tys.clone());
    let output_ty = Type::pack(out_tys);

    let mut cx = Cx { fresh: &mut fresh, locals: &mut locals };
    let input = cx.var("in", &input_ty);
    let mut eqs = Vec::new();
    if !step.inputs.is_empty() {
        let names: Vec<String> = step
            .inputs
            .iter()
            .zip(&in_tys)
            .map(|(p, t)| match &p.name {
                Some(n) => {
                    cx.locals.insert(n.clone(), t.clone());
                    n.clone()
                }
                None => cx.var("w", t),
            })
            .collect();
        eqs.push(NormEq { pattern: names, expr: NormExpr::Base(NormBase::var(&input)) });
    }
    for eq in body {
        let (s, b) = cx.expr(&eq.expr);
        eqs.extend(s);
        cx.flatten(&eq.pattern, NormExpr::Base(b), &mut eqs);
    }
    let output = cx.var("out", &output_ty);
    let outs: Vec<String> = step.outputs.iter().map(|p| p.name.clone().expect("named output")).collect();
    let rhs = match outs.len() {
        0 => NormExpr::Base(NormBase::Const(Literal::Unit)),
        1 => NormExpr::Base(NormBase::var(&outs[0])),
        _ => NormExpr::Tuple(outs),
    };
    eqs.push(NormEq { pattern: vec![output.clone()], expr: rhs });

    let body = copy_propagate(Block::new(eqs, NormBase::var(&output)));
    NormStep { name: step.name.clone(), input, input_ty, output, output_ty, body, locals, next_fresh: fresh.peek() }
}

/// Normalises every step of a monomorphic program; prototypes keep only their signature.
pub fn normalise_program(typed: &TypedProgram) -> NormProgram {
    let mut out = NormProgram::default();
    for s in &typed.program.steps {
        if s.is_prototype() {
            let scheme = &typed.schemes[&s.name];
            out.prototypes.push(Prototype {
                name: s.name.clone(),
                input_ty: scheme.input.clone(),
                output_ty: scheme.output.clone(),
            });
        } else {
            out.steps.push(normalise_step(s));
        }
    }
    out
}
