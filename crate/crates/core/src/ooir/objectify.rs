//! Translation of normalised steps into machines.
//!
//! The equations of a block are folded left to right over a machine under
//! construction. Stores into `pre` cells are collected per block and emitted
//! after the block's own instructions (and after its result assignment), so
//! a `pre` read always sees the previous cycle even when the stored name is
//! defined later in the block.

use std::collections::{BTreeMap, HashMap};

use crate::builtins;
use crate::normir::{Block, Fresh, NormBase, NormEq, NormExpr, NormProgram, NormStep};
use crate::types::Type;
use crate::value::Value;

use super::{Instr, Machine, MachineKind, MemCell, OExpr, OProgram};

/// The arbitrary constant that fills a memory cell before its first store.
pub fn nil_constant(ty: &Type) -> Value {
    Value::nil(ty)
}

/// Base expressions: names held in memory become state reads.
pub fn translate_base(memory: &[MemCell], b: &NormBase) -> OExpr {
    match b {
        NormBase::Var(v) if memory.iter().any(|c| c.name == *v) => OExpr::State(v.clone()),
        NormBase::Var(v) => OExpr::Var(v.clone()),
        NormBase::Const(c) => OExpr::Const(c.value()),
        NormBase::None => OExpr::None,
        NormBase::SomeVar(v) => OExpr::SomeVar(v.clone()),
    }
}

struct Builder<'a> {
    step: &'a NormStep,
    stateless: &'a dyn Fn(&str) -> bool,
    fresh: Fresh,
    memory: Vec<MemCell>,
    instances: Vec<(String, String)>,
    reset: Vec<Instr>,
    locals: BTreeMap<String, Type>,
}

impl Builder<'_> {
    fn local(&mut self, hint: &str, ty: Type) -> String {
        let n = self.fresh.name(hint);
        self.locals.insert(n.clone(), ty);
        n
    }

    fn ty(&self, v: &str) -> Type {
        self.locals[v].clone()
    }

    fn base(&self, b: &NormBase) -> OExpr {
        translate_base(&self.memory, b)
    }

    /// Translates a nested block ending with `v = result`, followed by its stores.
    fn branch(&mut self, v: &str, b: &Block) -> Vec<Instr> {
        let (mut s, stores) = self.eqs(&b.eqs);
        s.push(Instr::Assign(v.to_string(), self.base(&b.result)));
        s.extend(stores);
        s
    }

    fn eqs(&mut self, eqs: &[NormEq]) -> (Vec<Instr>, Vec<Instr>) {
        let mut s = Vec::new();
        let mut stores = Vec::new();
        for eq in eqs {
            self.eq(eq, &mut s, &mut stores);
        }
        (s, stores)
    }

    fn eq(&mut self, eq: &NormEq, s: &mut Vec<Instr>, stores: &mut Vec<Instr>) {
        if eq.pattern.len() > 1 {
            let ty = Type::Tuple(eq.pattern.iter().map(|p| self.ty(p)).collect());
            let t = self.local("t", ty);
            self.eq(&NormEq { pattern: vec![t.clone()], expr: eq.expr.clone() }, s, stores);
            s.push(Instr::TupleDestruct(eq.pattern.clone(), t));
            return;
        }
        let v = eq.pattern[0].clone();
        match &eq.expr {
            NormExpr::Base(b) => s.push(Instr::Assign(v, self.base(b))),
            NormExpr::Tuple(vs) => s.push(Instr::TupleConstruct(v, vs.clone())),
            NormExpr::Pre(x) => {
                let ty = self.ty(&v);
                let cell = self.fresh.name("tmp");
                let nil = nil_constant(&ty);
                self.memory.push(MemCell { name: cell.clone(), ty, init: nil.clone() });
                self.reset.push(Instr::StateAssign(cell.clone(), OExpr::Const(nil)));
                s.push(Instr::Assign(v, OExpr::State(cell.clone())));
                let stored = self.base(&NormBase::var(x));
                stores.push(Instr::StateAssign(cell, stored));
            }
            NormExpr::Fby(b1, b2) => {
                let then_ = self.branch(&v, b1);
                let else_ = self.branch(&v, b2);
                let fst = self.fresh.name("first");
                self.memory.push(MemCell { name: fst.clone(), ty: Type::Bool, init: Value::Bool(true) });
                self.reset.push(Instr::StateAssign(fst.clone(), OExpr::Const(Value::Bool(true))));
                let t = self.local("t", Type::Bool);
                s.push(Instr::Assign(t.clone(), OExpr::State(fst.clone())));
                s.push(Instr::If { cond: t, then_, else_ });
                s.push(Instr::StateAssign(fst, OExpr::Const(Value::Bool(false))));
            }
            NormExpr::If(c, b1, b2) => {
                let then_ = self.branch(&v, b1);
                let else_ = self.branch(&v, b2);
                s.push(Instr::If { cond: c.clone(), then_, else_ });
            }
            NormExpr::Either(x, b) => {
                let payload = match self.ty(x) {
                    Type::Option(t) => *t,
                    t => unreachable!("either on {}", t),
                };
                let none = self.branch(&v, b);
                let y = self.local("y", payload);
                s.push(Instr::CaseOpt {
                    scrutinee: x.clone(),
                    bound: y.clone(),
                    some: vec![Instr::Assign(v, OExpr::Var(y))],
                    none,
                });
            }
            NormExpr::App(f, x) => {
                let instance = if builtins::is_builtin(f) || (self.stateless)(f) {
                    None
                } else {
                    let o = self.fresh.name("o");
                    self.instances.push((o.clone(), f.clone()));
                    self.reset.push(Instr::Reset { machine: f.clone(), instance: o.clone() });
                    Some(o)
                };
                s.push(Instr::StepCall { result: v, machine: f.clone(), arg: x.clone(), instance });
            }
        }
    }
}

/// Builds the machine of one step. `stateless` tells whether a callee step
/// needs no instance (prototypes never qualify).
pub fn objectify(step: &NormStep, stateless: &dyn Fn(&str) -> bool) -> Machine {
    let mut b = Builder {
        step,
        stateless,
        fresh: Fresh::starting_at(step.next_fresh),
        memory: Vec::new(),
        instances: Vec::new(),
        reset: Vec::new(),
        locals: step.locals.clone(),
    };
    let (mut s, stores) = b.eqs(&step.body.eqs);
    s.extend(stores);
    s.push(Instr::Return(b.base(&step.body.result)));
    Machine {
        name: b.step.name.clone(),
        kind: MachineKind::Step,
        memory: b.memory,
        instances: b.instances,
        reset: b.reset,
        step: s,
        input: step.input.clone(),
        input_ty: step.input_ty.clone(),
        output_ty: step.output_ty.clone(),
        locals: b.locals,
    }
}

fn callees(b: &Block, out: &mut Vec<String>) {
    for eq in &b.eqs {
        match &eq.expr {
            NormExpr::App(f, _) if !builtins::is_builtin(f) => out.push(f.clone()),
            NormExpr::Fby(x, y) | NormExpr::If(_, x, y) => {
                callees(x, out);
                callees(y, out);
            }
            NormExpr::Either(_, x) => callees(x, out),
            _ => {}
        }
    }
}

/// Objectifies every step, callees before callers; prototypes come first.
pub fn objectify_program(p: &NormProgram) -> OProgram {
    let mut out = OProgram::default();
    for pr in &p.prototypes {
        out.machines.push(Machine {
            name: pr.name.clone(),
            kind: MachineKind::Prototype,
            memory: vec![],
            instances: vec![],
            reset: vec![],
            step: vec![],
            input: String::new(),
            input_ty: pr.input_ty.clone(),
            output_ty: pr.output_ty.clone(),
            locals: BTreeMap::new(),
        });
    }
    let index: HashMap<&str, usize> = p.steps.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let mut done = vec![false; p.steps.len()];
    fn visit(i: usize, p: &NormProgram, index: &HashMap<&str, usize>, done: &mut [bool], out: &mut OProgram) {
        if done[i] {
            return;
        }
        done[i] = true;
        let mut cs = Vec::new();
        callees(&p.steps[i].body, &mut cs);
        for c in cs {
            if let Some(&j) = index.get(c.as_str()) {
                visit(j, p, index, done, out);
            }
        }
        let stateless = |f: &str| out.machine(f).map(Machine::is_stateless).unwrap_or(false);
        let m = objectify(&p.steps[i], &stateless);
        out.machines.push(m);
    }
    for i in 0..p.steps.len() {
        visit(i, p, &index, &mut done, &mut out);
    }
    out
}
