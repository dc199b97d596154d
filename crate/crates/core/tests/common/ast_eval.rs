//! A direct interpreter of the typed surface syntax, written independently
//! of the compiler's IRs so it can serve as an oracle for them.
//!
//! Each cycle evaluates every equation of a step once, on demand. Memory is
//! attached to syntax nodes: a `pre` remembers the value its operand had at
//! the node's previous activation, `->` and `fby` remember whether they were
//! ever activated, and each application of a step owns that step's state.
//! `->` evaluates its right operand on every activation; the left operand of
//! `->`, both operands of `fby`, the branches of `if` and the fallback of
//! `either` are evaluated only when selected.

use std::collections::{HashMap, HashSet};

use mimosa::frontend::ast::{Expr, ExprKind, Literal, Pattern, PatternKind, Program, StepDecl};
use mimosa::simulator::Externs;
use mimosa::{Type, Value};

#[derive(Debug, Default, Clone)]
pub struct State {
    pre: HashMap<usize, Value>,
    started: HashSet<usize>,
    calls: HashMap<usize, State>,
}

impl State {
    pub fn new() -> State {
        State::default()
    }
}

enum Store {
    Var(String),
    Value(Value),
}

struct Cycle<'p> {
    step: &'p StepDecl,
    env: HashMap<String, Value>,
    defining: HashMap<&'p str, usize>,
    done: Vec<bool>,
    stores: Vec<(usize, Store)>,
}

pub struct AstEval<'p> {
    pub program: &'p Program,
}

fn key(e: &Expr) -> usize {
    e as *const Expr as usize
}

pub fn nil(ty: &Type) -> Value {
    match ty {
        Type::Bool => Value::Bool(false),
        Type::Int => Value::Int(0),
        Type::Float => Value::Float(0.0),
        Type::Option(_) => Value::Option(None),
        Type::Tuple(ts) => Value::Tuple(ts.iter().map(nil).collect()),
        Type::Unit | Type::Var(_) => Value::Unit,
    }
}

fn split(v: Value, n: usize) -> Vec<Value> {
    match (n, v) {
        (1, v) => vec![v],
        (_, Value::Tuple(vs)) if vs.len() == n => vs,
        (_, v) => panic!("cannot split {:?} into {}", v, n),
    }
}

fn join(mut vs: Vec<Value>) -> Value {
    match vs.len() {
        0 => Value::Unit,
        1 => vs.pop().unwrap(),
        _ => Value::Tuple(vs),
    }
}

fn builtin(name: &str, arg: &Value) -> Option<Value> {
    use Value::*;
    let (op, ty) = name.rsplit_once('_')?;
    if !matches!(ty, "int" | "float" | "bool") {
        return None;
    }
    let v = match (op, arg) {
        ("neg", Int(a)) => Int(a.wrapping_neg()),
        ("neg", Float(a)) => Float(-a),
        ("not", Bool(a)) => Bool(!a),
        (_, Tuple(p)) if p.len() == 2 => match (op, &p[0], &p[1]) {
            ("add", Int(a), Int(b)) => Int(a.wrapping_add(*b)),
            ("sub", Int(a), Int(b)) => Int(a.wrapping_sub(*b)),
            ("mul", Int(a), Int(b)) => Int(a.wrapping_mul(*b)),
            ("div", Int(_), Int(0)) => Int(0),
            ("div", Int(a), Int(b)) => Int(a.wrapping_div(*b)),
            ("add", Float(a), Float(b)) => Float(a + b),
            ("sub", Float(a), Float(b)) => Float(a - b),
            ("mul", Float(a), Float(b)) => Float(a * b),
            ("div", Float(a), Float(b)) => Float(a / b),
            ("land", Bool(a), Bool(b)) => Bool(*a && *b),
            ("lor", Bool(a), Bool(b)) => Bool(*a || *b),
            ("eq", Int(a), Int(b)) => Bool(a == b),
            ("ne", Int(a), Int(b)) => Bool(a != b),
            ("lt", Int(a), Int(b)) => Bool(a < b),
            ("le", Int(a), Int(b)) => Bool(a <= b),
            ("gt", Int(a), Int(b)) => Bool(a > b),
            ("ge", Int(a), Int(b)) => Bool(a >= b),
            ("eq", Float(a), Float(b)) => Bool(a == b),
            ("ne", Float(a), Float(b)) => Bool(a != b),
            ("lt", Float(a), Float(b)) => Bool(a < b),
            ("le", Float(a), Float(b)) => Bool(a <= b),
            ("gt", Float(a), Float(b)) => Bool(a > b),
            ("ge", Float(a), Float(b)) => Bool(a >= b),
            ("eq", Bool(a), Bool(b)) => Bool(a == b),
            ("ne", Bool(a), Bool(b)) => Bool(a != b),
            ("lt", Bool(a), Bool(b)) => Bool(a < b),
            ("le", Bool(a), Bool(b)) => Bool(a <= b),
            ("gt", Bool(a), Bool(b)) => Bool(a > b),
            ("ge", Bool(a), Bool(b)) => Bool(a >= b),
            _ => return None,
        },
        _ => return None,
    };
    Some(v)
}

impl<'p> AstEval<'p> {
    pub fn new(program: &'p Program) -> Self {
        AstEval { program }
    }

    /// One cycle of step `name`; the input and output are packed like call arguments.
    pub fn step(&self, name: &str, state: &mut State, input: &Value, ext: &mut dyn Externs) -> Value {
        let step = self.program.step(name).unwrap_or_else(|| panic!("no step {}", name));
        let body = match &step.body {
            Some(b) => b,
            None => return ext.call(name, input).unwrap(),
        };
        let mut cx = Cycle {
            step,
            env: HashMap::new(),
            defining: HashMap::new(),
            done: vec![false; body.len()],
            stores: Vec::new(),
        };
        for (p, v) in step.inputs.iter().zip(split(input.clone(), step.inputs.len().max(1))) {
            if let Some(n) = &p.name {
                cx.env.insert(n.clone(), v);
            }
        }
        for (i, eq) in body.iter().enumerate() {
            for v in eq.pattern.vars() {
                cx.defining.insert(v, i);
            }
        }
        for i in 0..body.len() {
            self.equation(i, &mut cx, state, ext);
        }
        for (k, s) in std::mem::take(&mut cx.stores) {
            let v = match s {
                Store::Var(x) => cx.env[&x].clone(),
                Store::Value(v) => v,
            };
            state.pre.insert(k, v);
        }
        join(step.outputs.iter().map(|p| cx.env[p.name.as_ref().unwrap()].clone()).collect())
    }

    fn equation(&self, i: usize, cx: &mut Cycle<'p>, state: &mut State, ext: &mut dyn Externs) {
        if cx.done[i] {
            return;
        }
        cx.done[i] = true;
        let eq = &cx.step.body.as_ref().unwrap()[i];
        let v = self.expr(&eq.expr, cx, state, ext);
        bind(&eq.pattern, v, &mut cx.env);
    }

    fn expr(&self, e: &'p Expr, cx: &mut Cycle<'p>, state: &mut State, ext: &mut dyn Externs) -> Value {
        match &e.kind {
            ExprKind::Var(x) => {
                if !cx.env.contains_key(x) {
                    let i = cx.defining[x.as_str()];
                    self.equation(i, cx, state, ext);
                }
                cx.env.get(x).cloned().unwrap_or_else(|| panic!("{} used before definition", x))
            }
            ExprKind::Const(l) => match *l {
                Literal::Unit => Value::Unit,
                Literal::Bool(b) => Value::Bool(b),
                Literal::Int(i) => Value::Int(i),
                Literal::Float(x) => Value::Float(x),
            },
            ExprKind::Tuple(es) => Value::Tuple(es.iter().map(|x| self.expr(x, cx, state, ext)).collect()),
            ExprKind::None => Value::Option(None),
            ExprKind::Some(x) => Value::some(self.expr(x, cx, state, ext)),
            ExprKind::Pre(x) => {
                let old = state.pre.get(&key(e)).cloned().unwrap_or_else(|| nil(x.ty()));
                let store = match &x.kind {
                    ExprKind::Var(v) => Store::Var(v.clone()),
                    _ => Store::Value(self.expr(x, cx, state, ext)),
                };
                cx.stores.push((key(e), store));
                old
            }
            ExprKind::Arrow(a, b) => {
                let later = self.expr(b, cx, state, ext);
                if state.started.insert(key(e)) {
                    self.expr(a, cx, state, ext)
                } else {
                    later
                }
            }
            ExprKind::Fby(a, b) => {
                if state.started.insert(key(e)) {
                    self.expr(a, cx, state, ext)
                } else {
                    self.expr(b, cx, state, ext)
                }
            }
            ExprKind::If(c, t, f) => match self.expr(c, cx, state, ext) {
                Value::Bool(true) => self.expr(t, cx, state, ext),
                Value::Bool(false) => self.expr(f, cx, state, ext),
                v => panic!("condition {:?}", v),
            },
            ExprKind::Either(a, b) => match self.expr(a, cx, state, ext) {
                Value::Option(Some(v)) => *v,
                Value::Option(None) => self.expr(b, cx, state, ext),
                v => panic!("either on {:?}", v),
            },
            ExprKind::App(f, arg) => {
                let v = self.expr(arg, cx, state, ext);
                if let Some(r) = builtin(f, &v) {
                    return r;
                }
                match self.program.step(f) {
                    Some(s) if s.is_prototype() => ext.call(f, &v).unwrap(),
                    Some(_) => {
                        let child = state.calls.entry(key(e)).or_default();
                        self.step(f, child, &v, ext)
                    }
                    None => panic!("unknown function {}", f),
                }
            }
        }
    }
}

fn bind(p: &Pattern, v: Value, env: &mut HashMap<String, Value>) {
    match &p.kind {
        PatternKind::Var(x) => {
            env.insert(x.clone(), v);
        }
        PatternKind::Wildcard => {}
        PatternKind::Tuple(ps) => {
            for (p, v) in ps.iter().zip(split(v, ps.len())) {
                bind(p, v, env);
            }
        }
    }
}
