//! Hindley–Milner inference over steps.
//!
//! Steps are generalised one at a time, callees first; equations inside a
//! step are monomorphic (they define streams, not functions). Overloaded
//! operators carry a class constraint that is discharged after the step is
//! solved, defaulting unconstrained operands to `int`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::builtins::{self, Class};
use crate::diag::{Diagnostic, Loc, Phase};
use crate::frontend::ast::*;
use crate::types::{canonicalize, Type};

/// A generalised step signature: `forall vars. input -> output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeScheme {
    pub vars: Vec<u32>,
    pub input: Type,
    pub output: Type,
}

impl TypeScheme {
    pub fn is_ground(&self) -> bool {
        self.vars.is_empty()
    }
}

impl fmt::Display for TypeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = canonicalize(&[self.input.clone(), self.output.clone()]);
        if !self.vars.is_empty() {
            let mut names = Vec::new();
            Type::Tuple(c.clone()).free_vars(&mut names);
            let names: Vec<String> = names.iter().map(|v| Type::Var(*v).to_string()).collect();
            write!(f, "forall {}. ", names.join(" "))?;
        }
        write!(f, "{} -> {}", c[0], c[1])
    }
}

/// A program whose expression and pattern slots are all filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedProgram {
    pub program: Program,
    pub schemes: BTreeMap<String, TypeScheme>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TypeError {
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { loc: Loc, expected: Type, found: Type },
    #[error("cannot construct infinite type: {var} occurs in {ty}")]
    Occurs { loc: Loc, var: Type, ty: Type },
    #[error("unknown variable '{name}'")]
    UnknownVariable { loc: Loc, name: String },
    #[error("unknown step '{name}'")]
    UnknownStep { loc: Loc, name: String },
    #[error("variable '{name}' is defined more than once")]
    DuplicateDefinition { loc: Loc, name: String },
    #[error("input '{name}' cannot be redefined")]
    InputRedefined { loc: Loc, name: String },
    #[error("output '{name}' of step '{step}' is never defined")]
    UndefinedOutput { loc: Loc, step: String, name: String },
    #[error("step '{step}' has a body, so its outputs must be named")]
    WildcardOutput { loc: Loc, step: String },
    #[error("step '{name}' is declared more than once")]
    DuplicateStep { loc: Loc, name: String },
    #[error("step name '{name}' is reserved for a builtin operator")]
    ReservedName { loc: Loc, name: String },
    #[error("recursive steps are not supported: {}", cycle.join(" -> "))]
    RecursiveStep { loc: Loc, cycle: Vec<String> },
    #[error("operator '{name}' is not defined for {ty}")]
    Overload { loc: Loc, name: String, ty: Type },
}

impl TypeError {
    pub fn loc(&self) -> Loc {
        match self {
            TypeError::Mismatch { loc, .. }
            | TypeError::Occurs { loc, .. }
            | TypeError::UnknownVariable { loc, .. }
            | TypeError::UnknownStep { loc, .. }
            | TypeError::DuplicateDefinition { loc, .. }
            | TypeError::InputRedefined { loc, .. }
            | TypeError::UndefinedOutput { loc, .. }
            | TypeError::WildcardOutput { loc, .. }
            | TypeError::DuplicateStep { loc, .. }
            | TypeError::ReservedName { loc, .. }
            | TypeError::RecursiveStep { loc, .. }
            | TypeError::Overload { loc, .. } => *loc,
        }
    }
}

impl From<TypeError> for Diagnostic {
    fn from(e: TypeError) -> Self {
        Diagnostic::new(Phase::Type, Some(e.loc()), e.to_string())
    }
}

/// Converts an annotation without type variables.
pub fn ground_type(t: &TypeExpr) -> Option<Type> {
    Some(match t {
        TypeExpr::Unit => Type::Unit,
        TypeExpr::Bool => Type::Bool,
        TypeExpr::Int => Type::Int,
        TypeExpr::Float => Type::Float,
        TypeExpr::Option(t) => Type::option(ground_type(t)?),
        TypeExpr::Tuple(ts) => Type::Tuple(ts.iter().map(ground_type).collect::<Option<_>>()?),
        TypeExpr::Var(_) => return None,
    })
}

struct Constraint {
    ty: Type,
    class: Class,
    loc: Loc,
    name: String,
}

#[derive(Default)]
struct Infer {
    bindings: Vec<Option<Type>>,
    constraints: Vec<Constraint>,
}

impl Infer {
    fn fresh(&mut self) -> Type {
        self.bindings.push(None);
        Type::Var(self.bindings.len() as u32 - 1)
    }

    fn shallow(&self, t: &Type) -> Type {
        let mut t = t.clone();
        while let Type::Var(v) = t {
            match &self.bindings[v as usize] {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    fn zonk(&self, t: &Type) -> Type {
        match self.shallow(t) {
            Type::Option(t) => Type::option(self.zonk(&t)),
            Type::Tuple(ts) => Type::Tuple(ts.iter().map(|t| self.zonk(t)).collect()),
            t => t,
        }
    }

    fn occurs(&self, v: u32, t: &Type) -> bool {
        match self.shallow(t) {
            Type::Var(w) => v == w,
            Type::Option(t) => self.occurs(v, &t),
            Type::Tuple(ts) => ts.iter().any(|t| self.occurs(v, t)),
            _ => false,
        }
    }

    /// Unifies `found` with `expected`; errors report both, fully resolved.
    fn unify(&mut self, expected: &Type, found: &Type, loc: Loc) -> Result<(), TypeError> {
        let a = self.shallow(expected);
        let b = self.shallow(found);
        let mismatch = |s: &Self| TypeError::Mismatch { loc, expected: s.zonk(expected), found: s.zonk(found) };
        match (&a, &b) {
            (Type::Var(x), Type::Var(y)) if x == y => Ok(()),
            (Type::Var(x), t) | (t, Type::Var(x)) => {
                if self.occurs(*x, t) {
                    return Err(TypeError::Occurs { loc, var: Type::Var(*x), ty: self.zonk(t) });
                }
                self.bindings[*x as usize] = Some(t.clone());
                Ok(())
            }
            (Type::Option(x), Type::Option(y)) => {
                let (x, y) = (x.clone(), y.clone());
                self.unify(&x, &y, loc).map_err(|_| mismatch(self))
            }
            (Type::Tuple(xs), Type::Tuple(ys)) => {
                if xs.len() != ys.len() {
                    return Err(mismatch(self));
                }
                for (x, y) in xs.clone().iter().zip(ys.clone().iter()) {
                    self.unify(x, y, loc).map_err(|e| match e {
                        TypeError::Occurs { .. } => e,
                        _ => mismatch(self),
                    })?;
                }
                Ok(())
            }
            (x, y) if x == y => Ok(()),
            _ => Err(mismatch(self)),
        }
    }

    fn annotation(&mut self, t: &TypeExpr, ticks: &mut HashMap<String, Type>) -> Type {
        match t {
            TypeExpr::Unit => Type::Unit,
            TypeExpr::Bool => Type::Bool,
            TypeExpr::Int => Type::Int,
            TypeExpr::Float => Type::Float,
            TypeExpr::Option(t) => Type::option(self.annotation(t, ticks)),
            TypeExpr::Tuple(ts) => Type::Tuple(ts.iter().map(|t| self.annotation(t, ticks)).collect()),
            TypeExpr::Var(name) => {
                if let Some(t) = ticks.get(name) {
                    return t.clone();
                }
                let t = self.fresh();
                ticks.insert(name.clone(), t.clone());
                t
            }
        }
    }

    fn instantiate(&mut self, s: &TypeScheme) -> (Type, Type) {
        let map: BTreeMap<u32, Type> = s.vars.iter().map(|v| (*v, self.fresh())).collect();
        (s.input.subst(&map), s.output.subst(&map))
    }
}

/// Orders steps so that every callee precedes its callers.
fn call_order(program: &Program) -> Result<Vec<usize>, TypeError> {
    let index: HashMap<&str, usize> = program.steps.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let callees: Vec<Vec<(usize, Loc)>> = program
        .steps
        .iter()
        .map(|s| {
            let mut out = Vec::new();
            for eq in s.body.iter().flatten() {
                eq.expr.walk(&mut |e| {
                    if let ExprKind::App(f, _) = &e.kind {
                        if let Some(&j) = index.get(f.as_str()) {
                            out.push((j, e.loc));
                        }
                    }
                });
            }
            out
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit(
        i: usize,
        callees: &[Vec<(usize, Loc)>],
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
        order: &mut Vec<usize>,
        program: &Program,
    ) -> Result<(), TypeError> {
        marks[i] = Mark::Active;
        stack.push(i);
        for &(j, loc) in &callees[i] {
            match marks[j] {
                Mark::Done => {}
                Mark::Active => {
                    let start = stack.iter().position(|&k| k == j).unwrap();
                    let mut cycle: Vec<String> =
                        stack[start..].iter().map(|&k| program.steps[k].name.clone()).collect();
                    cycle.push(program.steps[j].name.clone());
                    return Err(TypeError::RecursiveStep { loc, cycle });
                }
                Mark::New => visit(j, callees, marks, stack, order, program)?,
            }
        }
        stack.pop();
        marks[i] = Mark::Done;
        order.push(i);
        Ok(())
    }

    let mut marks = vec![Mark::New; program.steps.len()];
    let mut order = Vec::new();
    for i in 0..program.steps.len() {
        if marks[i] == Mark::New {
            visit(i, &callees, &mut marks, &mut Vec::new(), &mut order, program)?;
        }
    }
    Ok(order)
}

/// Infers types for every step, filling all type slots and resolving operators.
pub fn infer(program: &Program) -> Result<TypedProgram, TypeError> {
    let mut seen = BTreeSet::new();
    for s in &program.steps {
        if !seen.insert(s.name.as_str()) {
            return Err(TypeError::DuplicateStep { loc: s.loc, name: s.name.clone() });
        }
        if builtins::is_builtin(&s.name) {
            return Err(TypeError::ReservedName { loc: s.loc, name: s.name.clone() });
        }
    }
    let order = call_order(program)?;
    let mut cx = Infer::default();
    let mut schemes = BTreeMap::new();
    let mut out = program.clone();
    for i in order {
        let scheme = infer_step(&mut cx, &mut out.steps[i], &schemes)?;
        schemes.insert(out.steps[i].name.clone(), scheme);
    }
    Ok(TypedProgram { program: out, schemes })
}

fn infer_step(
    cx: &mut Infer,
    step: &mut StepDecl,
    schemes: &BTreeMap<String, TypeScheme>,
) -> Result<TypeScheme, TypeError> {
    cx.constraints.clear();
    let mut ticks = HashMap::new();
    let in_tys: Vec<Type> = step.inputs.iter().map(|p| cx.annotation(&p.ty, &mut ticks)).collect();
    let out_tys: Vec<Type> = step.outputs.iter().map(|p| cx.annotation(&p.ty, &mut ticks)).collect();

    if let Some(body) = step.body.as_mut() {
        let mut env: BTreeMap<String, Type> = BTreeMap::new();
        let mut inputs = BTreeSet::new();
        for (p, t) in step.inputs.iter().zip(&in_tys) {
            if let Some(name) = &p.name {
                if env.insert(name.clone(), t.clone()).is_some() {
                    return Err(TypeError::DuplicateDefinition { loc: p.loc, name: name.clone() });
                }
                inputs.insert(name.clone());
            }
        }
        for p in &step.outputs {
            if p.name.is_none() {
                return Err(TypeError::WildcardOutput { loc: p.loc, step: step.name.clone() });
            }
        }
        for eq in body.iter() {
            for v in eq.pattern.vars() {
                if inputs.contains(v) {
                    return Err(TypeError::InputRedefined { loc: eq.pattern.loc, name: v.to_string() });
                }
                let fresh = cx.fresh();
                if env.insert(v.to_string(), fresh).is_some() {
                    return Err(TypeError::DuplicateDefinition { loc: eq.pattern.loc, name: v.to_string() });
                }
            }
        }
        for p in step.outputs.iter() {
            let name = p.name.as_ref().unwrap();
            if inputs.contains(name) {
                return Err(TypeError::DuplicateDefinition { loc: p.loc, name: name.clone() });
            }
            if !env.contains_key(name) {
                return Err(TypeError::UndefinedOutput { loc: p.loc, step: step.name.clone(), name: name.clone() });
            }
        }
        for eq in body.iter_mut() {
            let ety = infer_expr(cx, &mut eq.expr, &env, schemes)?;
            let pty = infer_pattern(cx, &mut eq.pattern, &env);
            cx.unify(&pty, &ety, eq.expr.loc)?;
        }
        for (p, t) in step.outputs.iter().zip(&out_tys) {
            let bound = env[p.name.as_ref().unwrap()].clone();
            cx.unify(t, &bound, p.loc)?;
        }
        // Discharge operator constraints, defaulting to int.
        for c in std::mem::take(&mut cx.constraints) {
            let t = cx.zonk(&c.ty);
            if let Type::Var(_) = t {
                cx.unify(&Type::Int, &t, c.loc)?;
            } else if !c.class.admits(&t) {
                return Err(TypeError::Overload { loc: c.loc, name: c.name, ty: t });
            }
        }
        for eq in body.iter_mut() {
            zonk_pattern(cx, &mut eq.pattern);
            eq.expr.walk_mut(&mut |e| {
                let t = cx.zonk(e.ty.as_ref().expect("typed"));
                e.ty = Some(t);
            });
            resolve_operators(&mut eq.expr);
        }
    }

    let input = cx.zonk(&Type::pack(in_tys));
    let output = cx.zonk(&Type::pack(out_tys));
    let mut vars = Vec::new();
    input.free_vars(&mut vars);
    output.free_vars(&mut vars);
    Ok(TypeScheme { vars, input, output })
}

fn infer_pattern(cx: &mut Infer, p: &mut Pattern, env: &BTreeMap<String, Type>) -> Type {
    let t = match &mut p.kind {
        PatternKind::Var(v) => env[v.as_str()].clone(),
        PatternKind::Wildcard => cx.fresh(),
        PatternKind::Tuple(ps) => Type::Tuple(ps.iter_mut().map(|p| infer_pattern(cx, p, env)).collect()),
    };
    p.ty = Some(t.clone());
    t
}

fn zonk_pattern(cx: &Infer, p: &mut Pattern) {
    p.ty = p.ty.as_ref().map(|t| cx.zonk(t));
    if let PatternKind::Tuple(ps) = &mut p.kind {
        ps.iter_mut().for_each(|p| zonk_pattern(cx, p));
    }
}

fn infer_expr(
    cx: &mut Infer,
    e: &mut Expr,
    env: &BTreeMap<String, Type>,
    schemes: &BTreeMap<String, TypeScheme>,
) -> Result<Type, TypeError> {
    let loc = e.loc;
    let t = match &mut e.kind {
        ExprKind::Var(x) => {
            env.get(x.as_str()).cloned().ok_or_else(|| TypeError::UnknownVariable { loc, name: x.clone() })?
        }
        ExprKind::Const(c) => c.ty(),
        ExprKind::Tuple(es) => {
            let mut ts = Vec::new();
            for e in es.iter_mut() {
                ts.push(infer_expr(cx, e, env, schemes)?);
            }
            Type::Tuple(ts)
        }
        ExprKind::Pre(x) => infer_expr(cx, x, env, schemes)?,
        ExprKind::Arrow(a, b) | ExprKind::Fby(a, b) => {
            let ta = infer_expr(cx, a, env, schemes)?;
            let tb = infer_expr(cx, b, env, schemes)?;
            cx.unify(&ta, &tb, b.loc)?;
            ta
        }
        ExprKind::App(f, arg) => {
            let targ = infer_expr(cx, arg, env, schemes)?;
            let (input, output) = if let Some(b) = builtins::generic(f) {
                let operand = if b.class == Class::Bool { Type::Bool } else { cx.fresh() };
                if b.class != Class::Bool {
                    cx.constraints.push(Constraint { ty: operand.clone(), class: b.class, loc, name: f.clone() });
                }
                builtins::signature(b, operand)
            } else if let Some((b, operand)) = builtins::resolved(f) {
                builtins::signature(b, operand)
            } else if let Some(s) = schemes.get(f.as_str()) {
                cx.instantiate(s)
            } else {
                return Err(TypeError::UnknownStep { loc, name: f.clone() });
            };
            cx.unify(&input, &targ, arg.loc)?;
            output
        }
        ExprKind::If(c, t, f) => {
            let tc = infer_expr(cx, c, env, schemes)?;
            cx.unify(&Type::Bool, &tc, c.loc)?;
            let tt = infer_expr(cx, t, env, schemes)?;
            let tf = infer_expr(cx, f, env, schemes)?;
            cx.unify(&tt, &tf, f.loc)?;
            tt
        }
        ExprKind::None => Type::option(cx.fresh()),
        ExprKind::Some(x) => Type::option(infer_expr(cx, x, env, schemes)?),
        ExprKind::Either(a, b) => {
            let ta = infer_expr(cx, a, env, schemes)?;
            let tb = infer_expr(cx, b, env, schemes)?;
            cx.unify(&Type::option(tb.clone()), &ta, a.loc)?;
            tb
        }
    };
    e.ty = Some(t.clone());
    Ok(t)
}

/// Renames generic operator applications (`add`) to their resolved instance (`add_int`).
fn resolve_operators(e: &mut Expr) {
    e.walk_mut(&mut |e| {
        if let ExprKind::App(f, arg) = &mut e.kind {
            if let Some(b) = builtins::generic(f) {
                let operand = match arg.ty() {
                    Type::Tuple(ts) if b.shape != builtins::Shape::Unary => ts[0].clone(),
                    t => t.clone(),
                };
                *f = builtins::resolve_name(b, &operand);
            }
        }
    });
}
