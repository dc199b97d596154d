//! Monomorphisation: one copy of each polymorphic step per ground instantiation
//! reachable from the nodes.

use std::collections::{BTreeMap, HashMap};

use crate::builtins;
use crate::diag::{Diagnostic, Loc, Phase};
use crate::frontend::ast::*;
use crate::types::Type;

use super::infer::{TypeScheme, TypedProgram};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonoError {
    #[error("unresolved polymorphism: {what} has type {ty}")]
    UnresolvedPolymorphism { loc: Loc, what: String, ty: Type },
    #[error("node '{node}' implements polymorphic step '{step}' ({scheme})")]
    PolymorphicNode { loc: Loc, node: String, step: String, scheme: String },
}

impl From<MonoError> for Diagnostic {
    fn from(e: MonoError) -> Self {
        let loc = match &e {
            MonoError::UnresolvedPolymorphism { loc, .. } | MonoError::PolymorphicNode { loc, .. } => *loc,
        };
        Diagnostic::new(Phase::Mono, Some(loc), e.to_string())
    }
}

/// Name of the copy of `step` for the given instantiation of its scheme variables.
pub fn instance_name(step: &str, scheme: &TypeScheme, subst: &BTreeMap<u32, Type>) -> String {
    if scheme.vars.is_empty() {
        return step.to_string();
    }
    let parts: String = scheme.vars.iter().map(|v| subst[v].mangle()).collect();
    format!("{}__{}", step, parts)
}

/// Splits a packed parameter type back into one type per declared parameter.
pub fn unpack_params(packed: &Type, arity: usize) -> Vec<Type> {
    match (arity, packed) {
        (0, _) => vec![],
        (1, t) => vec![t.clone()],
        (_, Type::Tuple(ts)) => ts.clone(),
        _ => unreachable!("arity {} for {}", arity, packed),
    }
}

struct Mono<'a> {
    typed: &'a TypedProgram,
    index: HashMap<&'a str, usize>,
    done: BTreeMap<String, (usize, StepDecl, TypeScheme)>,
    queue: Vec<(usize, BTreeMap<u32, Type>)>,
}

impl<'a> Mono<'a> {
    fn request(&mut self, idx: usize, subst: BTreeMap<u32, Type>) -> String {
        let step = &self.typed.program.steps[idx];
        let name = instance_name(&step.name, &self.typed.schemes[&step.name], &subst);
        if !self.done.contains_key(&name) && !self.queue.iter().any(|(i, s)| *i == idx && *s == subst) {
            self.queue.push((idx, subst));
        }
        name
    }

    fn instantiate(&mut self, idx: usize, subst: BTreeMap<u32, Type>) -> Result<(), MonoError> {
        let orig = &self.typed.program.steps[idx];
        let scheme = &self.typed.schemes[&orig.name];
        let name = instance_name(&orig.name, scheme, &subst);
        if self.done.contains_key(&name) {
            return Ok(());
        }
        let mut step = orig.clone();
        step.name = name.clone();
        let ins = unpack_params(&scheme.input.subst(&subst), orig.inputs.len());
        let outs = unpack_params(&scheme.output.subst(&subst), orig.outputs.len());
        for (p, t) in step.inputs.iter_mut().zip(&ins).chain(step.outputs.iter_mut().zip(&outs)) {
            p.ty = TypeExpr::from_type(t);
        }
        let ground =
            TypeScheme { vars: vec![], input: scheme.input.subst(&subst), output: scheme.output.subst(&subst) };

        if let Some(body) = step.body.as_mut() {
            for eq in body.iter_mut() {
                subst_pattern(&mut eq.pattern, &subst)?;
                let mut err = None;
                let mut calls = Vec::new();
                eq.expr.walk_mut(&mut |e| {
                    let t = e.ty().subst(&subst);
                    if !t.is_ground() && err.is_none() {
                        err = Some(MonoError::UnresolvedPolymorphism {
                            loc: e.loc,
                            what: format!("expression in step '{}'", orig.name),
                            ty: t.clone(),
                        });
                    }
                    e.ty = Some(t);
                    if let ExprKind::App(f, arg) = &e.kind {
                        if !builtins::is_builtin(f) {
                            calls.push((e.loc, f.clone(), arg.ty().subst(&subst), e.ty().clone()));
                        }
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
                let mut renames = Vec::new();
                for (loc, f, targ, tres) in calls {
                    let callee = self.index[f.as_str()];
                    let cs = &self.typed.schemes[&f];
                    let mut m = BTreeMap::new();
                    let ok = cs.input.match_against(&targ, &mut m) && cs.output.match_against(&tres, &mut m);
                    debug_assert!(ok, "call site type does not match callee scheme");
                    for v in &cs.vars {
                        let t = m.get(v).cloned().unwrap_or(Type::Var(*v));
                        if !t.is_ground() {
                            return Err(MonoError::UnresolvedPolymorphism {
                                loc,
                                what: format!("call to '{}'", f),
                                ty: t,
                            });
                        }
                    }
                    renames.push(self.request(callee, m));
                }
                let mut renames = renames.into_iter();
                eq.expr.walk_mut(&mut |e| {
                    if let ExprKind::App(f, _) = &mut e.kind {
                        if !builtins::is_builtin(f) {
                            *f = renames.next().unwrap();
                        }
                    }
                });
            }
        }
        self.done.insert(name, (idx, step, ground));
        Ok(())
    }
}

fn subst_pattern(p: &mut Pattern, subst: &BTreeMap<u32, Type>) -> Result<(), MonoError> {
    let t = p.ty.as_ref().expect("typed pattern").subst(subst);
    if !t.is_ground() {
        return Err(MonoError::UnresolvedPolymorphism { loc: p.loc, what: "pattern".into(), ty: t });
    }
    p.ty = Some(t);
    if let PatternKind::Tuple(ps) = &mut p.kind {
        for p in ps {
            subst_pattern(p, subst)?;
        }
    }
    Ok(())
}

/// Keeps the steps reachable from node declarations, one copy per ground
/// instantiation. A program without nodes keeps every ground step as a root.
pub fn monomorphise(typed: &TypedProgram) -> Result<TypedProgram, MonoError> {
    let program = &typed.program;
    let index: HashMap<&str, usize> = program.steps.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let mut m = Mono { typed, index, done: BTreeMap::new(), queue: Vec::new() };

    if program.nodes.is_empty() {
        for (i, s) in program.steps.iter().enumerate() {
            if typed.schemes[&s.name].is_ground() {
                m.request(i, BTreeMap::new());
            }
        }
    } else {
        for n in &program.nodes {
            let Some(&i) = m.index.get(n.step.as_str()) else { continue };
            let scheme = &typed.schemes[&n.step];
            if !scheme.is_ground() {
                return Err(MonoError::PolymorphicNode {
                    loc: n.loc,
                    node: n.name.clone(),
                    step: n.step.clone(),
                    scheme: scheme.to_string(),
                });
            }
            m.request(i, BTreeMap::new());
        }
    }
    while !m.queue.is_empty() {
        let (idx, subst) = m.queue.remove(0);
        m.instantiate(idx, subst)?;
    }

    let mut copies: Vec<(usize, String, StepDecl, TypeScheme)> =
        m.done.into_iter().map(|(name, (i, s, t))| (i, name, s, t)).collect();
    copies.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut schemes = BTreeMap::new();
    let mut steps = Vec::new();
    for (_, name, step, scheme) in copies {
        schemes.insert(name, scheme);
        steps.push(step);
    }
    Ok(TypedProgram {
        program: Program { steps, channels: program.channels.clone(), nodes: program.nodes.clone() },
        schemes,
    })
}
