//! Reference interpreter for NormIR, used as an oracle for objectification.
//!
//! State lives next to the defining name of each stateful equation, which
//! is unique within a step: the cell of `v = pre x`, the first-cycle flag of
//! `v = b1 fby b2`, and the callee instance of `v = f x`. Stores into `pre`
//! cells take effect when the enclosing block finishes.

use std::collections::HashMap;

use crate::builtins;
use crate::simulator::{Externs, InternalError};
use crate::value::Value;

use super::{Block, NormBase, NormExpr, NormProgram, NormStep};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormInstance {
    pub cells: HashMap<String, Value>,
    pub first: HashMap<String, bool>,
    pub children: HashMap<String, NormInstance>,
}

impl NormInstance {
    /// The reset state: cells hold nil, flags are set, no callee state yet.
    pub fn new() -> Self {
        Self::default()
    }
}

pub struct NormInterpreter<'p> {
    pub program: &'p NormProgram,
}

type Env = HashMap<String, Value>;

impl<'p> NormInterpreter<'p> {
    pub fn new(program: &'p NormProgram) -> Self {
        NormInterpreter { program }
    }

    /// Runs one cycle of `step` on `inst`.
    pub fn step(
        &self,
        step: &str,
        inst: &mut NormInstance,
        input: &Value,
        ext: &mut dyn Externs,
    ) -> Result<Value, InternalError> {
        let s = self.program.step(step).ok_or_else(|| InternalError(format!("no step '{}'", step)))?;
        let mut env = Env::new();
        env.insert(s.input.clone(), input.clone());
        self.block(s, &s.body, &mut env, inst, ext)
    }

    fn base(&self, b: &NormBase, env: &Env) -> Result<Value, InternalError> {
        let get = |v: &str| env.get(v).cloned().ok_or_else(|| InternalError(format!("unbound '{}'", v)));
        Ok(match b {
            NormBase::Var(v) => get(v)?,
            NormBase::Const(c) => c.value(),
            NormBase::None => Value::none(),
            NormBase::SomeVar(v) => Value::some(get(v)?),
        })
    }

    fn block(
        &self,
        s: &NormStep,
        b: &Block,
        env: &mut Env,
        inst: &mut NormInstance,
        ext: &mut dyn Externs,
    ) -> Result<Value, InternalError> {
        let mut stores: Vec<(&str, &str)> = Vec::new();
        for eq in &b.eqs {
            let v = match &eq.expr {
                NormExpr::Base(x) => self.base(x, env)?,
                NormExpr::Tuple(vs) => {
                    Value::Tuple(vs.iter().map(|v| self.base(&NormBase::var(v), env)).collect::<Result<_, _>>()?)
                }
                NormExpr::Pre(x) => {
                    let key = &eq.pattern[0];
                    stores.push((key, x));
                    match inst.cells.get(key) {
                        Some(v) => v.clone(),
                        None => Value::nil(&s.locals[key]),
                    }
                }
                NormExpr::Fby(b1, b2) => {
                    let key = &eq.pattern[0];
                    let first = *inst.first.get(key).unwrap_or(&true);
                    let v = if first { self.block(s, b1, env, inst, ext)? } else { self.block(s, b2, env, inst, ext)? };
                    inst.first.insert(key.clone(), false);
                    v
                }
                NormExpr::App(f, x) => {
                    let arg = self.base(&NormBase::var(x), env)?;
                    if builtins::is_builtin(f) {
                        builtins::eval(f, &arg)
                            .ok_or_else(|| InternalError(format!("bad operands for {}: {}", f, arg)))?
                    } else if self.program.prototype(f).is_some() {
                        ext.call(f, &arg)?
                    } else {
                        let child = inst.children.entry(eq.pattern[0].clone()).or_default();
                        self.step(f, child, &arg, ext)?
                    }
                }
                NormExpr::If(c, b1, b2) => match self.base(&NormBase::var(c), env)? {
                    Value::Bool(true) => self.block(s, b1, env, inst, ext)?,
                    Value::Bool(false) => self.block(s, b2, env, inst, ext)?,
                    v => return Err(InternalError(format!("non-boolean condition {}", v))),
                },
                NormExpr::Either(x, b) => match self.base(&NormBase::var(x), env)? {
                    Value::Option(Some(v)) => *v,
                    Value::Option(None) => self.block(s, b, env, inst, ext)?,
                    v => return Err(InternalError(format!("either on non-option {}", v))),
                },
            };
            if eq.pattern.len() == 1 {
                env.insert(eq.pattern[0].clone(), v);
            } else {
                match v {
                    Value::Tuple(vs) if vs.len() == eq.pattern.len() => {
                        for (p, v) in eq.pattern.iter().zip(vs) {
                            env.insert(p.clone(), v);
                        }
                    }
                    v => return Err(InternalError(format!("cannot destructure {} into {:?}", v, eq.pattern))),
                }
            }
        }
        let result = self.base(&b.result, env)?;
        for (cell, src) in stores {
            let v = self.base(&NormBase::var(src), env)?;
            inst.cells.insert(cell.to_string(), v);
        }
        Ok(result)
    }
}
