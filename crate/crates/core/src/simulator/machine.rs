//! Interpreter for OOIR machines.

use std::collections::{BTreeMap, HashMap};

use crate::builtins;
use crate::ooir::{Instr, Machine, MachineKind, OExpr, OProgram};
use crate::value::Value;

use super::{Externs, InternalError};

/// Runtime state of one machine instance, with nested callee instances.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub machine: String,
    pub memory: BTreeMap<String, Value>,
    pub instances: BTreeMap<String, Instance>,
}

impl Instance {
    /// Allocates state for `machine` and, recursively, for its instances.
    /// Cells hold their nil constant until the first reset.
    pub fn new(program: &OProgram, machine: &str) -> Result<Instance, InternalError> {
        let m = lookup(program, machine)?;
        let mut inst = Instance { machine: machine.to_string(), memory: BTreeMap::new(), instances: BTreeMap::new() };
        for c in &m.memory {
            inst.memory.insert(c.name.clone(), Value::nil(&c.ty));
        }
        for (o, callee) in &m.instances {
            inst.instances.insert(o.clone(), Instance::new(program, callee)?);
        }
        Ok(inst)
    }
}

fn lookup<'p>(program: &'p OProgram, name: &str) -> Result<&'p Machine, InternalError> {
    program.machine(name).ok_or_else(|| InternalError(format!("unknown machine '{}'", name)))
}

/// Runs the reset instructions of the instance's machine.
pub fn machine_reset(program: &OProgram, inst: &mut Instance) -> Result<(), InternalError> {
    let m = lookup(program, &inst.machine)?;
    for i in &m.reset {
        match i {
            Instr::StateAssign(x, OExpr::Const(v)) => {
                inst.memory.insert(x.clone(), v.clone());
            }
            Instr::Reset { instance, .. } => {
                let child = inst
                    .instances
                    .get_mut(instance)
                    .ok_or_else(|| InternalError(format!("unknown instance '{}'", instance)))?;
                machine_reset(program, child)?;
            }
            other => return Err(InternalError(format!("unexpected reset instruction {:?}", other))),
        }
    }
    Ok(())
}

/// Runs one cycle: executes the step instructions and returns the result.
/// Prototype machines delegate to `ext`.
pub fn machine_step(
    program: &OProgram,
    inst: &mut Instance,
    input: &Value,
    ext: &mut dyn Externs,
) -> Result<Value, InternalError> {
    let m = lookup(program, &inst.machine)?;
    if m.kind == MachineKind::Prototype {
        return ext.call(&m.name, input);
    }
    let mut exec = Exec { program, env: HashMap::new() };
    exec.env.insert(m.input.clone(), input.clone());
    match exec.run(&m.step, inst, ext)? {
        Some(v) => Ok(v),
        None => Err(InternalError(format!("machine '{}' finished without return", m.name))),
    }
}

struct Exec<'p> {
    program: &'p OProgram,
    env: HashMap<String, Value>,
}

impl Exec<'_> {
    fn var(&self, v: &str) -> Result<Value, InternalError> {
        self.env.get(v).cloned().ok_or_else(|| InternalError(format!("unbound '{}'", v)))
    }

    fn expr(&self, e: &OExpr, inst: &Instance) -> Result<Value, InternalError> {
        Ok(match e {
            OExpr::Var(v) => self.var(v)?,
            OExpr::State(v) => {
                inst.memory.get(v).cloned().ok_or_else(|| InternalError(format!("unknown memory cell '{}'", v)))?
            }
            OExpr::Const(c) => c.clone(),
            OExpr::None => Value::none(),
            OExpr::SomeVar(v) => Value::some(self.var(v)?),
        })
    }

    fn run(
        &mut self,
        is: &[Instr],
        inst: &mut Instance,
        ext: &mut dyn Externs,
    ) -> Result<Option<Value>, InternalError> {
        for i in is {
            match i {
                Instr::Assign(x, e) => {
                    let v = self.expr(e, inst)?;
                    self.env.insert(x.clone(), v);
                }
                Instr::StateAssign(x, e) => {
                    let v = self.expr(e, inst)?;
                    if !inst.memory.contains_key(x) {
                        return Err(InternalError(format!("unknown memory cell '{}'", x)));
                    }
                    inst.memory.insert(x.clone(), v);
                }
                Instr::TupleConstruct(x, vs) => {
                    let items = vs.iter().map(|v| self.var(v)).collect::<Result<_, _>>()?;
                    self.env.insert(x.clone(), Value::Tuple(items));
                }
                Instr::TupleDestruct(xs, t) => match self.var(t)? {
                    Value::Tuple(vs) if vs.len() == xs.len() => {
                        for (x, v) in xs.iter().zip(vs) {
                            self.env.insert(x.clone(), v);
                        }
                    }
                    v => return Err(InternalError(format!("cannot destructure {}", v))),
                },
                Instr::Reset { instance, .. } => {
                    let child = inst
                        .instances
                        .get_mut(instance)
                        .ok_or_else(|| InternalError(format!("unknown instance '{}'", instance)))?;
                    machine_reset(self.program, child)?;
                }
                Instr::Return(e) => return Ok(Some(self.expr(e, inst)?)),
                Instr::If { cond, then_, else_ } => {
                    let branch = match self.var(cond)? {
                        Value::Bool(true) => then_,
                        Value::Bool(false) => else_,
                        v => return Err(InternalError(format!("non-boolean condition {}", v))),
                    };
                    if let Some(v) = self.run(branch, inst, ext)? {
                        return Ok(Some(v));
                    }
                }
                Instr::StepCall { result, machine, arg, instance } => {
                    let a = self.var(arg)?;
                    let v = if builtins::is_builtin(machine) {
                        builtins::eval(machine, &a)
                            .ok_or_else(|| InternalError(format!("bad operands for {}: {}", machine, a)))?
                    } else {
                        match instance {
                            Some(o) => {
                                let child = inst
                                    .instances
                                    .get_mut(o)
                                    .ok_or_else(|| InternalError(format!("unknown instance '{}'", o)))?;
                                machine_step(self.program, child, &a, ext)?
                            }
                            None => {
                                let mut tmp = Instance::new(self.program, machine)?;
                                machine_step(self.program, &mut tmp, &a, ext)?
                            }
                        }
                    };
                    self.env.insert(result.clone(), v);
                }
                Instr::CaseOpt { scrutinee, bound, some, none } => {
                    let branch = match self.var(scrutinee)? {
                        Value::Option(Some(v)) => {
                            self.env.insert(bound.clone(), *v);
                            some
                        }
                        Value::Option(None) => none,
                        v => return Err(InternalError(format!("case on non-option {}", v))),
                    };
                    if let Some(v) = self.run(branch, inst, ext)? {
                        return Ok(Some(v));
                    }
                }
            }
        }
        Ok(None)
    }
}
