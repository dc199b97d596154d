//! Object-oriented IR: each step becomes a machine with explicit memory,
//! sub-machine instances, reset instructions and step instructions.

pub mod objectify;

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::types::Type;
use crate::value::Value;

pub use objectify::{nil_constant, objectify, objectify_program, translate_base};

#[derive(Debug, Clone, PartialEq)]
pub enum OExpr {
    Var(String),
    /// `!x`: a memory cell of the current machine.
    State(String),
    Const(Value),
    None,
    SomeVar(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instr {
    Assign(String, OExpr),
    StateAssign(String, OExpr),
    TupleConstruct(String, Vec<String>),
    TupleDestruct(Vec<String>, String),
    Reset {
        machine: String,
        instance: String,
    },
    Return(OExpr),
    If {
        cond: String,
        then_: Vec<Instr>,
        else_: Vec<Instr>,
    },
    /// `result = machine.step(arg, instance)`; stateless machines and
    /// operators are called without an instance.
    StepCall {
        result: String,
        machine: String,
        arg: String,
        instance: Option<String>,
    },
    CaseOpt {
        scrutinee: String,
        bound: String,
        some: Vec<Instr>,
        none: Vec<Instr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemCell {
    pub name: String,
    pub ty: Type,
    pub init: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineKind {
    Step,
    /// Implemented outside the program; reset and step are opaque.
    Prototype,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Machine {
    pub name: String,
    pub kind: MachineKind,
    pub memory: Vec<MemCell>,
    /// (instance name, machine name)
    pub instances: Vec<(String, String)>,
    pub reset: Vec<Instr>,
    pub step: Vec<Instr>,
    pub input: String,
    pub input_ty: Type,
    pub output_ty: Type,
    /// Types of all local names, including the input.
    pub locals: BTreeMap<String, Type>,
}

impl Machine {
    pub fn is_stateless(&self) -> bool {
        self.kind == MachineKind::Step && self.memory.is_empty() && self.instances.is_empty()
    }

    pub fn memory_cell(&self, name: &str) -> Option<&MemCell> {
        self.memory.iter().find(|c| c.name == name)
    }

    pub fn instance_machine(&self, instance: &str) -> Option<&str> {
        self.instances.iter().find(|(i, _)| i == instance).map(|(_, m)| m.as_str())
    }
}

/// Machines ordered so that every machine follows the machines it instantiates or calls.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OProgram {
    pub machines: Vec<Machine>,
}

impl OProgram {
    pub fn machine(&self, name: &str) -> Option<&Machine> {
        self.machines.iter().find(|m| m.name == name)
    }
}

impl fmt::Display for OExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OExpr::Var(v) => f.write_str(v),
            OExpr::State(v) => write!(f, "!{}", v),
            OExpr::Const(c) => write!(f, "{}", c),
            OExpr::None => f.write_str("None"),
            OExpr::SomeVar(v) => write!(f, "Some {}", v),
        }
    }
}

fn dump_instrs(is: &[Instr], indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    if is.is_empty() {
        let _ = writeln!(out, "{}skip", pad);
    }
    for i in is {
        match i {
            Instr::Assign(x, e) => {
                let _ = writeln!(out, "{}{} = {}", pad, x, e);
            }
            Instr::StateAssign(x, e) => {
                let _ = writeln!(out, "{}{} <- {}", pad, x, e);
            }
            Instr::TupleConstruct(x, vs) => {
                let _ = writeln!(out, "{}{} = ({})", pad, x, vs.join(", "));
            }
            Instr::TupleDestruct(vs, x) => {
                let _ = writeln!(out, "{}{} = {}", pad, vs.join(", "), x);
            }
            Instr::Reset { machine, instance } => {
                let _ = writeln!(out, "{}{}.reset({})", pad, machine, instance);
            }
            Instr::Return(e) => {
                let _ = writeln!(out, "{}return {}", pad, e);
            }
            Instr::If { cond, then_, else_ } => {
                let _ = writeln!(out, "{}if {} then", pad, cond);
                dump_instrs(then_, indent + 1, out);
                let _ = writeln!(out, "{}else", pad);
                dump_instrs(else_, indent + 1, out);
            }
            Instr::StepCall { result, machine, arg, instance } => match instance {
                Some(o) => {
                    let _ = writeln!(out, "{}{} = {}.step({}, {})", pad, result, machine, arg, o);
                }
                None => {
                    let _ = writeln!(out, "{}{} = {}({})", pad, result, machine, arg);
                }
            },
            Instr::CaseOpt { scrutinee, bound, some, none } => {
                let _ = writeln!(out, "{}case {} of", pad, scrutinee);
                let _ = writeln!(out, "{}Some {}:", "  ".repeat(indent + 1), bound);
                dump_instrs(some, indent + 2, out);
                let _ = writeln!(out, "{}None:", "  ".repeat(indent + 1));
                dump_instrs(none, indent + 2, out);
            }
        }
    }
}

/// Stable textual form with `memory:`, `instances:`, `reset:` and `step:` sections.
pub fn dump_machine(m: &Machine) -> String {
    if m.kind == MachineKind::Prototype {
        return format!("prototype {} : {} -> {}\n", m.name, m.input_ty, m.output_ty);
    }
    let mut out = format!("machine {} ({} : {}) -> {}\n", m.name, m.input, m.input_ty, m.output_ty);
    out.push_str("  memory:\n");
    for c in &m.memory {
        let _ = writeln!(out, "    {} : {} = {}", c.name, c.ty, c.init);
    }
    out.push_str("  instances:\n");
    for (i, t) in &m.instances {
        let _ = writeln!(out, "    {} : {}", i, t);
    }
    out.push_str("  reset:\n");
    dump_instrs(&m.reset, 2, &mut out);
    out.push_str("  step:\n");
    dump_instrs(&m.step, 2, &mut out);
    out
}

pub fn dump_program(p: &OProgram) -> String {
    p.machines.iter().map(dump_machine).collect::<Vec<_>>().join("\n")
}
