//! One `.h`/`.c` pair per machine.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::builtins::{self, Shape};
use crate::ooir::{Instr, Machine, MachineKind, OExpr, OProgram};
use crate::types::Type;
use crate::value::Value;

use super::ctypes::{c_const, c_ident, c_return_type, c_type};

/// Whether calls to `m` need a state struct. Prototypes never do, and an
/// instance of a machine without state needs no field.
pub fn has_state(program: &OProgram, m: &Machine) -> bool {
    m.kind == MachineKind::Step
        && (!m.memory.is_empty()
            || m.instances.iter().any(|(_, callee)| program.machine(callee).is_some_and(|c| has_state(program, c))))
}

pub fn state_struct(name: &str) -> String {
    format!("struct {}_state_t", name)
}

/// C name of the function implementing one cycle of `m`.
pub fn step_fn(m: &Machine) -> String {
    match m.kind {
        MachineKind::Prototype => m.name.clone(),
        MachineKind::Step => format!("{}_step", m.name),
    }
}

/// Parameter types: a unit input takes none, anything else one packed value.
pub fn param_types(input: &Type) -> Vec<Type> {
    match input {
        Type::Unit => vec![],
        t => vec![t.clone()],
    }
}

/// Arguments passing the C expression `var` to a machine with `input` type.
pub fn args_of(var: &str, input: &Type) -> Vec<String> {
    match input {
        Type::Unit => vec![],
        _ => vec![var.to_string()],
    }
}

/// C name of a local variable: keywords and prototype names get a suffix,
/// since a local would shadow the external function.
pub fn local_ident(program: &OProgram, x: &str) -> String {
    let shadows = program.machine(x).is_some_and(|m| m.kind == MachineKind::Prototype);
    if shadows {
        format!("{}_", x)
    } else {
        c_ident(x)
    }
}

fn param_names(m: &Machine) -> Vec<String> {
    match &m.input_ty {
        Type::Unit => vec![],
        _ => vec![c_ident(&m.input)],
    }
}

fn signature(program: &OProgram, m: &Machine, with_names: bool) -> String {
    let names = param_names(m);
    let mut params: Vec<String> = param_types(&m.input_ty)
        .iter()
        .zip(&names)
        .map(|(t, n)| if with_names { format!("{} {}", c_type(t), n) } else { c_type(t) })
        .collect();
    if has_state(program, m) {
        let s = format!("{} *", state_struct(&m.name));
        params.push(if with_names { format!("{}self", s) } else { s.trim_end().to_string() });
    }
    if params.is_empty() {
        params.push("void".into());
    }
    format!("{} {}({})", c_return_type(&m.output_ty), step_fn(m), params.join(", "))
}

fn guard(name: &str) -> String {
    format!("MIMOSA_{}_H", name.to_uppercase())
}

/// Machines whose declarations `m` depends on, in program order.
fn callees<'p>(program: &'p OProgram, m: &Machine) -> Vec<&'p Machine> {
    let mut names = BTreeSet::new();
    fn walk(is: &[Instr], names: &mut BTreeSet<String>) {
        for i in is {
            match i {
                Instr::StepCall { machine, .. } if !builtins::is_builtin(machine) => {
                    names.insert(machine.clone());
                }
                Instr::If { then_, else_, .. } => {
                    walk(then_, names);
                    walk(else_, names);
                }
                Instr::CaseOpt { some, none, .. } => {
                    walk(some, names);
                    walk(none, names);
                }
                _ => {}
            }
        }
    }
    walk(&m.step, &mut names);
    names.extend(m.instances.iter().map(|(_, c)| c.clone()));
    program.machines.iter().filter(|x| names.contains(&x.name)).collect()
}

pub fn emit_header(program: &OProgram, m: &Machine) -> String {
    let mut out = String::new();
    let g = guard(&m.name);
    let _ = writeln!(out, "#ifndef {}\n#define {}\n\n#include \"types.h\"", g, g);
    let deps = callees(program, m);
    if !deps.is_empty() {
        out.push('\n');
    }
    for d in deps {
        let _ = writeln!(out, "#include \"{}.h\"", d.name);
    }
    out.push('\n');
    if m.kind == MachineKind::Prototype {
        out.push_str("/* Provided by external code. */\n");
        let _ = writeln!(out, "extern {};", signature(program, m, false));
    } else {
        if has_state(program, m) {
            let _ = writeln!(out, "{}\n{{", state_struct(&m.name));
            for c in &m.memory {
                let _ = writeln!(out, "    {} {};", c_type(&c.ty), c.name);
            }
            for (o, callee) in &m.instances {
                let cm = program.machine(callee).expect("instance of a known machine");
                if has_state(program, cm) {
                    let _ = writeln!(out, "    {} {};", state_struct(callee), o);
                }
            }
            out.push_str("};\n\n");
            let _ = writeln!(out, "void {}_reset({} *);", m.name, state_struct(&m.name));
        }
        let _ = writeln!(out, "{};", signature(program, m, false));
    }
    let _ = writeln!(out, "\n#endif");
    out
}

/// Local names whose values the emitted code actually reads. An assignment
/// to a name outside this set is not emitted, nor is a call to a builtin whose
/// result is unused, so liveness is computed to a fixpoint.
fn needed(program: &OProgram, m: &Machine) -> BTreeSet<String> {
    fn expr(e: &OExpr, out: &mut BTreeSet<String>) {
        if let OExpr::Var(v) | OExpr::SomeVar(v) = e {
            out.insert(v.clone());
        }
    }
    fn walk(program: &OProgram, m: &Machine, is: &[Instr], live: &BTreeSet<String>, out: &mut BTreeSet<String>) {
        for i in is {
            match i {
                Instr::Assign(x, e) if live.contains(x) => expr(e, out),
                Instr::Assign(..) => {}
                Instr::StateAssign(_, e) => expr(e, out),
                Instr::Return(e) => {
                    if m.output_ty != Type::Unit {
                        expr(e, out)
                    }
                }
                Instr::TupleConstruct(x, vs) => {
                    if live.contains(x) {
                        out.extend(vs.iter().cloned())
                    }
                }
                Instr::TupleDestruct(xs, t) => {
                    if xs.iter().any(|x| live.contains(x)) {
                        out.insert(t.clone());
                    }
                }
                Instr::Reset { .. } => {}
                Instr::If { cond, then_, else_ } => {
                    out.insert(cond.clone());
                    walk(program, m, then_, live, out);
                    walk(program, m, else_, live, out);
                }
                Instr::StepCall { result, machine, arg, .. } => {
                    let takes_arg = if builtins::is_builtin(machine) {
                        live.contains(result)
                    } else {
                        program.machine(machine).is_some_and(|c| c.input_ty != Type::Unit)
                    };
                    if takes_arg {
                        out.insert(arg.clone());
                    }
                }
                Instr::CaseOpt { scrutinee, some, none, .. } => {
                    out.insert(scrutinee.clone());
                    walk(program, m, some, live, out);
                    walk(program, m, none, live, out);
                }
            }
        }
    }
    let mut live = BTreeSet::new();
    loop {
        let mut next = BTreeSet::new();
        walk(program, m, &m.step, &live, &mut next);
        if next == live {
            return live;
        }
        live = next;
    }
}

struct Body<'a> {
    program: &'a OProgram,
    m: &'a Machine,
    used: BTreeSet<String>,
    out: String,
}

impl Body<'_> {
    fn line(&mut self, depth: usize, text: &str) {
        let _ = writeln!(self.out, "{}{}", "    ".repeat(depth), text);
    }

    fn id(&self, x: &str) -> String {
        local_ident(self.program, x)
    }

    fn ty_of(&self, x: &str) -> &Type {
        &self.m.locals[x]
    }

    fn expr(&self, e: &OExpr, ty: &Type) -> String {
        match e {
            OExpr::Var(v) => self.id(v),
            OExpr::State(v) => format!("self->{}", v),
            OExpr::Const(c) => c_const(c, ty),
            OExpr::None => c_const(&Value::none(), ty),
            OExpr::SomeVar(v) => format!("(({}){{ true, {} }})", c_type(ty), self.id(v)),
        }
    }

    fn call(&self, machine: &str, arg: &str, instance: &Option<String>) -> String {
        if let Some((b, operand)) = builtins::resolved(machine) {
            let a = self.id(arg);
            let wrapping = operand == Type::Int && matches!(b.name, "add" | "sub" | "mul" | "div" | "neg");
            return match (b.shape, wrapping) {
                (Shape::Unary, true) => format!("mimosa_{}(({}))", machine, a),
                (Shape::Unary, false) => format!("{}{}", b.symbol, a),
                (_, true) => format!("mimosa_{}({}._0, {}._1)", machine, a, a),
                (_, false) => format!("{}._0 {} {}._1", a, b.symbol, a),
            };
        }
        let callee = self.program.machine(machine).expect("call to a known machine");
        let mut args = args_of(&self.id(arg), &callee.input_ty);
        if has_state(self.program, callee) {
            let o = instance.as_ref().expect("stateful call has an instance");
            args.push(format!("&self->{}", o));
        }
        format!("{}({})", step_fn(callee), args.join(", "))
    }

    fn block(&mut self, is: &[Instr], depth: usize) {
        for i in is {
            match i {
                Instr::Assign(x, e) => {
                    if self.used.contains(x) {
                        let rhs = self.expr(e, self.ty_of(x));
                        self.line(depth, &format!("{} = {};", self.id(x), rhs));
                    }
                }
                Instr::StateAssign(x, e) => {
                    let ty = &self.m.memory_cell(x).expect("known memory cell").ty;
                    let rhs = self.expr(e, ty);
                    self.line(depth, &format!("self->{} = {};", x, rhs));
                }
                Instr::TupleConstruct(x, vs) => {
                    if self.used.contains(x) {
                        let items: Vec<String> = vs.iter().map(|v| self.id(v)).collect();
                        let t = c_type(self.ty_of(x));
                        self.line(depth, &format!("{} = (({}){{ {} }});", self.id(x), t, items.join(", ")));
                    }
                }
                Instr::TupleDestruct(xs, t) => {
                    for (k, x) in xs.iter().enumerate() {
                        if self.used.contains(x) {
                            self.line(depth, &format!("{} = {}._{};", self.id(x), self.id(t), k));
                        }
                    }
                }
                Instr::Reset { machine, instance } => {
                    let callee = self.program.machine(machine).expect("known machine");
                    if has_state(self.program, callee) {
                        self.line(depth, &format!("{}_reset(&self->{});", machine, instance));
                    }
                }
                Instr::Return(e) => {
                    if self.m.output_ty == Type::Unit {
                        self.line(depth, "return;");
                    } else {
                        let v = self.expr(e, &self.m.output_ty);
                        self.line(depth, &format!("return {};", v));
                    }
                }
                Instr::If { cond, then_, else_ } => {
                    self.line(depth, &format!("if ({}) {{", self.id(cond)));
                    self.block(then_, depth + 1);
                    self.line(depth, "} else {");
                    self.block(else_, depth + 1);
                    self.line(depth, "}");
                }
                Instr::StepCall { result, machine, arg, instance } => {
                    let call = self.call(machine, arg, instance);
                    let unit = self.ty_of(result) == &Type::Unit;
                    if unit || !self.used.contains(result) {
                        if builtins::is_builtin(machine) {
                            continue;
                        }
                        self.line(depth, &format!("{};", call));
                        if unit && self.used.contains(result) {
                            self.line(depth, &format!("{} = 0;", self.id(result)));
                        }
                    } else {
                        self.line(depth, &format!("{} = {};", self.id(result), call));
                    }
                }
                Instr::CaseOpt { scrutinee, bound, some, none } => {
                    let s = self.id(scrutinee);
                    self.line(depth, &format!("if ({}.is_some) {{", s));
                    if self.used.contains(bound) {
                        self.line(depth + 1, &format!("{} = {}.value;", self.id(bound), s));
                    }
                    self.block(some, depth + 1);
                    self.line(depth, "} else {");
                    self.block(none, depth + 1);
                    self.line(depth, "}");
                }
            }
        }
    }
}

pub fn emit_source(program: &OProgram, m: &Machine) -> String {
    let mut out = format!("#include \"{}.h\"\n", m.name);
    let stateful = has_state(program, m);
    if stateful {
        let _ = writeln!(out, "\nvoid {}_reset({} *self)\n{{", m.name, state_struct(&m.name));
        for i in &m.reset {
            match i {
                Instr::StateAssign(x, OExpr::Const(v)) => {
                    let ty = &m.memory_cell(x).expect("known memory cell").ty;
                    let _ = writeln!(out, "    self->{} = {};", x, c_const(v, ty));
                }
                Instr::Reset { machine, instance } => {
                    if program.machine(machine).is_some_and(|c| has_state(program, c)) {
                        let _ = writeln!(out, "    {}_reset(&self->{});", machine, instance);
                    }
                }
                other => panic!("unexpected reset instruction {:?}", other),
            }
        }
        out.push_str("}\n");
    }

    let used = needed(program, m);
    let mut body = Body { program, m, used, out: String::new() };
    let input_read = body.used.contains(&m.input);
    let mut decls = String::new();
    for (x, ty) in &m.locals {
        if !body.used.contains(x) || (x == &m.input && m.input_ty != Type::Unit) {
            continue;
        }
        let init = c_const(&Value::nil(ty), ty);
        let _ = writeln!(decls, "    {} {} = {};", c_type(ty), local_ident(program, x), init);
    }
    if !input_read {
        for p in param_names(m) {
            let _ = writeln!(decls, "    (void){};", p);
        }
    }
    body.block(&m.step, 1);
    let _ = writeln!(out, "\n{}\n{{", signature(program, m, true));
    out.push_str(&decls);
    if !decls.is_empty() && !body.out.is_empty() {
        out.push('\n');
    }
    out.push_str(&body.out);
    out.push_str("}\n");
    out
}
