//! `network.c`: queues, one task function per node, and `main`.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::frontend::ast::{NodeDecl, Program};
use crate::ooir::{Machine, OProgram};
use crate::sema::ground_type;
use crate::types::Type;

use super::ctypes::{c_const, c_type, trace_fn};
use super::machine::{has_state, state_struct, step_fn};
use super::model::DeploymentModel;

/// Global C names of the channel queues, avoiding task-local names.
struct Names {
    reserved: BTreeSet<String>,
    size_macros: Vec<String>,
}

impl Names {
    fn new(program: &Program) -> Names {
        let mut reserved: BTreeSet<String> =
            ["now", "next_period", "self", "r", "in", "main"].iter().map(|s| s.to_string()).collect();
        for c in &program.channels {
            for suffix in ["_avail", "_val", "_stamps"] {
                reserved.insert(format!("{}{}", c.name, suffix));
            }
        }
        for n in &program.nodes {
            reserved.insert(format!("{}_period", n.name));
            reserved.insert(format!("{}_task", n.name));
        }
        for s in &program.steps {
            reserved.insert(s.name.clone());
            reserved.insert(format!("{}_step", s.name));
            reserved.insert(format!("{}_reset", s.name));
        }
        let upper: Vec<String> = program.channels.iter().map(|c| format!("{}_SIZE", c.name.to_uppercase())).collect();
        let distinct: BTreeSet<&String> = upper.iter().collect();
        let size_macros = if distinct.len() == upper.len() {
            upper
        } else {
            program.channels.iter().map(|c| format!("{}_SIZE", c.name)).collect()
        };
        Names { reserved, size_macros }
    }

    fn queue(&self, channel: &str) -> String {
        let base = super::ctypes::c_ident(channel);
        if self.reserved.contains(&base) {
            format!("{}_ch", base)
        } else {
            base
        }
    }

    fn stamps(&self, channel: &str) -> String {
        format!("{}_stamps", self.queue(channel))
    }
}

fn channel_type(program: &Program, name: &str) -> Type {
    let c = program.channel(name).expect("checked channel");
    ground_type(&c.ty).expect("channels are monomorphic")
}

fn local(channel: &str, suffix: &str) -> String {
    format!("{}_{}", channel, suffix)
}

fn emit_task(out: &mut String, program: &Program, machines: &OProgram, names: &Names, node: &NodeDecl) {
    let m: &Machine = machines.machine(&node.step).expect("node step has a machine");
    let stateful = has_state(machines, m);
    let _ = writeln!(out, "static void {}_task(void)\n{{", node.name);
    if stateful {
        let _ = writeln!(out, "    {} self;\n    {}_reset(&self);\n", state_struct(&m.name), m.name);
    }
    let _ = writeln!(out, "    timestamp_t now = 0;\n\n    while (1) {{");
    let _ = writeln!(out, "        timestamp_t next_period = now + {}_period;", node.name);

    let required: Vec<&str> = node.inputs.iter().filter(|p| !p.optional).map(|p| p.channel.as_str()).collect();
    let mut depth = 2;
    let pad = |d: usize| "    ".repeat(d);
    for c in &required {
        let _ = writeln!(out, "{}bool {} = check_avail(now, {});", pad(depth), local(c, "avail"), names.stamps(c));
    }
    if !required.is_empty() {
        let cond: Vec<String> = required.iter().map(|c| local(c, "avail")).collect();
        let _ = writeln!(out, "{}if ({}) {{", pad(depth), cond.join(" && "));
        depth += 1;
    }
    let p = pad(depth);
    for port in &node.inputs {
        let c = &port.channel;
        let ty = channel_type(program, c);
        let v = local(c, "val");
        if port.optional {
            let oty = Type::option(ty.clone());
            let _ = writeln!(out, "{}{} {} = {};", p, c_type(&oty), v, c_const(&crate::value::Value::none(), &oty));
            let _ = writeln!(out, "{}if (check_avail(now, {})) {{", p, names.stamps(c));
            let _ = writeln!(out, "{}    {}.is_some = true;", p, v);
            let _ = writeln!(out, "{}    queue_recv({}, &{}.value);", p, names.queue(c), v);
            let _ = writeln!(out, "{}    queue_recv({}, NULL);", p, names.stamps(c));
            let _ = writeln!(out, "{}}}", p);
        } else {
            let _ = writeln!(out, "{}{} {};", p, c_type(&ty), v);
            let _ = writeln!(out, "{}queue_recv({}, &{});", p, names.queue(c), v);
            let _ = writeln!(out, "{}queue_recv({}, NULL);", p, names.stamps(c));
        }
    }

    let vals: Vec<String> = node.inputs.iter().map(|port| local(&port.channel, "val")).collect();
    let mut args = Vec::new();
    if vals.len() > 1 {
        let _ =
            writeln!(out, "{}{} in = (({}){{ {} }});", p, c_type(&m.input_ty), c_type(&m.input_ty), vals.join(", "));
        args.push("in".to_string());
    } else if m.input_ty != Type::Unit {
        args.extend(vals);
    }
    if stateful {
        args.push("&self".into());
    }
    let call = format!("{}({})", step_fn(m), args.join(", "));
    if m.output_ty == Type::Unit {
        let _ = writeln!(out, "{}{};", p, call);
    } else {
        let _ = writeln!(out, "{}{} r = {};", p, c_type(&m.output_ty), call);
    }

    let _ = writeln!(out, "\n{}TRACE(trace_begin(now, \"FIRE\", \"{}\"));", p, node.name);
    let _ = writeln!(out, "{}TRACE(trace_open(\"in\"));", p);
    for port in &node.inputs {
        let ty = channel_type(program, &port.channel);
        let ty = if port.optional { Type::option(ty) } else { ty };
        let _ = writeln!(out, "{}TRACE(trace_sep());", p);
        let _ = writeln!(out, "{}TRACE({}({}));", p, trace_fn(&ty), local(&port.channel, "val"));
    }
    let _ = writeln!(out, "{}TRACE(trace_close());", p);
    let _ = writeln!(out, "{}TRACE(trace_open(\"out\"));", p);
    let many = node.outputs.len() > 1;
    for (k, port) in node.outputs.iter().enumerate() {
        let c = &port.channel;
        let ty = channel_type(program, c);
        let r = if many { format!("r._{}", k) } else { "r".to_string() };
        let (value, q) = if port.optional {
            let _ = writeln!(out, "{}if ({}.is_some) {{", p, r);
            (format!("{}.value", r), format!("{}    ", p))
        } else {
            (r.clone(), p.clone())
        };
        let value_expr = if ty == Type::Unit { "0".to_string() } else { value.clone() };
        if ty == Type::Unit {
            let _ = writeln!(out, "{}unit_t {} = 0;", q, local(c, "out"));
        }
        let sent = if ty == Type::Unit { local(c, "out") } else { value.clone() };
        let _ = writeln!(out, "{}if (!queue_send({}, &{})) {{", q, names.queue(c), sent);
        let _ = writeln!(out, "{}    TRACE(trace_close());\n{}    TRACE(trace_end());", q, q);
        let _ = writeln!(out, "{}    channel_overflow(now, \"{}\");", q, c);
        let _ = writeln!(out, "{}}}", q);
        let _ = writeln!(out, "{}(void)queue_send({}, &next_period);", q, names.stamps(c));
        let _ = writeln!(out, "{}TRACE(trace_sep());", q);
        let _ = writeln!(out, "{}TRACE(trace_text(\"{}:\"));", q, c);
        let _ = writeln!(out, "{}TRACE({}({}));", q, trace_fn(&ty), value_expr);
        let _ = writeln!(out, "{}TRACE(trace_stamp(next_period));", q);
        if port.optional {
            let _ = writeln!(out, "{}}}", p);
        }
    }
    let _ = writeln!(out, "{}TRACE(trace_close());", p);
    let _ = writeln!(out, "{}TRACE(trace_end());", p);

    if !required.is_empty() {
        depth -= 1;
        let p = pad(depth);
        let _ = writeln!(out, "{}}} else {{", p);
        let _ = writeln!(out, "{}    TRACE(trace_begin(now, \"SKIP\", \"{}\"));", p, node.name);
        let _ = writeln!(out, "{}    TRACE(trace_open(\"missing\"));", p);
        for c in &required {
            let _ = writeln!(out, "{}    if (!{}) {{", p, local(c, "avail"));
            let _ = writeln!(out, "{}        TRACE(trace_sep());", p);
            let _ = writeln!(out, "{}        TRACE(trace_text(\"{}\"));", p, c);
            let _ = writeln!(out, "{}    }}", p);
        }
        let _ = writeln!(out, "{}    TRACE(trace_close());", p);
        let _ = writeln!(out, "{}    TRACE(trace_end());", p);
        let _ = writeln!(out, "{}}}", p);
    }
    let _ = writeln!(out, "        now = next_period;\n        sleep_until(next_period);\n    }}\n}}\n");
}

pub fn emit_network(program: &Program, machines: &OProgram, model: &DeploymentModel) -> String {
    let names = Names::new(program);
    let mut out = String::new();
    let mut headers: Vec<&str> = program.nodes.iter().map(|n| n.step.as_str()).collect();
    headers.sort();
    headers.dedup();
    out.push_str("#include \"runtime.h\"\n#include \"types.h\"\n");
    for h in &headers {
        let _ = writeln!(out, "#include \"{}.h\"", h);
    }
    out.push('\n');
    for (c, size) in program.channels.iter().zip(&names.size_macros) {
        let _ = writeln!(out, "#define {} {}", size, model.channels.get(&c.name).copied().unwrap_or(1));
    }
    if !program.channels.is_empty() {
        out.push('\n');
    }
    for n in &program.nodes {
        let _ = writeln!(out, "static const timestamp_t {}_period = {};", n.name, n.period_us);
    }
    if !program.nodes.is_empty() {
        out.push('\n');
    }
    for c in &program.channels {
        let _ = writeln!(out, "static queue_t {};\nstatic queue_t {};", names.queue(&c.name), names.stamps(&c.name));
    }
    if !program.channels.is_empty() {
        out.push('\n');
    }
    for n in &program.nodes {
        emit_task(&mut out, program, machines, &names, n);
    }
    out.push_str("int main(void)\n{\n");
    for (c, size) in program.channels.iter().zip(&names.size_macros) {
        let ty = channel_type(program, &c.name);
        let _ = writeln!(out, "    {} = create_queue({}, sizeof({}));", names.queue(&c.name), size, c_type(&ty));
        let _ = writeln!(out, "    {} = create_queue({}, sizeof(timestamp_t));", names.stamps(&c.name), size);
    }
    for n in &program.nodes {
        let t = model.nodes.get(&n.name).copied().unwrap_or(super::model::TaskParams { priority: 0, stack: 1024 });
        let _ = writeln!(out, "    spawn_task({}_task, \"{}\", {}u, {}u);", n.name, n.name, t.priority, t.stack);
    }
    out.push_str("    start_scheduler();\n    return 0;\n}\n");
    out
}
