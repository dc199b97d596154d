//! C representations of Mimosa types and constants, and `types.h`.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::ooir::OProgram;
use crate::types::Type;
use crate::value::{format_g17, Value};

const C_KEYWORDS: &[&str] = &[
    "auto",
    "break",
    "case",
    "char",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extern",
    "float",
    "for",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "register",
    "restrict",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "struct",
    "switch",
    "typedef",
    "union",
    "unsigned",
    "void",
    "volatile",
    "while",
    "_Bool",
    "_Complex",
    "_Imaginary",
    "bool",
    "true",
    "false",
    "self",
];

/// Escapes names that would clash with C keywords or the parameter `self`.
pub fn c_ident(name: &str) -> String {
    if C_KEYWORDS.contains(&name) {
        format!("{}_", name)
    } else {
        name.to_string()
    }
}

/// The C type used to store a value of `ty`.
pub fn c_type(ty: &Type) -> String {
    match ty {
        Type::Unit => "unit_t".into(),
        Type::Bool => "bool".into(),
        Type::Int => "int64_t".into(),
        Type::Float => "double".into(),
        Type::Option(_) | Type::Tuple(_) => format!("struct {}", ty.c_fragment()),
        Type::Var(v) => panic!("type variable {} reached code generation", v),
    }
}

/// Return type of a step function: unit results become `void`.
pub fn c_return_type(ty: &Type) -> String {
    match ty {
        Type::Unit => "void".into(),
        t => c_type(t),
    }
}

/// A C expression denoting `v` at type `ty`.
pub fn c_const(v: &Value, ty: &Type) -> String {
    match (v, ty) {
        (Value::Unit, _) => "0".into(),
        (Value::Bool(b), _) => b.to_string(),
        (Value::Int(i), Type::Float) => c_float(*i as f64),
        (Value::Int(i), _) => {
            if *i == i64::MIN {
                "INT64_MIN".into()
            } else {
                format!("INT64_C({})", i)
            }
        }
        (Value::Float(f), _) => c_float(*f),
        (Value::Option(inner), Type::Option(t)) => match inner {
            Some(x) => format!("(({}){{ true, {} }})", c_type(ty), c_const(x, t)),
            None => format!("(({}){{ false, {} }})", c_type(ty), c_const(&Value::nil(t), t)),
        },
        (Value::Tuple(vs), Type::Tuple(ts)) => {
            let fields: Vec<String> = vs.iter().zip(ts).map(|(v, t)| c_const(v, t)).collect();
            format!("(({}){{ {} }})", c_type(ty), fields.join(", "))
        }
        (v, t) => panic!("constant {} does not have type {}", v, t),
    }
}

fn c_float(f: f64) -> String {
    if f.is_nan() {
        return "NAN".into();
    }
    if f.is_infinite() {
        return if f > 0.0 { "HUGE_VAL".into() } else { "(-HUGE_VAL)".into() };
    }
    let s = format_g17(f);
    if s.contains(['.', 'e']) {
        s
    } else {
        format!("{}.0", s)
    }
}

/// Every option and tuple type mentioned by the machines or the channels.
pub fn composite_types<'a>(program: &OProgram, extra: impl IntoIterator<Item = &'a Type>) -> BTreeSet<Type> {
    let mut out = BTreeSet::new();
    let mut add = |t: &Type| collect(t, &mut out);
    for m in &program.machines {
        add(&m.input_ty);
        add(&m.output_ty);
        m.memory.iter().for_each(|c| add(&c.ty));
        m.locals.values().for_each(&mut add);
    }
    extra.into_iter().for_each(add);
    out
}

fn collect(t: &Type, out: &mut BTreeSet<Type>) {
    match t {
        Type::Option(inner) => {
            collect(inner, out);
            out.insert(t.clone());
        }
        Type::Tuple(ts) => {
            ts.iter().for_each(|x| collect(x, out));
            out.insert(t.clone());
        }
        _ => {}
    }
}

fn children(t: &Type) -> Vec<&Type> {
    match t {
        Type::Option(inner) => vec![inner],
        Type::Tuple(ts) => ts.iter().collect(),
        _ => vec![],
    }
}

/// Composite types ordered so that each follows its components, ties by name.
pub fn declaration_order(types: &BTreeSet<Type>) -> Vec<Type> {
    let mut done: BTreeSet<&Type> = BTreeSet::new();
    let mut order = Vec::new();
    let mut pending: Vec<&Type> = types.iter().collect();
    pending.sort_by_key(|t| t.c_fragment());
    while !pending.is_empty() {
        let i = pending
            .iter()
            .position(|t| children(t).iter().all(|c| !types.contains(*c) || done.contains(c)))
            .expect("component types are always collected");
        let t = pending.remove(i);
        done.insert(t);
        order.push(t.clone());
    }
    order
}

const PROLOGUE: &str = "\
#ifndef MIMOSA_TYPES_H
#define MIMOSA_TYPES_H

#include <math.h>
#include <stdbool.h>
#include <stdint.h>

#include \"runtime.h\"

typedef unsigned char unit_t;

/* Integer arithmetic wraps and division by zero yields 0. */
static inline int64_t mimosa_add_int(int64_t a, int64_t b) { return (int64_t)((uint64_t)a + (uint64_t)b); }
static inline int64_t mimosa_sub_int(int64_t a, int64_t b) { return (int64_t)((uint64_t)a - (uint64_t)b); }
static inline int64_t mimosa_mul_int(int64_t a, int64_t b) { return (int64_t)((uint64_t)a * (uint64_t)b); }
static inline int64_t mimosa_neg_int(int64_t a) { return (int64_t)(0u - (uint64_t)a); }
static inline int64_t mimosa_div_int(int64_t a, int64_t b)
{
    if (b == 0)
        return 0;
    if (a == INT64_MIN && b == -1)
        return INT64_MIN;
    return a / b;
}
";

/// Name of the trace printer for values of `ty`.
pub fn trace_fn(ty: &Type) -> String {
    format!("trace_{}", ty.c_fragment())
}

pub fn emit_types(types: &BTreeSet<Type>) -> String {
    let order = declaration_order(types);
    let mut out = String::from(PROLOGUE);
    for t in &order {
        out.push('\n');
        match t {
            Type::Option(inner) => {
                let _ = writeln!(
                    out,
                    "struct {}\n{{\n    bool is_some;\n    {} value;\n}};",
                    t.c_fragment(),
                    c_type(inner)
                );
            }
            Type::Tuple(ts) => {
                let _ = writeln!(out, "struct {}\n{{", t.c_fragment());
                for (i, x) in ts.iter().enumerate() {
                    let _ = writeln!(out, "    {} _{};", c_type(x), i);
                }
                out.push_str("};\n");
            }
            _ => unreachable!(),
        }
    }
    if !order.is_empty() {
        out.push_str("\n#ifdef MIMOSA_TRACE\n");
        for t in &order {
            let _ = writeln!(out, "static inline void {}({} v)\n{{", trace_fn(t), c_type(t));
            match t {
                Type::Option(inner) => {
                    let _ = writeln!(
                        out,
                        "    if (v.is_some) {{\n        trace_text(\"Some(\");\n        {}(v.value);\n        trace_text(\")\");\n    }} else {{\n        trace_text(\"None\");\n    }}",
                        trace_fn(inner)
                    );
                }
                Type::Tuple(ts) => {
                    out.push_str("    trace_text(\"(\");\n");
                    for (i, x) in ts.iter().enumerate() {
                        if i > 0 {
                            out.push_str("    trace_text(\",\");\n");
                        }
                        let _ = writeln!(out, "    {}(v._{});", trace_fn(x), i);
                    }
                    out.push_str("    trace_text(\")\");\n");
                }
                _ => unreachable!(),
            }
            out.push_str("}\n");
        }
        out.push_str("#endif\n");
    }
    out.push_str("\n#endif\n");
    out
}
