//! Arithmetic and logic operators, modelled as stateless external steps.
//!
//! Surface operators parse to applications of the generic names below
//! (`a + b` is `add (a, b)`). Type inference resolves each use to a
//! monomorphic instance such as `add_int`, which later phases evaluate
//! (simulator) or lower to a C expression (code generator).

use crate::types::Type;
use crate::value::Value;

/// Which operand types an overloaded builtin accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    /// int or float
    Num,
    /// int, float or bool
    Eq,
    /// bool only
    Bool,
}

impl Class {
    pub fn admits(self, ty: &Type) -> bool {
        match self {
            Class::Num => matches!(ty, Type::Int | Type::Float),
            Class::Eq => matches!(ty, Type::Int | Type::Float | Type::Bool),
            Class::Bool => matches!(ty, Type::Bool),
        }
    }
}

/// Shape of a builtin's signature over its operand type `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `t -> t`
    Unary,
    /// `(t, t) -> t`
    Binary,
    /// `(t, t) -> bool`
    Compare,
}

#[derive(Debug, Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub symbol: &'static str,
    pub class: Class,
    pub shape: Shape,
}

pub const BUILTINS: &[Builtin] = &[
    Builtin { name: "add", symbol: "+", class: Class::Num, shape: Shape::Binary },
    Builtin { name: "sub", symbol: "-", class: Class::Num, shape: Shape::Binary },
    Builtin { name: "mul", symbol: "*", class: Class::Num, shape: Shape::Binary },
    Builtin { name: "div", symbol: "/", class: Class::Num, shape: Shape::Binary },
    Builtin { name: "neg", symbol: "-", class: Class::Num, shape: Shape::Unary },
    Builtin { name: "not", symbol: "!", class: Class::Bool, shape: Shape::Unary },
    Builtin { name: "land", symbol: "&&", class: Class::Bool, shape: Shape::Binary },
    Builtin { name: "lor", symbol: "||", class: Class::Bool, shape: Shape::Binary },
    Builtin { name: "eq", symbol: "==", class: Class::Eq, shape: Shape::Compare },
    Builtin { name: "ne", symbol: "!=", class: Class::Eq, shape: Shape::Compare },
    Builtin { name: "lt", symbol: "<", class: Class::Num, shape: Shape::Compare },
    Builtin { name: "le", symbol: "<=", class: Class::Num, shape: Shape::Compare },
    Builtin { name: "gt", symbol: ">", class: Class::Num, shape: Shape::Compare },
    Builtin { name: "ge", symbol: ">=", class: Class::Num, shape: Shape::Compare },
];

/// Looks up a generic builtin name (`add`).
pub fn generic(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

/// Looks up a resolved builtin name (`add_int`) and returns it with its operand type.
pub fn resolved(name: &str) -> Option<(&'static Builtin, Type)> {
    let (base, suffix) = name.rsplit_once('_')?;
    let b = generic(base)?;
    let ty = match suffix {
        "int" => Type::Int,
        "float" => Type::Float,
        "bool" => Type::Bool,
        _ => return None,
    };
    b.class.admits(&ty).then_some((b, ty))
}

/// Either form (generic or resolved).
pub fn is_builtin(name: &str) -> bool {
    generic(name).is_some() || resolved(name).is_some()
}

pub fn resolve_name(b: &Builtin, operand: &Type) -> String {
    let suffix = match operand {
        Type::Int => "int",
        Type::Float => "float",
        _ => "bool",
    };
    format!("{}_{}", b.name, suffix)
}

/// Generic name of a binary infix symbol.
pub fn binary_for_symbol(sym: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|b| b.symbol == sym && b.shape != Shape::Unary).map(|b| b.name)
}

/// Integer division that never traps: division by zero yields 0 and overflow wraps.
pub fn int_div(a: i64, b: i64) -> i64 {
    if b == 0 {
        0
    } else {
        a.wrapping_div(b)
    }
}

/// Evaluates a resolved builtin on its (packed) argument.
pub fn eval(name: &str, arg: &Value) -> Option<Value> {
    let (b, _) = resolved(name)?;
    let pair = |v: &Value| match v {
        Value::Tuple(vs) if vs.len() == 2 => Some((vs[0].clone(), vs[1].clone())),
        _ => None,
    };
    use Value::*;
    let out = match b.shape {
        Shape::Unary => match (b.name, arg) {
            ("neg", Int(a)) => Int(a.wrapping_neg()),
            ("neg", Float(a)) => Float(-a),
            ("not", Bool(a)) => Bool(!a),
            _ => return None,
        },
        Shape::Binary => match (b.name, pair(arg)?) {
            ("add", (Int(a), Int(c))) => Int(a.wrapping_add(c)),
            ("sub", (Int(a), Int(c))) => Int(a.wrapping_sub(c)),
            ("mul", (Int(a), Int(c))) => Int(a.wrapping_mul(c)),
            ("div", (Int(a), Int(c))) => Int(int_div(a, c)),
            ("add", (Float(a), Float(c))) => Float(a + c),
            ("sub", (Float(a), Float(c))) => Float(a - c),
            ("mul", (Float(a), Float(c))) => Float(a * c),
            ("div", (Float(a), Float(c))) => Float(a / c),
            ("land", (Bool(a), Bool(c))) => Bool(a && c),
            ("lor", (Bool(a), Bool(c))) => Bool(a || c),
            _ => return None,
        },
        Shape::Compare => {
            let (l, r) = pair(arg)?;
            let ord = match (&l, &r) {
                (Int(a), Int(c)) => a.partial_cmp(c),
                (Float(a), Float(c)) => a.partial_cmp(c),
                (Bool(a), Bool(c)) => a.partial_cmp(c),
                _ => return None,
            };
            use std::cmp::Ordering::*;
            Bool(match b.name {
                "eq" => ord == Some(Equal),
                "ne" => ord != Some(Equal),
                "lt" => ord == Some(Less),
                "le" => matches!(ord, Some(Less | Equal)),
                "gt" => ord == Some(Greater),
                "ge" => matches!(ord, Some(Greater | Equal)),
                _ => return None,
            })
        }
    };
    Some(out)
}

/// Signature `(input, output)` of a builtin instantiated at operand type `t`.
pub fn signature(b: &Builtin, t: Type) -> (Type, Type) {
    match b.shape {
        Shape::Unary => (t.clone(), t),
        Shape::Binary => (Type::Tuple(vec![t.clone(), t.clone()]), t),
        Shape::Compare => (Type::Tuple(vec![t.clone(), t]), Type::Bool),
    }
}
