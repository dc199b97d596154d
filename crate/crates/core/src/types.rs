//! Semantic types shared by every phase after parsing.

use std::collections::BTreeMap;
use std::fmt;

/// A (possibly non-ground) Mimosa type. `Var` carries an inference variable id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Unit,
    Bool,
    Int,
    Float,
    Option(Box<Type>),
    Tuple(Vec<Type>),
    Var(u32),
}

impl Type {
    pub fn option(inner: Type) -> Type {
        Type::Option(Box::new(inner))
    }

    /// Packs a list of port types the way steps receive and return them:
    /// no element is unit, one element is itself, more become a tuple.
    pub fn pack(mut tys: Vec<Type>) -> Type {
        match tys.len() {
            0 => Type::Unit,
            1 => tys.pop().unwrap(),
            _ => Type::Tuple(tys),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Option(t) => t.is_ground(),
            Type::Tuple(ts) => ts.iter().all(Type::is_ground),
            _ => true,
        }
    }

    /// Type variables in order of first occurrence.
    pub fn free_vars(&self, out: &mut Vec<u32>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Type::Option(t) => t.free_vars(out),
            Type::Tuple(ts) => ts.iter().for_each(|t| t.free_vars(out)),
            _ => {}
        }
    }

    pub fn subst(&self, map: &BTreeMap<u32, Type>) -> Type {
        match self {
            Type::Var(v) => map.get(v).cloned().unwrap_or(Type::Var(*v)),
            Type::Option(t) => Type::option(t.subst(map)),
            Type::Tuple(ts) => Type::Tuple(ts.iter().map(|t| t.subst(map)).collect()),
            t => t.clone(),
        }
    }

    /// One-way matching: extends `map` so that `self.subst(map) == target`.
    pub fn match_against(&self, target: &Type, map: &mut BTreeMap<u32, Type>) -> bool {
        match (self, target) {
            (Type::Var(v), t) => match map.get(v) {
                Some(bound) => bound == t,
                None => {
                    map.insert(*v, t.clone());
                    true
                }
            },
            (Type::Option(a), Type::Option(b)) => a.match_against(b, map),
            (Type::Tuple(a), Type::Tuple(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.match_against(y, map))
            }
            (a, b) => a == b,
        }
    }

    /// Compact mangling used for monomorphic copy names:
    /// unit=u, bool=b, int=i, float=f, option(t)=o<t>, tuple=T<k><t1..tk>.
    pub fn mangle(&self) -> String {
        let mut s = String::new();
        self.mangle_into(&mut s);
        s
    }

    fn mangle_into(&self, s: &mut String) {
        match self {
            Type::Unit => s.push('u'),
            Type::Bool => s.push('b'),
            Type::Int => s.push('i'),
            Type::Float => s.push('f'),
            Type::Option(t) => {
                s.push('o');
                t.mangle_into(s);
            }
            Type::Tuple(ts) => {
                s.push('T');
                s.push_str(&ts.len().to_string());
                ts.iter().for_each(|t| t.mangle_into(s));
            }
            Type::Var(v) => {
                s.push('v');
                s.push_str(&v.to_string());
            }
        }
    }

    /// Name fragment used for generated C type names (`opt_bool`, `tup2_int_bool`).
    pub fn c_fragment(&self) -> String {
        match self {
            Type::Unit => "unit".into(),
            Type::Bool => "bool".into(),
            Type::Int => "int".into(),
            Type::Float => "float".into(),
            Type::Option(t) => format!("opt_{}", t.c_fragment()),
            Type::Tuple(ts) => {
                let parts: Vec<String> = ts.iter().map(Type::c_fragment).collect();
                format!("tup{}_{}", ts.len(), parts.join("_"))
            }
            Type::Var(v) => format!("var{}", v),
        }
    }
}

fn var_name(v: u32) -> String {
    let letter = (b'a' + (v % 26) as u8) as char;
    if v < 26 {
        format!("'{}", letter)
    } else {
        format!("'{}{}", letter, v / 26)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Unit => f.write_str("unit"),
            Type::Bool => f.write_str("bool"),
            Type::Int => f.write_str("int"),
            Type::Float => f.write_str("float"),
            Type::Option(t) => write!(f, "{}?", t),
            Type::Tuple(ts) => {
                f.write_str("(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", t)?;
                }
                f.write_str(")")
            }
            Type::Var(v) => f.write_str(&var_name(*v)),
        }
    }
}

/// Renames the variables of a set of types to 0, 1, 2, ... in order of appearance,
/// so that printed signatures read `'a -> 'a` regardless of inference numbering.
pub fn canonicalize(tys: &[Type]) -> Vec<Type> {
    let mut vars = Vec::new();
    tys.iter().for_each(|t| t.free_vars(&mut vars));
    let map: BTreeMap<u32, Type> = vars.iter().enumerate().map(|(i, v)| (*v, Type::Var(i as u32))).collect();
    tys.iter().map(|t| t.subst(&map)).collect()
}
