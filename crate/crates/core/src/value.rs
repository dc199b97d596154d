//! Runtime values and their canonical text form (shared by the trace and stimulus formats).

use std::fmt;

use crate::types::Type;

/// A runtime value. Floats compare by bit pattern so traces stay comparable even with NaN.
#[derive(Debug, Clone)]
pub enum Value {
    Unit,
    Bool(bool),
    Int(i64),
    Float(f64),
    Option(Option<Box<Value>>),
    Tuple(Vec<Value>),
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Unit, Value::Unit) => true,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Float(a), Value::Float(b)) => a.to_bits() == b.to_bits(),
            (Value::Option(a), Value::Option(b)) => a == b,
            (Value::Tuple(a), Value::Tuple(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Value {
    pub fn some(v: Value) -> Value {
        Value::Option(Some(Box::new(v)))
    }

    pub fn none() -> Value {
        Value::Option(None)
    }

    /// The arbitrary per-type constant used to fill uninitialised memory.
    pub fn nil(ty: &Type) -> Value {
        match ty {
            Type::Unit | Type::Var(_) => Value::Unit,
            Type::Bool => Value::Bool(false),
            Type::Int => Value::Int(0),
            Type::Float => Value::Float(0.0),
            Type::Option(_) => Value::none(),
            Type::Tuple(ts) => Value::Tuple(ts.iter().map(Value::nil).collect()),
        }
    }

    pub fn has_type(&self, ty: &Type) -> bool {
        match (self, ty) {
            (Value::Unit, Type::Unit)
            | (Value::Bool(_), Type::Bool)
            | (Value::Int(_), Type::Int)
            | (Value::Float(_), Type::Float) => true,
            (Value::Option(None), Type::Option(_)) => true,
            (Value::Option(Some(v)), Type::Option(t)) => v.has_type(t),
            (Value::Tuple(vs), Type::Tuple(ts)) => {
                vs.len() == ts.len() && vs.iter().zip(ts).all(|(v, t)| v.has_type(t))
            }
            _ => false,
        }
    }

    /// Converts integer literals to floats where a float is expected; `None` on mismatch.
    pub fn coerce(self, ty: &Type) -> Option<Value> {
        match (self, ty) {
            (Value::Int(i), Type::Float) => Some(Value::Float(i as f64)),
            (Value::Option(Some(v)), Type::Option(t)) => v.coerce(t).map(Value::some),
            (Value::Tuple(vs), Type::Tuple(ts)) if vs.len() == ts.len() => {
                vs.into_iter().zip(ts).map(|(v, t)| v.coerce(t)).collect::<Option<Vec<_>>>().map(Value::Tuple)
            }
            (v, t) if v.has_type(t) => Some(v),
            _ => None,
        }
    }

    /// Splits a packed step argument/result back into its ports.
    pub fn unpack(self, arity: usize) -> Vec<Value> {
        match (arity, self) {
            (0, _) => Vec::new(),
            (1, v) => vec![v],
            (_, Value::Tuple(vs)) => vs,
            (_, v) => vec![v],
        }
    }

    pub fn pack(mut vs: Vec<Value>) -> Value {
        match vs.len() {
            0 => Value::Unit,
            1 => vs.pop().unwrap(),
            _ => Value::Tuple(vs),
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

/// Formats a float like C's `printf("%.17g")`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x.is_nan() {
        return if x.is_sign_negative() { "-nan".into() } else { "nan".into() };
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..PRECISION).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", m, sign, exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Bool(b) => write!(f, "{}", b),
            Value::Int(i) => write!(f, "{}", i),
            Value::Float(x) => f.write_str(&format_g17(*x)),
            Value::Option(None) => f.write_str("None"),
            Value::Option(Some(v)) => write!(f, "Some({})", v),
            Value::Tuple(vs) => {
                f.write_str("(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", v)?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid value at column {col}: {message}")]
pub struct ValueParseError {
    pub col: usize,
    pub message: String,
}

/// Parses a comma separated list of values in trace syntax.
pub fn parse_value_list(text: &str) -> Result<Vec<Value>, ValueParseError> {
    let mut p = ValueParser { src: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    p.skip_ws();
    if p.at_end() {
        return Ok(out);
    }
    loop {
        out.push(p.value()?);
        p.skip_ws();
        if p.at_end() {
            return Ok(out);
        }
        p.expect(b',')?;
    }
}

/// Parses a single value in trace syntax.
pub fn parse_value(text: &str) -> Result<Value, ValueParseError> {
    let mut p = ValueParser { src: text.as_bytes(), pos: 0 };
    let v = p.value()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(v)
}

struct ValueParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ValueParser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> ValueParseError {
        ValueParseError { col: self.pos + 1, message: message.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<(), ValueParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'-' || c == b'+')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn value(&mut self) -> Result<Value, ValueParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("expected a value")),
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    return Ok(Value::Unit);
                }
                let mut items = vec![self.value()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            items.push(self.value()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
                if items.len() == 1 {
                    Ok(items.pop().unwrap())
                } else {
                    Ok(Value::Tuple(items))
                }
            }
            Some(_) => {
                let start = self.pos;
                let w = self.word();
                match w {
                    "" => Err(self.error("unexpected character")),
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    "None" => Ok(Value::none()),
                    "Some" => {
                        self.expect(b'(')?;
                        let v = self.value()?;
                        self.expect(b')')?;
                        Ok(Value::some(v))
                    }
                    "inf" => Ok(Value::Float(f64::INFINITY)),
                    "-inf" => Ok(Value::Float(f64::NEG_INFINITY)),
                    "nan" => Ok(Value::Float(f64::NAN)),
                    _ => {
                        if let Ok(i) = w.parse::<i64>() {
                            Ok(Value::Int(i))
                        } else if let Ok(x) = w.parse::<f64>() {
                            Ok(Value::Float(x))
                        } else {
                            self.pos = start;
                            Err(self.error(&format!("cannot read '{}' as a value", w)))
                        }
                    }
                }
            }
        }
    }
}
