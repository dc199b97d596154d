//! Scripted return values for prototypes.
//!
//! ```text
//! [extern poll]
//! returns = false, true, true, false
//! ```
//!
//! Each call consumes the next value; the last one repeats forever.

use std::collections::{BTreeMap, HashMap};

use crate::diag::{Diagnostic, Loc, Phase};
use crate::ooir::{MachineKind, OProgram};
use crate::types::Type;
use crate::value::{parse_value_list, Value};

use super::{Externs, InternalError};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Stimulus {
    pub scripts: BTreeMap<String, Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StimulusError {
    #[error("line {line}: {message}")]
    Syntax { line: u32, col: u32, message: String },
    #[error("no prototype named '{0}'")]
    UnknownPrototype(String),
    #[error("prototype '{prototype}' returns {expected}, but script value {value} does not fit")]
    TypeMismatch { prototype: String, expected: Type, value: String },
    #[error("no script for prototype '{0}'")]
    MissingScript(String),
}

impl From<StimulusError> for Diagnostic {
    fn from(e: StimulusError) -> Self {
        let loc = match &e {
            StimulusError::Syntax { line, col, .. } => Some(Loc::new(0, *line, *col)),
            _ => None,
        };
        let message = match &e {
            StimulusError::Syntax { message, .. } => message.clone(),
            other => other.to_string(),
        };
        Diagnostic::new(Phase::Stimulus, loc, message)
    }
}

pub fn parse_stimulus(text: &str) -> Result<Stimulus, StimulusError> {
    let mut scripts = BTreeMap::new();
    let mut current: Option<(String, u32, bool)> = None;
    let close = |cur: Option<(String, u32, bool)>| match cur {
        Some((name, line, false)) => {
            Err(StimulusError::Syntax { line, col: 1, message: format!("extern '{}' has no 'returns' entry", name) })
        }
        _ => Ok(()),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i as u32 + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let syntax = |message: String| StimulusError::Syntax { line, col: 1, message };
        if let Some(h) = trimmed.strip_prefix('[') {
            close(current.take())?;
            let h = h.strip_suffix(']').ok_or_else(|| syntax("expected ']'".into()))?;
            let mut words = h.split_whitespace();
            let (Some("extern"), Some(name), None) = (words.next(), words.next(), words.next()) else {
                return Err(syntax(format!("malformed section header '[{}]'", h)));
            };
            if scripts.contains_key(name) {
                return Err(syntax(format!("duplicate section for extern '{}'", name)));
            }
            current = Some((name.to_string(), line, false));
            continue;
        }
        let (key, _) =
            trimmed.split_once('=').ok_or_else(|| syntax(format!("expected 'returns = ...', found '{}'", trimmed)))?;
        let Some((name, _, seen)) = current.as_mut() else {
            return Err(syntax("entry outside of any section".into()));
        };
        if key.trim() != "returns" {
            return Err(syntax(format!("unknown key '{}'", key.trim())));
        }
        if *seen {
            return Err(syntax("duplicate key 'returns'".into()));
        }
        *seen = true;
        let offset = content.find('=').unwrap() + 1;
        let vals = parse_value_list(&content[offset..]).map_err(|e| StimulusError::Syntax {
            line,
            col: (offset + e.col) as u32,
            message: e.message,
        })?;
        if vals.is_empty() {
            return Err(syntax(format!("script for '{}' is empty", name)));
        }
        scripts.insert(name.clone(), vals);
    }
    close(current)?;
    Ok(Stimulus { scripts })
}

impl Stimulus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, prototype: &str, values: Vec<Value>) -> Self {
        self.scripts.insert(prototype.to_string(), values);
        self
    }

    /// Checks scripts against the prototypes of `program`, converting integer
    /// literals for float-typed results. Unit prototypes default to `()`.
    pub fn resolve(&self, program: &OProgram) -> Result<Stimulus, StimulusError> {
        let mut out = BTreeMap::new();
        for (name, vals) in &self.scripts {
            let m = program
                .machine(name)
                .filter(|m| m.kind == MachineKind::Prototype)
                .ok_or_else(|| StimulusError::UnknownPrototype(name.clone()))?;
            let mut typed = Vec::new();
            for v in vals {
                let c = v.clone().coerce(&m.output_ty).filter(|c| c.has_type(&m.output_ty));
                typed.push(c.ok_or_else(|| StimulusError::TypeMismatch {
                    prototype: name.clone(),
                    expected: m.output_ty.clone(),
                    value: v.to_string(),
                })?);
            }
            out.insert(name.clone(), typed);
        }
        for m in &program.machines {
            if m.kind == MachineKind::Prototype && !out.contains_key(&m.name) {
                if m.output_ty == Type::Unit {
                    out.insert(m.name.clone(), vec![Value::Unit]);
                } else {
                    return Err(StimulusError::MissingScript(m.name.clone()));
                }
            }
        }
        Ok(Stimulus { scripts: out })
    }
}

/// Serves prototype calls from scripts and records every call.
#[derive(Debug, Clone)]
pub struct ScriptedExterns {
    scripts: BTreeMap<String, Vec<Value>>,
    cursor: HashMap<String, usize>,
    /// (prototype, argument, returned value) in call order.
    pub log: Vec<(String, Value, Value)>,
}

impl ScriptedExterns {
    pub fn new(stimulus: &Stimulus) -> Self {
        ScriptedExterns { scripts: stimulus.scripts.clone(), cursor: HashMap::new(), log: Vec::new() }
    }
}

impl Externs for ScriptedExterns {
    fn call(&mut self, prototype: &str, arg: &Value) -> Result<Value, InternalError> {
        let script = self
            .scripts
            .get(prototype)
            .ok_or_else(|| InternalError(format!("no script for prototype '{}'", prototype)))?;
        let k = self.cursor.entry(prototype.to_string()).or_insert(0);
        let v = script[(*k).min(script.len() - 1)].clone();
        *k += 1;
        self.log.push((prototype.to_string(), arg.clone(), v.clone()));
        Ok(v)
    }
}
