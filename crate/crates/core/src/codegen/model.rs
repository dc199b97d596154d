//! Deployment model: channel capacities and task parameters.
//!
//! ```text
//! # comment
//! [channel a]
//! size = 16
//!
//! [node edge]
//! priority = 3
//! stack = 1024
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::diag::{Diagnostic, Loc, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskParams {
    pub priority: u32,
    /// Bytes.
    pub stack: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeploymentModel {
    /// Channel name to capacity in elements.
    pub channels: BTreeMap<String, usize>,
    pub nodes: BTreeMap<String, TaskParams>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: u32, message: String },
    #[error("line {line}: duplicate section for {kind} '{name}'")]
    Duplicate { line: u32, kind: &'static str, name: String },
    #[error("line {line}: size of channel '{name}' must be positive")]
    NonPositiveSize { line: u32, name: String },
    #[error("line {line}: stack of node '{name}' must be positive")]
    NonPositiveStack { line: u32, name: String },
    #[error("line {line}: {kind} '{name}' is missing '{key}'")]
    MissingKey { line: u32, kind: &'static str, name: String, key: &'static str },
}

impl ModelError {
    pub fn line(&self) -> u32 {
        match self {
            ModelError::Syntax { line, .. }
            | ModelError::Duplicate { line, .. }
            | ModelError::NonPositiveSize { line, .. }
            | ModelError::NonPositiveStack { line, .. }
            | ModelError::MissingKey { line, .. } => *line,
        }
    }
}

impl From<ModelError> for Diagnostic {
    fn from(e: ModelError) -> Self {
        let line = e.line();
        let message = e.to_string();
        let message = message.split_once(": ").map(|(_, m)| m.to_string()).unwrap_or(message);
        Diagnostic::new(Phase::Model, Some(Loc::new(0, line, 1)), message)
    }
}

enum Section {
    Channel { name: String, line: u32, size: Option<i64> },
    Node { name: String, line: u32, priority: Option<i64>, stack: Option<i64> },
}

pub fn parse_model(text: &str) -> Result<DeploymentModel, ModelError> {
    let mut model = DeploymentModel::default();
    let mut current: Option<Section> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i as u32 + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |m: String| ModelError::Syntax { line, message: m };
        if let Some(header) = content.strip_prefix('[') {
            let header =
                header.strip_suffix(']').ok_or_else(|| syntax("expected ']' at end of section header".into()))?;
            if let Some(s) = current.take() {
                finish(s, &mut model)?;
            }
            let mut words = header.split_whitespace();
            let kind = words.next().unwrap_or("");
            let name = words.next().ok_or_else(|| syntax(format!("section '{}' needs a name", header)))?;
            if words.next().is_some() || !is_ident(name) {
                return Err(syntax(format!("malformed section header '[{}]'", header)));
            }
            let name = name.to_string();
            current = Some(match kind {
                "channel" => {
                    if model.channels.contains_key(&name) {
                        return Err(ModelError::Duplicate { line, kind: "channel", name });
                    }
                    Section::Channel { name, line, size: None }
                }
                "node" => {
                    if model.nodes.contains_key(&name) {
                        return Err(ModelError::Duplicate { line, kind: "node", name });
                    }
                    Section::Node { name, line, priority: None, stack: None }
                }
                other => return Err(syntax(format!("unknown section kind '{}'", other))),
            });
            continue;
        }
        let (key, value) =
            content.split_once('=').ok_or_else(|| syntax(format!("expected 'key = value', found '{}'", content)))?;
        let key = key.trim();
        let value: i64 = value.trim().parse().map_err(|_| syntax(format!("value of '{}' must be an integer", key)))?;
        let slot = match (&mut current, key) {
            (None, _) => return Err(syntax(format!("'{}' outside of any section", key))),
            (Some(Section::Channel { size, .. }), "size") => size,
            (Some(Section::Node { priority, .. }), "priority") => priority,
            (Some(Section::Node { stack, .. }), "stack") => stack,
            (Some(_), k) => return Err(syntax(format!("unknown key '{}'", k))),
        };
        if slot.is_some() {
            return Err(syntax(format!("duplicate key '{}'", key)));
        }
        *slot = Some(value);
        match &current {
            Some(Section::Channel { name, .. }) if value <= 0 => {
                return Err(ModelError::NonPositiveSize { line, name: name.clone() })
            }
            Some(Section::Node { name, .. }) if key == "stack" && value <= 0 => {
                return Err(ModelError::NonPositiveStack { line, name: name.clone() })
            }
            _ if value < 0 || value > u32::MAX as i64 => {
                return Err(syntax(format!("value of '{}' is out of range", key)))
            }
            _ => {}
        }
    }
    if let Some(s) = current.take() {
        finish(s, &mut model)?;
    }
    Ok(model)
}

fn finish(s: Section, model: &mut DeploymentModel) -> Result<(), ModelError> {
    match s {
        Section::Channel { name, line, size } => {
            let size = size.ok_or(ModelError::MissingKey { line, kind: "channel", name: name.clone(), key: "size" })?;
            model.channels.insert(name, size as usize);
        }
        Section::Node { name, line, priority, stack } => {
            let missing = |key| ModelError::MissingKey { line, kind: "node", name: name.clone(), key };
            let priority = priority.ok_or_else(|| missing("priority"))? as u32;
            let stack = stack.ok_or_else(|| missing("stack"))? as u32;
            model.nodes.insert(name, TaskParams { priority, stack });
        }
    }
    Ok(())
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl DeploymentModel {
    /// Prints the model in the same format `parse_model` reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, size) in &self.channels {
            let _ = writeln!(out, "[channel {}]\nsize = {}\n", name, size);
        }
        for (name, t) in &self.nodes {
            let _ = writeln!(out, "[node {}]\npriority = {}\nstack = {}\n", name, t.priority, t.stack);
        }
        out
    }
}
