//! Well-formedness of the channel/node network against the steps and the
//! deployment model.

use std::collections::{BTreeMap, BTreeSet};

use crate::codegen::model::DeploymentModel;
use crate::diag::{Diagnostic, Loc, Phase};
use crate::types::Type;

use super::infer::{ground_type, TypedProgram};
use super::mono::unpack_params;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NetworkError {
    #[error("channel '{channel}' is declared more than once")]
    DuplicateChannel { loc: Loc, channel: String },
    #[error("node '{node}' is declared more than once")]
    DuplicateNode { loc: Loc, node: String },
    #[error("channel '{channel}' must have a monomorphic element type")]
    PolymorphicChannel { loc: Loc, channel: String },
    #[error("node '{node}' implements unknown step '{step}'")]
    UnknownStep { loc: Loc, node: String, step: String },
    #[error("node '{node}' uses undeclared channel '{channel}'")]
    UnknownChannel { loc: Loc, node: String, channel: String },
    #[error("node '{node}' has {found} {dir} ports but step '{step}' has {expected} {dir}s")]
    PortArity { loc: Loc, node: String, step: String, dir: &'static str, expected: usize, found: usize },
    #[error("node '{node}': {dir} port '{channel}' carries {port} but step '{step}' expects {step_ty}")]
    PortType { loc: Loc, node: String, step: String, dir: &'static str, channel: String, port: Type, step_ty: Type },
    #[error("channel '{channel}' is read by {} nodes ({})", nodes.len(), nodes.join(", "))]
    MultipleReaders { loc: Loc, channel: String, nodes: Vec<String> },
    #[error("channel '{channel}' is written by {} nodes ({})", nodes.len(), nodes.join(", "))]
    MultipleWriters { loc: Loc, channel: String, nodes: Vec<String> },
    #[error("channel '{channel}' has no reader")]
    NoReader { loc: Loc, channel: String },
    #[error("channel '{channel}' has no writer")]
    NoWriter { loc: Loc, channel: String },
    #[error("period of node '{node}' must be positive")]
    NonPositivePeriod { loc: Loc, node: String },
    #[error("model has no entry for {kind} '{name}'")]
    MissingModelEntry { loc: Loc, kind: &'static str, name: String },
    #[error("model mentions unknown {kind} '{name}'")]
    UnknownModelEntry { kind: &'static str, name: String },
}

impl NetworkError {
    pub fn loc(&self) -> Option<Loc> {
        use NetworkError::*;
        match self {
            DuplicateChannel { loc, .. }
            | DuplicateNode { loc, .. }
            | PolymorphicChannel { loc, .. }
            | UnknownStep { loc, .. }
            | UnknownChannel { loc, .. }
            | PortArity { loc, .. }
            | PortType { loc, .. }
            | MultipleReaders { loc, .. }
            | MultipleWriters { loc, .. }
            | NoReader { loc, .. }
            | NoWriter { loc, .. }
            | NonPositivePeriod { loc, .. }
            | MissingModelEntry { loc, .. } => Some(*loc),
            UnknownModelEntry { .. } => None,
        }
    }
}

impl From<NetworkError> for Diagnostic {
    fn from(e: NetworkError) -> Self {
        Diagnostic::new(Phase::Network, e.loc(), e.to_string())
    }
}

/// Checks the network; without a model only the structural rules apply.
pub fn check_network(typed: &TypedProgram, model: Option<&DeploymentModel>) -> Result<(), Vec<NetworkError>> {
    let program = &typed.program;
    let mut errors = Vec::new();
    let mut chan_types: BTreeMap<&str, Option<Type>> = BTreeMap::new();
    for c in &program.channels {
        if chan_types.contains_key(c.name.as_str()) {
            errors.push(NetworkError::DuplicateChannel { loc: c.loc, channel: c.name.clone() });
            continue;
        }
        let t = ground_type(&c.ty);
        if t.is_none() {
            errors.push(NetworkError::PolymorphicChannel { loc: c.loc, channel: c.name.clone() });
        }
        chan_types.insert(&c.name, t);
    }

    let mut readers: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut writers: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut node_names = BTreeSet::new();
    for n in &program.nodes {
        if !node_names.insert(n.name.as_str()) {
            errors.push(NetworkError::DuplicateNode { loc: n.loc, node: n.name.clone() });
        }
        if n.period_us == 0 {
            errors.push(NetworkError::NonPositivePeriod { loc: n.loc, node: n.name.clone() });
        }
        for p in &n.inputs {
            readers.entry(&p.channel).or_default().push(n.name.clone());
        }
        for p in &n.outputs {
            writers.entry(&p.channel).or_default().push(n.name.clone());
        }
        let (Some(step), Some(scheme)) = (program.step(&n.step), typed.schemes.get(&n.step)) else {
            errors.push(NetworkError::UnknownStep { loc: n.loc, node: n.name.clone(), step: n.step.clone() });
            continue;
        };
        let sides = [
            ("input", &n.inputs, unpack_params(&scheme.input, step.inputs.len())),
            ("output", &n.outputs, unpack_params(&scheme.output, step.outputs.len())),
        ];
        for (dir, ports, tys) in sides {
            if ports.len() != tys.len() {
                errors.push(NetworkError::PortArity {
                    loc: n.loc,
                    node: n.name.clone(),
                    step: n.step.clone(),
                    dir,
                    expected: tys.len(),
                    found: ports.len(),
                });
                continue;
            }
            for (p, t) in ports.iter().zip(tys) {
                let Some(ct) = chan_types.get(p.channel.as_str()) else {
                    errors.push(NetworkError::UnknownChannel {
                        loc: p.loc,
                        node: n.name.clone(),
                        channel: p.channel.clone(),
                    });
                    continue;
                };
                let Some(ct) = ct else { continue };
                let port = if p.optional { Type::option(ct.clone()) } else { ct.clone() };
                if port != t {
                    errors.push(NetworkError::PortType {
                        loc: p.loc,
                        node: n.name.clone(),
                        step: n.step.clone(),
                        dir,
                        channel: p.channel.clone(),
                        port,
                        step_ty: t,
                    });
                }
            }
        }
    }

    for c in &program.channels {
        let r = readers.get(c.name.as_str()).cloned().unwrap_or_default();
        let w = writers.get(c.name.as_str()).cloned().unwrap_or_default();
        match r.len() {
            0 => errors.push(NetworkError::NoReader { loc: c.loc, channel: c.name.clone() }),
            1 => {}
            _ => errors.push(NetworkError::MultipleReaders { loc: c.loc, channel: c.name.clone(), nodes: r }),
        }
        match w.len() {
            0 => errors.push(NetworkError::NoWriter { loc: c.loc, channel: c.name.clone() }),
            1 => {}
            _ => errors.push(NetworkError::MultipleWriters { loc: c.loc, channel: c.name.clone(), nodes: w }),
        }
    }

    if let Some(model) = model {
        for c in &program.channels {
            if !model.channels.contains_key(&c.name) {
                errors.push(NetworkError::MissingModelEntry { loc: c.loc, kind: "channel", name: c.name.clone() });
            }
        }
        for n in &program.nodes {
            if !model.nodes.contains_key(&n.name) {
                errors.push(NetworkError::MissingModelEntry { loc: n.loc, kind: "node", name: n.name.clone() });
            }
        }
        for name in model.channels.keys() {
            if !chan_types.contains_key(name.as_str()) {
                errors.push(NetworkError::UnknownModelEntry { kind: "channel", name: name.clone() });
            }
        }
        for name in model.nodes.keys() {
            if !node_names.contains(name.as_str()) {
                errors.push(NetworkError::UnknownModelEntry { kind: "node", name: name.clone() });
            }
        }
    }

    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}
