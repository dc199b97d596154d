//! The event loop.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::codegen::model::DeploymentModel;
use crate::diag::{Diagnostic, Phase};
use crate::ooir::OProgram;
use crate::sema::TypedProgram;
use crate::value::Value;

use super::machine::{machine_reset, machine_step, Instance};
use super::queue::{available, TimedQueue};
use super::stimulus::{ScriptedExterns, Stimulus, StimulusError};
use super::trace::{Event, Trace};
use super::InternalError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Stimulus(#[from] StimulusError),
    #[error(transparent)]
    Internal(#[from] InternalError),
}

impl From<SimError> for Diagnostic {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Stimulus(s) => s.into(),
            SimError::Internal(i) => Diagnostic::new(Phase::Simulation, None, i.to_string()),
        }
    }
}

/// Final state of a run, for inspection by tests.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub trace: Trace,
    pub queues: BTreeMap<String, TimedQueue>,
}

/// Simulates the network released at `k * period <= horizon_us` for every node.
pub fn run(
    typed: &TypedProgram,
    machines: &OProgram,
    model: &DeploymentModel,
    stimulus: &Stimulus,
    horizon_us: u64,
) -> Result<Trace, SimError> {
    run_detailed(typed, machines, model, stimulus, horizon_us).map(|o| o.trace)
}

pub fn run_detailed(
    typed: &TypedProgram,
    machines: &OProgram,
    model: &DeploymentModel,
    stimulus: &Stimulus,
    horizon_us: u64,
) -> Result<Outcome, SimError> {
    let program = &typed.program;
    let stimulus = stimulus.resolve(machines)?;
    let mut ext = ScriptedExterns::new(&stimulus);
    let mut queues: BTreeMap<String, TimedQueue> = program
        .channels
        .iter()
        .map(|c| {
            let cap = model.channels.get(&c.name).copied().unwrap_or(0);
            (c.name.clone(), TimedQueue::new(c.name.clone(), cap))
        })
        .collect();
    let mut states = Vec::new();
    for n in &program.nodes {
        let mut inst = Instance::new(machines, &n.step)?;
        machine_reset(machines, &mut inst)?;
        states.push(inst);
    }

    let mut trace = Trace::default();
    let mut releases: BinaryHeap<Reverse<(u64, usize)>> = (0..program.nodes.len()).map(|i| Reverse((0, i))).collect();
    while let Some(Reverse((now, i))) = releases.pop() {
        if now > horizon_us {
            break;
        }
        let node = &program.nodes[i];
        let next = now + node.period_us;
        releases.push(Reverse((next, i)));

        let missing: Vec<String> = node
            .inputs
            .iter()
            .filter(|p| !p.optional && !available(&queues[&p.channel], now))
            .map(|p| p.channel.clone())
            .collect();
        if !missing.is_empty() {
            trace.events.push(Event::Skip { time: now, node: node.name.clone(), missing });
            continue;
        }
        let mut consumed = Vec::new();
        for p in &node.inputs {
            let q = queues.get_mut(&p.channel).unwrap();
            let v = if p.optional {
                if available(q, now) {
                    Value::some(q.pop().unwrap().0)
                } else {
                    Value::none()
                }
            } else {
                q.pop().unwrap().0
            };
            consumed.push(v);
        }

        let calls_before = ext.log.len();
        let result = machine_step(machines, &mut states[i], &Value::pack(consumed.clone()), &mut ext)?;
        for (prototype, arg, ret) in ext.log[calls_before..].iter().cloned() {
            trace.events.push(Event::Extern { time: now, node: node.name.clone(), prototype, arg, ret });
        }

        let mut produced = Vec::new();
        let mut overflow = None;
        for (p, v) in node.outputs.iter().zip(result.unpack(node.outputs.len())) {
            let v = match (p.optional, v) {
                (false, v) => v,
                (true, Value::Option(Some(v))) => *v,
                (true, Value::Option(None)) => continue,
                (true, v) => return Err(InternalError(format!("optional output got {}", v)).into()),
            };
            if !queues.get_mut(&p.channel).unwrap().push(v.clone(), next) {
                overflow = Some(p.channel.clone());
                break;
            }
            produced.push((p.channel.clone(), v, next));
        }
        trace.events.push(Event::Fire { time: now, node: node.name.clone(), consumed, produced });
        if let Some(channel) = overflow {
            trace.events.push(Event::Overflow { time: now, node: node.name.clone(), channel });
            break;
        }
    }
    Ok(Outcome { trace, queues })
}
