//! Discrete-event reference executor.
//!
//! Steps run as interpreted OOIR machines; nodes are released at multiples
//! of their period and exchange values over bounded FIFO queues whose items
//! carry the instant at which they become visible.

pub mod machine;
pub mod queue;
pub mod run;
pub mod stimulus;
pub mod trace;

use crate::value::Value;

pub use machine::{machine_reset, machine_step, Instance};
pub use queue::{available, TimedQueue};
pub use run::{run, run_detailed, Outcome, SimError};
pub use stimulus::{parse_stimulus, ScriptedExterns, Stimulus};
pub use trace::{Event, Trace};

/// A violated interpreter invariant; always a compiler bug.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("internal error: {0}")]
pub struct InternalError(pub String);

/// Supplies results of prototype calls.
pub trait Externs {
    fn call(&mut self, prototype: &str, arg: &Value) -> Result<Value, InternalError>;
}
