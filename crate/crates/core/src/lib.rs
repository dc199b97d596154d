//! Compiler and reference simulator for the Mimosa language.
//!
//! A Mimosa program describes periodic nodes that exchange values over
//! FIFO channels; each node runs a step, a block of dataflow equations
//! with memory operators (`pre`, `->`, `fby`). This crate
//!
//! * parses and type-checks programs ([`frontend`], [`sema`]),
//! * normalises steps into a block-structured IR ([`normir`]),
//! * turns them into state machines with explicit memory ([`ooir`]),
//! * emits C code against a small RTOS-style runtime API ([`codegen`]),
//! * and executes programs under the timed FIFO semantics ([`simulator`]).
//!
//! [`pipeline`] strings the phases together. The runnable programs under
//! `examples/` walk through each capability.

pub mod builtins;
pub mod codegen;
pub mod diag;
pub mod frontend;
pub mod normir;
pub mod ooir;
pub mod pipeline;
pub mod sema;
pub mod simulator;
pub mod types;
pub mod value;

pub use diag::{Diagnostic, Loc, Phase};
pub use types::Type;
pub use value::Value;
