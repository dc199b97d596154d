//! C code generation against a generic RTOS API.
//!
//! A project consists of `types.h` (option and tuple structs), one header
//! and source per machine, `network.c` with the queues, task functions and
//! `main`, and a copy of `runtime.h`.

pub mod ctypes;
pub mod machine;
pub mod model;
pub mod network;
pub mod runtime;

use std::io;
use std::path::Path;

use crate::frontend::ast::Program;
use crate::ooir::{MachineKind, OProgram};
use crate::sema::ground_type;
use crate::types::Type;

pub use ctypes::emit_types;
pub use machine::{emit_header, emit_source};
pub use model::{parse_model, DeploymentModel, ModelError, TaskParams};
pub use network::emit_network;
pub use runtime::RUNTIME_H;

/// Generated files in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CProject {
    pub files: Vec<(String, String)>,
}

impl CProject {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, text) in &self.files {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}

/// Emits the whole project. Without nodes, `network.c` is omitted.
pub fn generate(program: &Program, machines: &OProgram, model: &DeploymentModel) -> CProject {
    let mut port_types = Vec::new();
    for n in &program.nodes {
        for p in n.inputs.iter().chain(&n.outputs) {
            if let Some(t) = program.channel(&p.channel).and_then(|c| ground_type(&c.ty)) {
                port_types.push(if p.optional { Type::option(t) } else { t });
            }
        }
    }
    let composites = ctypes::composite_types(machines, &port_types);
    let mut files = vec![("types.h".to_string(), emit_types(&composites))];
    for m in &machines.machines {
        files.push((format!("{}.h", m.name), emit_header(machines, m)));
        if m.kind == MachineKind::Step {
            files.push((format!("{}.c", m.name), emit_source(machines, m)));
        }
    }
    if !program.nodes.is_empty() {
        files.push(("network.c".to_string(), emit_network(program, machines, model)));
    }
    files.push(("runtime.h".to_string(), RUNTIME_H.to_string()));
    CProject { files }
}
