//! End-to-end driver: source text in, IR dumps, C projects or traces out.

use crate::codegen::{self, CProject, DeploymentModel};
use crate::diag::{sort_diagnostics, Diagnostic};
use crate::frontend::{parse_program, tokenize, Tok};
use crate::normir::{self, NormProgram};
use crate::ooir::{self, OProgram};
use crate::sema::{self, check_network, TypedProgram};
use crate::simulator::{self, Stimulus, Trace};

/// A program that passed every check, lowered through both IRs.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub typed: TypedProgram,
    pub norm: NormProgram,
    pub machines: OProgram,
}

fn sorted(mut diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    sort_diagnostics(&mut diags);
    diags
}

/// Parses and runs the static checks; the result is monomorphic. The
/// network is checked against `model` when one is given.
pub fn check(source: &str, model: Option<&DeploymentModel>) -> Result<TypedProgram, Vec<Diagnostic>> {
    let program = parse_program(source).map_err(|d| vec![d])?;
    let typed = sema::analyse(&program).map_err(sorted)?;
    check_network(&typed, model).map_err(|es| sorted(es.into_iter().map(Diagnostic::from).collect()))?;
    Ok(typed)
}

pub fn compile(source: &str, model: Option<&DeploymentModel>) -> Result<Compiled, Vec<Diagnostic>> {
    let typed = check(source, model)?;
    Ok(lower(typed))
}

/// Normalises and objectifies an already checked program.
pub fn lower(typed: TypedProgram) -> Compiled {
    let norm = normir::normalise_program(&typed);
    let machines = ooir::objectify_program(&norm);
    Compiled { typed, norm, machines }
}

impl Compiled {
    pub fn dump_normir(&self) -> String {
        normir::dump_program(&self.norm)
    }

    pub fn dump_ooir(&self) -> String {
        ooir::dump_program(&self.machines)
    }

    pub fn codegen(&self, model: &DeploymentModel) -> CProject {
        codegen::generate(&self.typed.program, &self.machines, model)
    }

    pub fn simulate(&self, model: &DeploymentModel, stimulus: &Stimulus, horizon_us: u64) -> Result<Trace, Diagnostic> {
        simulator::run(&self.typed, &self.machines, model, stimulus, horizon_us).map_err(Diagnostic::from)
    }
}

/// Parses a duration with the language's units (`600ms`, `1s`, `250us`).
pub fn parse_duration(text: &str) -> Option<u64> {
    let tokens = tokenize(text.trim()).ok()?;
    match tokens.as_slice() {
        [t] => match t.tok {
            Tok::Duration(v, unit) => v.checked_mul(unit.micros()),
            _ => None,
        },
        _ => None,
    }
}
