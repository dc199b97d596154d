//! Static analyses: types, causality, initialisation, monomorphisation and
//! network checks.

pub mod infer;
pub mod init;
pub mod mono;
pub mod network;
pub mod order;

pub use infer::{ground_type, infer, TypeError, TypeScheme, TypedProgram};
pub use init::{check_init, InitClass, InitError};
pub use mono::{monomorphise, MonoError};
pub use network::{check_network, NetworkError};
pub use order::{order_equations, CausalityError};

use crate::diag::Diagnostic;

/// Orders every step body causally and checks initialisation.
/// Reports every failing step rather than stopping at the first.
pub fn order_and_check(typed: &mut TypedProgram) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    for step in &mut typed.program.steps {
        let Some(body) = step.body.take() else { continue };
        match order_equations(body.clone()) {
            Ok(ordered) => {
                step.body = Some(ordered);
                if let Err(e) = check_init(step) {
                    diags.push(e.into());
                }
            }
            Err(e) => {
                step.body = Some(body);
                diags.push(e.into());
            }
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

/// Runs every step-level analysis and returns the monomorphic program.
pub fn analyse(program: &crate::frontend::ast::Program) -> Result<TypedProgram, Vec<Diagnostic>> {
    let mut typed = infer(program).map_err(|e| vec![e.into()])?;
    order_and_check(&mut typed)?;
    monomorphise(&typed).map_err(|e| vec![e.into()])
}
