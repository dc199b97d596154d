//! First-cycle initialisation analysis.
//!
//! Each expression is classified as `I` (its value at cycle 1 is defined) or
//! `U` (it may carry the undefined value left by `pre`). Steps are rejected
//! when `U` could reach an output, the argument of a call, an `if`
//! condition or an `either` scrutinee.

use std::collections::HashMap;

use crate::builtins;
use crate::diag::{Diagnostic, Loc, Phase};
use crate::frontend::ast::*;
use crate::frontend::pretty::pretty_expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum InitClass {
    I,
    U,
}

impl InitClass {
    pub fn join(self, other: InitClass) -> InitClass {
        self.max(other)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{what} may be undefined in the first cycle")]
pub struct InitError {
    pub loc: Loc,
    pub what: String,
}

impl From<InitError> for Diagnostic {
    fn from(e: InitError) -> Self {
        Diagnostic::new(Phase::Init, Some(e.loc), e.to_string())
    }
}

/// Checks an ordered step body.
pub fn check_init(step: &StepDecl) -> Result<(), InitError> {
    let Some(body) = &step.body else { return Ok(()) };
    let mut env: HashMap<String, InitClass> = HashMap::new();
    for p in &step.inputs {
        if let Some(n) = &p.name {
            env.insert(n.clone(), InitClass::I);
        }
    }
    for eq in body {
        let c = class(&eq.expr, &env)?;
        for v in eq.pattern.vars() {
            env.insert(v.to_string(), c);
        }
    }
    for p in &step.outputs {
        if let Some(n) = &p.name {
            if env.get(n).copied() == Some(InitClass::U) {
                return Err(InitError { loc: p.loc, what: format!("output '{}'", n) });
            }
        }
    }
    Ok(())
}

/// Abstract first-cycle class of `e`. Variables not yet classified are only
/// reachable under `pre`, which never looks at them.
pub fn class(e: &Expr, env: &HashMap<String, InitClass>) -> Result<InitClass, InitError> {
    let guard = |c: InitClass, e: &Expr, role: &str| {
        if c == InitClass::U {
            Err(InitError { loc: e.loc, what: format!("{} '{}'", role, pretty_expr(e)) })
        } else {
            Ok(c)
        }
    };
    Ok(match &e.kind {
        ExprKind::Var(x) => env.get(x).copied().unwrap_or(InitClass::I),
        ExprKind::Const(_) | ExprKind::None => InitClass::I,
        ExprKind::Pre(x) => {
            // Call arguments inside the operand are still checked.
            check_calls(x, env)?;
            InitClass::U
        }
        ExprKind::Arrow(a, b) | ExprKind::Fby(a, b) => {
            check_calls(b, env)?;
            class(a, env)?
        }
        ExprKind::If(c, t, f) => {
            let cc = guard(class(c, env)?, c, "condition")?;
            cc.join(class(t, env)?).join(class(f, env)?)
        }
        ExprKind::Either(a, b) => {
            let ca = guard(class(a, env)?, a, "scrutinee")?;
            ca.join(class(b, env)?)
        }
        // Operators are pure, so an undefined operand only taints the result.
        // Steps and prototypes may act on their argument and must see a defined value.
        ExprKind::App(f, arg) if builtins::is_builtin(f) => class(arg, env)?,
        ExprKind::App(_, arg) => guard(class(arg, env)?, arg, "argument")?,
        ExprKind::Tuple(es) => {
            let mut c = InitClass::I;
            for e in es {
                c = c.join(class(e, env)?);
            }
            c
        }
        ExprKind::Some(x) => class(x, env)?,
    })
}

/// Runs the positional checks on a sub-expression whose class is not observed.
fn check_calls(e: &Expr, env: &HashMap<String, InitClass>) -> Result<(), InitError> {
    class(e, env).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    fn check(src: &str) -> Result<(), InitError> {
        let p = parse_program(src).unwrap();
        check_init(&p.steps[0])
    }

    #[test]
    fn bare_pre_output_is_rejected() {
        let err = check("step f (in : int) --> (out : int) { out = pre in; }").unwrap_err();
        assert_eq!(err.what, "output 'out'");
    }

    #[test]
    fn arrow_guards_pre() {
        check("step f (in : bool) --> (out : bool) { out = in -> pre in; }").unwrap();
        check("step f (in : int) --> (out : int) { x = pre in; y = in -> x; out = y; }").unwrap();
    }

    #[test]
    fn undefined_condition_is_rejected() {
        let err = check("step f (in : bool) --> (out : int) { out = if pre in then 1 else 2; }").unwrap_err();
        assert!(err.what.starts_with("condition"));
    }

    #[test]
    fn undefined_call_argument_is_rejected() {
        let src = "step g (a : int) --> (b : int) { b = a; }
                   step f (in : int) --> (out : int) { out = 0 -> g (pre in); }";
        let p = parse_program(src).unwrap();
        assert!(check_init(&p.steps[1]).is_err());
    }

    #[test]
    fn operators_propagate_instead_of_rejecting() {
        check("step f () --> (n : int) { n = 0 -> pre n + 1; }").unwrap();
        assert!(check("step f (in : int) --> (out : int) { out = pre in + 1; }").is_err());
    }

    #[test]
    fn join_is_max() {
        assert_eq!(InitClass::I.join(InitClass::U), InitClass::U);
        assert_eq!(InitClass::I.join(InitClass::I), InitClass::I);
    }
}
