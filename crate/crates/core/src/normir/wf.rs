//! Grammar and scope well-formedness of normalised steps.

use std::collections::BTreeSet;

use super::{Block, NormBase, NormExpr, NormStep};

fn defined(b: &Block, out: &mut BTreeSet<String>) {
    for eq in &b.eqs {
        out.extend(eq.pattern.iter().cloned());
        match &eq.expr {
            NormExpr::Fby(x, y) | NormExpr::If(_, x, y) => {
                defined(x, out);
                defined(y, out);
            }
            NormExpr::Either(_, x) => defined(x, out),
            _ => {}
        }
    }
}

struct Checker<'a> {
    step: &'a NormStep,
    all: BTreeSet<String>,
    seen: BTreeSet<String>,
}

impl Checker<'_> {
    fn use_(&self, v: &str, scope: &BTreeSet<String>, what: &str) -> Result<(), String> {
        if scope.contains(v) {
            Ok(())
        } else {
            Err(format!("{}: '{}' used out of scope", what, v))
        }
    }

    fn base(&self, b: &NormBase, scope: &BTreeSet<String>) -> Result<(), String> {
        match b.uses() {
            Some(v) => self.use_(v, scope, "base"),
            None => Ok(()),
        }
    }

    fn block(&mut self, b: &Block, mut scope: BTreeSet<String>) -> Result<(), String> {
        for eq in &b.eqs {
            if eq.pattern.is_empty() {
                return Err("empty pattern".into());
            }
            let what = eq.pattern.join(", ");
            match &eq.expr {
                NormExpr::Base(x) => self.base(x, &scope)?,
                NormExpr::Tuple(vs) => {
                    if vs.len() < 2 {
                        return Err(format!("{}: tuple of arity {}", what, vs.len()));
                    }
                    for v in vs {
                        self.use_(v, &scope, &what)?;
                    }
                }
                // The stored value is read when the step finishes, so a later
                // definition in the same step is fine.
                NormExpr::Pre(x) => {
                    if !self.all.contains(x) && *x != self.step.input {
                        return Err(format!("{}: pre of undefined '{}'", what, x));
                    }
                }
                NormExpr::App(_, x) => self.use_(x, &scope, &what)?,
                NormExpr::Fby(a, b) => {
                    self.block(a, scope.clone())?;
                    self.block(b, scope.clone())?;
                }
                NormExpr::If(c, a, b) => {
                    self.use_(c, &scope, &what)?;
                    self.block(a, scope.clone())?;
                    self.block(b, scope.clone())?;
                }
                NormExpr::Either(x, b) => {
                    self.use_(x, &scope, &what)?;
                    self.block(b, scope.clone())?;
                }
            }
            if eq.pattern.len() > 1 && !matches!(eq.expr, NormExpr::Base(NormBase::Var(_))) {
                return Err(format!("{}: tuple pattern must destructure a name", what));
            }
            for p in &eq.pattern {
                if !self.seen.insert(p.clone()) || *p == self.step.input {
                    return Err(format!("'{}' defined twice", p));
                }
                if !self.step.locals.contains_key(p) {
                    return Err(format!("'{}' has no recorded type", p));
                }
                scope.insert(p.clone());
            }
        }
        self.base(&b.result, &scope)
    }
}

/// Checks flat patterns, name-only sub-terms, unique definitions and scoping.
pub fn check_wellformed(step: &NormStep) -> Result<(), String> {
    let mut all = BTreeSet::new();
    defined(&step.body, &mut all);
    let mut c = Checker { step, all, seen: BTreeSet::new() };
    let scope = BTreeSet::from([step.input.clone()]);
    c.block(&step.body, scope).map_err(|e| format!("step {}: {}", step.name, e))
}
