//! Inlining of equivalent variable names.
//!
//! Rules, applied to a fixpoint (innermost blocks first):
//! * `__f = y` with `__f` generated: drop it and read `y` instead.
//! * `x = __f` with `__f` generated and defined earlier in the same block:
//!   define `x` directly where `__f` was defined.
//! * `x = y` between source names: drop it and read `y` instead.
//! * a block whose result is a generated name bound to a base expression
//!   used nowhere else returns that base expression directly.
//!
//! Only names are substituted; no computation moves into or out of a block.

use super::{Block, NormBase, NormEq, NormExpr};

pub fn is_fresh(name: &str) -> bool {
    name.starts_with("__")
}

fn alias(eq: &NormEq) -> Option<(&str, &str)> {
    match (&eq.pattern[..], &eq.expr) {
        ([x], NormExpr::Base(NormBase::Var(y))) => Some((x, y)),
        _ => None,
    }
}

fn children(eq: &mut NormEq) -> Vec<&mut Block> {
    match &mut eq.expr {
        NormExpr::Fby(a, b) | NormExpr::If(_, a, b) => vec![a, b],
        NormExpr::Either(_, b) => vec![b],
        _ => vec![],
    }
}

/// Applies one rewrite somewhere in the block; returns whether anything changed.
fn step(block: &mut Block) -> bool {
    for eq in &mut block.eqs {
        for c in children(eq) {
            if step(c) {
                return true;
            }
        }
    }

    for i in 0..block.eqs.len() {
        let Some((x, y)) = alias(&block.eqs[i]) else { continue };
        let (x, y) = (x.to_string(), y.to_string());
        if x == y {
            block.eqs.remove(i);
            return true;
        }
        if is_fresh(&x) || (!is_fresh(&y)) {
            block.eqs.remove(i);
            block.rename_uses(&x, &y);
            return true;
        }
        // x is a source name aliasing a generated one.
        let def = block.eqs[..i].iter().position(|e| e.pattern.contains(&y));
        if let Some(d) = def {
            block.eqs.remove(i);
            for p in &mut block.eqs[d].pattern {
                if *p == y {
                    *p = x.clone();
                }
            }
            block.rename_uses(&y, &x);
            return true;
        }
    }

    if let NormBase::Var(r) = &block.result {
        if is_fresh(r) {
            let r = r.clone();
            let def = block
                .eqs
                .iter()
                .position(|e| e.pattern.len() == 1 && e.pattern[0] == r && matches!(e.expr, NormExpr::Base(_)));
            if let Some(d) = def {
                let used_elsewhere = block.eqs.iter().map(|e| e.expr.count_uses(&r)).sum::<usize>() > 0;
                if !used_elsewhere {
                    let NormExpr::Base(b) = block.eqs.remove(d).expr else { unreachable!() };
                    block.result = b;
                    return true;
                }
            }
        }
    }
    false
}

/// Removes variable aliases until none is left.
pub fn copy_propagate(mut block: Block) -> Block {
    while step(&mut block) {}
    block
}
