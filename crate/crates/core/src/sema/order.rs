//! Causal ordering of the equations of a step.
//!
//! Equation `E` depends on `F` when a variable bound by `F` is read by `E`
//! in a position that is evaluated before the step can finish its current
//! cycle. A variable read directly under `pre` at an eagerly evaluated
//! position only needs the previous cycle's value; its store is deferred to
//! the end of the step, so it creates no edge. Under a lazy position
//! (branches of `if`, the `or` side of `either`, `fby` operands, the left of
//! `->`) the read of a `pre` cell happens in place, so everything counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::diag::{Diagnostic, Loc, Phase};
use crate::frontend::ast::*;
use crate::frontend::pretty::pretty_equation;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("causality cycle: {}", render_cycle(.cycle))]
pub struct CausalityError {
    pub loc: Loc,
    /// One variable per equation on the cycle, in dependency order.
    pub cycle: Vec<String>,
}

fn render_cycle(cycle: &[String]) -> String {
    let mut parts = cycle.to_vec();
    if let Some(first) = cycle.first() {
        parts.push(first.clone());
    }
    parts.join(" -> ")
}

impl From<CausalityError> for Diagnostic {
    fn from(e: CausalityError) -> Self {
        Diagnostic::new(Phase::Causality, Some(e.loc), e.to_string())
    }
}

/// Variables read by `e` that create ordering edges.
pub fn dependencies(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect(e, false, &mut out);
    out
}

fn collect(e: &Expr, lazy: bool, out: &mut BTreeSet<String>) {
    match &e.kind {
        ExprKind::Var(x) => {
            out.insert(x.clone());
        }
        ExprKind::Pre(inner) => {
            if !(matches!(inner.kind, ExprKind::Var(_)) && !lazy) {
                collect(inner, lazy, out);
            }
        }
        ExprKind::If(c, t, f) => {
            collect(c, lazy, out);
            collect(t, true, out);
            collect(f, true, out);
        }
        ExprKind::Either(a, b) => {
            collect(a, lazy, out);
            collect(b, true, out);
        }
        ExprKind::Fby(a, b) => {
            collect(a, true, out);
            collect(b, true, out);
        }
        ExprKind::Arrow(a, b) => {
            collect(a, true, out);
            collect(b, lazy, out);
        }
        _ => e.children().into_iter().for_each(|c| collect(c, lazy, out)),
    }
}

/// Sorting key for ready equations: independent of the source order, so any
/// permutation of the same equations yields the same schedule.
fn key(eq: &Equation) -> (Vec<String>, String) {
    let mut vars: Vec<String> = eq.pattern.vars().into_iter().map(String::from).collect();
    vars.sort();
    (vars, pretty_equation(eq))
}

/// Topologically sorts equations; ties go to the smallest (bound names, text).
pub fn order_equations(eqs: Vec<Equation>) -> Result<Vec<Equation>, CausalityError> {
    let n = eqs.len();
    let mut binder: HashMap<&str, usize> = HashMap::new();
    for (i, eq) in eqs.iter().enumerate() {
        for v in eq.pattern.vars() {
            binder.insert(v, i);
        }
    }
    // preds[i]: equations that must run before i
    let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut succs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, eq) in eqs.iter().enumerate() {
        for v in dependencies(&eq.expr) {
            if let Some(&j) = binder.get(v.as_str()) {
                preds[i].insert(j);
                succs[j].insert(i);
            }
        }
    }
    let keys: Vec<_> = eqs.iter().map(key).collect();
    let mut indegree: Vec<usize> = preds.iter().map(|p| p.len()).collect();
    let mut ready: BTreeMap<&(Vec<String>, String), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        if indegree[i] == 0 {
            ready.entry(&keys[i]).or_default().push(i);
        }
    }
    let mut order = Vec::with_capacity(n);
    while let Some((&k, _)) = ready.iter().next() {
        let mut bucket = ready.remove(k).unwrap();
        let i = bucket.remove(0);
        if !bucket.is_empty() {
            ready.insert(k, bucket);
        }
        order.push(i);
        for &s in &succs[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.entry(&keys[s]).or_default().push(s);
            }
        }
    }

    if order.len() < n {
        let done: BTreeSet<usize> = order.iter().copied().collect();
        let remaining: BTreeSet<usize> = (0..n).filter(|i| !done.contains(i)).collect();
        // Walk predecessors inside the stuck set until a node repeats.
        let start = *remaining.iter().min_by_key(|&&i| &keys[i]).unwrap();
        let mut path = vec![start];
        let mut pos: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let cycle_start = loop {
            let cur = *path.last().unwrap();
            let next = *preds[cur]
                .iter()
                .filter(|p| remaining.contains(p))
                .min_by_key(|&&p| &keys[p])
                .expect("stuck equation has a stuck predecessor");
            if let Some(&at) = pos.get(&next) {
                break at;
            }
            pos.insert(next, path.len());
            path.push(next);
        };
        // path follows predecessor links; reverse to get dependency order.
        let mut cyc: Vec<usize> = path[cycle_start..].to_vec();
        cyc.reverse();
        let name = |i: usize| eqs[i].pattern.vars().first().map(|s| s.to_string()).unwrap_or_else(|| "_".into());
        return Err(CausalityError { loc: eqs[cyc[0]].loc, cycle: cyc.into_iter().map(name).collect() });
    }

    let mut slots: Vec<Option<Equation>> = eqs.into_iter().map(Some).collect();
    Ok(order.into_iter().map(|i| slots[i].take().unwrap()).collect())
}
