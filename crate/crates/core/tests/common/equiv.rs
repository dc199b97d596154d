//! Runs the surface oracle, the NormIR interpreter and the OOIR machine
//! interpreter side by side on random input streams.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mimosa::normir::{NormInstance, NormInterpreter};
use mimosa::ooir::MachineKind;
use mimosa::pipeline::Compiled;
use mimosa::simulator::{machine_reset, machine_step, Instance, ScriptedExterns, Stimulus};
use mimosa::{Type, Value};

use super::ast_eval::{AstEval, State};

pub fn random_value(rng: &mut ChaCha8Rng, ty: &Type) -> Value {
    match ty {
        Type::Unit | Type::Var(_) => Value::Unit,
        Type::Bool => Value::Bool(rng.gen()),
        Type::Int => match rng.gen_range(0..20) {
            0 => Value::Int(i64::MAX - rng.gen_range(0..3)),
            1 => Value::Int(i64::MIN + rng.gen_range(0..3)),
            _ => Value::Int(rng.gen_range(-20..=20)),
        },
        Type::Float => Value::Float(rng.gen_range(-400..=400) as f64 / 4.0),
        Type::Option(t) => {
            if rng.gen_bool(0.5) {
                Value::some(random_value(rng, t))
            } else {
                Value::none()
            }
        }
        Type::Tuple(ts) => Value::Tuple(ts.iter().map(|t| random_value(rng, t)).collect()),
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub steps: Vec<String>,
    pub cycles: usize,
    pub mismatches: Vec<String>,
}

/// Per-prototype call arguments, so evaluation order across prototypes does not matter.
fn calls_by_prototype(log: &[(String, Value, Value)]) -> BTreeMap<String, Vec<Value>> {
    let mut out: BTreeMap<String, Vec<Value>> = BTreeMap::new();
    for (p, arg, _) in log {
        out.entry(p.clone()).or_default().push(arg.clone());
    }
    out
}

/// Checks every non-prototype step of `compiled` on `streams` random streams of `len` cycles.
pub fn check_steps(
    label: &str,
    compiled: &Compiled,
    rng: &mut ChaCha8Rng,
    streams: usize,
    len: usize,
    report: &mut Report,
) {
    let oracle = AstEval::new(&compiled.typed.program);
    let norm = NormInterpreter::new(&compiled.norm);
    let machines = &compiled.machines;
    for m in machines.machines.iter().filter(|m| m.kind != MachineKind::Prototype) {
        report.steps.push(format!("{}::{}", label, m.name));
        for s in 0..streams {
            let mut stim = Stimulus::new();
            for p in machines.machines.iter().filter(|p| p.kind == MachineKind::Prototype) {
                let vals = (0..len * 4).map(|_| random_value(rng, &p.output_ty)).collect();
                stim = stim.with(&p.name, vals);
            }
            let mut ext = [ScriptedExterns::new(&stim), ScriptedExterns::new(&stim), ScriptedExterns::new(&stim)];
            let mut a = State::new();
            let mut n = NormInstance::new();
            let mut o = Instance::new(machines, &m.name).unwrap();
            machine_reset(machines, &mut o).unwrap();
            for k in 0..len {
                let input = random_value(rng, &m.input_ty);
                let [e0, e1, e2] = &mut ext;
                let va = oracle.step(&m.name, &mut a, &input, e0);
                let vn = norm.step(&m.name, &mut n, &input, e1).unwrap();
                let vo = machine_step(machines, &mut o, &input, e2).unwrap();
                report.cycles += 1;
                if va != vn || vn != vo {
                    report.mismatches.push(format!(
                        "{}::{} stream {} cycle {} input {}: oracle {} normir {} ooir {}",
                        label, m.name, s, k, input, va, vn, vo
                    ));
                    break;
                }
                let logs: Vec<_> = ext.iter().map(|e| calls_by_prototype(&e.log)).collect();
                if logs[0] != logs[1] || logs[1] != logs[2] {
                    report
                        .mismatches
                        .push(format!("{}::{} stream {} cycle {}: extern calls differ", label, m.name, s, k));
                    break;
                }
            }
        }
    }
}

/// The full corpus, seeded.
pub fn corpus_equivalence(seed: u64, streams: usize, len: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    for case in super::corpus() {
        check_steps(&case.name, &case.compiled(), &mut rng, streams, len, &mut report);
    }
    report
}
