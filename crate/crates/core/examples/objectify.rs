//! Turns steps into machines with explicit memory, then drives one machine
//! by hand.

use mimosa::simulator::{machine_reset, machine_step, Instance, ScriptedExterns, Stimulus};
use mimosa::Value;

fn main() {
    let compiled = mimosa::pipeline::compile(include_str!("edge.mim"), None).expect("compiles");
    print!("{}", compiled.dump_ooir());

    let machines = &compiled.machines;
    let mut edge = Instance::new(machines, "edge").unwrap();
    machine_reset(machines, &mut edge).unwrap();
    let mut ext = ScriptedExterns::new(&Stimulus::new());
    println!();
    for level in [false, true, true, false, false] {
        let out = machine_step(machines, &mut edge, &Value::Bool(level), &mut ext).unwrap();
        println!("in {:<5} -> out {}", level, out);
    }
}
