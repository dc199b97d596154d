//! A producer that outruns its consumer fills the channel; the simulator
//! stops at the first send into the full queue.

use mimosa::codegen::parse_model;
use mimosa::simulator::{run_detailed, Stimulus};

fn main() {
    let model = parse_model(include_str!("../corpus/overflow.model")).expect("valid model");
    let compiled = mimosa::pipeline::compile(include_str!("../corpus/overflow.mim"), Some(&model)).expect("compiles");
    let outcome = run_detailed(&compiled.typed, &compiled.machines, &model, &Stimulus::new(), 1_000_000).expect("runs");
    print!("{}", outcome.trace.to_text());
    if let Some((channel, t)) = outcome.trace.overflow() {
        let q = &outcome.queues[channel];
        let stamps: Vec<u64> = q.iter().map(|(_, s)| *s).collect();
        println!("\n{} overflowed at {}us holding stamps {:?}", channel, t, stamps);
    }
}
