//! Runs the edge detector network for 600ms with a scripted button.

use mimosa::codegen::parse_model;
use mimosa::simulator::parse_stimulus;

fn main() {
    let model = parse_model(include_str!("edge.model")).expect("valid model");
    let stimulus = parse_stimulus(include_str!("edge.stim")).expect("valid stimulus");
    let compiled = mimosa::pipeline::compile(include_str!("edge.mim"), Some(&model)).expect("compiles");
    let trace = compiled.simulate(&model, &stimulus, 600_000).expect("runs");
    print!("{}", trace.to_text());
    println!("\ntoggle_led called {} time(s)", trace.externs("toggle_led").count());
}
