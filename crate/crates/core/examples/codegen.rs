//! Writes the C project for the edge detector.
//!
//! `cargo run --example codegen -- out_dir` keeps the files; without an
//! argument they go to a temporary directory and only the listing is shown.

use mimosa::codegen::parse_model;

fn main() {
    let model = parse_model(include_str!("edge.model")).expect("valid model");
    let compiled = mimosa::pipeline::compile(include_str!("edge.mim"), Some(&model)).expect("compiles");
    let project = compiled.codegen(&model);

    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mimosa_edge"));
    project.write_to(&dir).expect("writable output directory");
    for (name, text) in &project.files {
        println!("{:<14} {:>5} lines", name, text.lines().count());
    }
    println!("\nwritten to {}\n", dir.display());
    print!("{}", project.file("edge.c").unwrap());
}
