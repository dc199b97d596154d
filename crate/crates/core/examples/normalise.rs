//! Prints the normalised form of the edge detector: every equation has a
//! simple right-hand side, and lazy operands keep their own blocks.

fn main() {
    let compiled = mimosa::pipeline::compile(include_str!("edge.mim"), None).expect("compiles");
    print!("{}", compiled.dump_normir());
}
