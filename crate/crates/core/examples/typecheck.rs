//! Infers step signatures, including polymorphic ones, and shows how
//! rejected programs are reported.

use mimosa::frontend::parse_program;
use mimosa::pipeline;
use mimosa::sema::infer;

const BROKEN: &str = "step loop (i : int) --> (o : int)
{
  x = x + i;
  o = pre i;
}
";

fn main() {
    let program = parse_program(include_str!("../corpus/poly.mim")).expect("parses");
    let typed = infer(&program).expect("well typed");
    for (name, scheme) in &typed.schemes {
        println!("{:<10} : {}", name, scheme);
    }

    // After monomorphisation each polymorphic step exists once per use.
    let checked = pipeline::check(include_str!("../corpus/poly.mim"), None).expect("checks");
    let names: Vec<&str> = checked.program.steps.iter().map(|s| s.name.as_str()).collect();
    println!("\ninstances: {}", names.join(", "));

    println!();
    for d in pipeline::check(BROKEN, None).unwrap_err() {
        println!("{}", d.render("loop.mim"));
    }
}
