//! Replays the built-in worked examples and prints any mismatching invariant.

use abelian_prym::verify::{run_examples, worked_examples};

fn main() {
    let outcomes = run_examples(&worked_examples());
    for o in &outcomes {
        println!("{} {:<28} {}", if o.passed { "ok  " } else { "FAIL" }, o.name, o.datum);
        for m in &o.mismatches {
            println!("     {m}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    std::process::exit(i32::from(failed > 0));
}
