// Parse network descriptions, report errors with their positions, and print
// the canonical form.

use dpnlive::textio::{emit_network, parse};

const BROKEN: &str = "network broken
channel f A -> B
task A mode=nondeterministic
init -> s0
s0 -> s0 produce g:1
task B mode=nondeterministic
init -> t0
t0 -> t0 produce f:1
";

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let source = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/fork_join.dpn"));
    let network = parse(source).map_err(|e| format!("{e:?}"))?;
    println!(
        "{}: {} tasks, {} channels",
        network.name,
        network.tasks.len(),
        network.channels.len()
    );
    print!("{}", emit_network(&network));

    println!("\nerrors in a broken file:");
    let errors = parse(BROKEN).expect_err("the file is broken");
    for e in &errors {
        println!("  {e}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
