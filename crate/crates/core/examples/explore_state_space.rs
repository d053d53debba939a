// Enumerate reachable configurations and print the shortest path into a
// deadlock.

use dpnlive::model::Dimensioning;
use dpnlive::oracle::{explore, ExploreConfig};
use dpnlive::textio::parse;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let network = parse(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/pipeline.dpn")))
        .map_err(|e| format!("{e:?}"))?;

    for d in 1..=3 {
        let dims = Dimensioning::uniform(&network, d);
        let result = explore(&network, &dims, &ExploreConfig::default())?;
        println!(
            "{dims}: {} configurations, {} blocked",
            result.configurations_visited,
            result.blocked.len()
        );
        if let Some(b) = result.blocked.first() {
            let steps: Vec<String> = b.trace.iter().map(|t| t.to_string()).collect();
            println!("  {} after [{}]", b.configuration, steps.join(", "));
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
