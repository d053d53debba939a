// Replace bounded channels by reverse channels holding the free slots and
// confirm that both networks reach the same configurations.

use std::collections::BTreeSet;

use dpnlive::model::{mirror_dimensioning, mirror_name, mirror_transform, Dimensioning};
use dpnlive::oracle::{explore, ExploreConfig};
use dpnlive::textio::{emit_network, parse};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let network = parse(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/e3.dpn")))
        .map_err(|e| format!("{e:?}"))?;
    let dims = Dimensioning::uniform(&network, 2);
    let mirrored = mirror_transform(&network, &dims)?;
    print!("{}", emit_network(&mirrored));

    let a = explore(&network, &dims, &ExploreConfig::default())?;
    let b = explore(&mirrored, &mirror_dimensioning(&network, &dims), &ExploreConfig::default())?;
    let original: BTreeSet<_> = a.configurations.iter().cloned().collect();
    let projected: BTreeSet<_> = b
        .configurations
        .iter()
        .map(|c| {
            let mut c = c.clone();
            for ch in &network.channels {
                c.contents.remove(&mirror_name(&network, &ch.id));
            }
            c
        })
        .collect();
    println!(
        "\n{} configurations before, {} after, same set: {}",
        a.configurations.len(),
        b.configurations.len(),
        original == projected
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
