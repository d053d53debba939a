// Compare liveness proofs with exhaustive exploration on generated networks.

use dpnlive::analyzer::{check_liveness, AnalysisConfig, Method};
use dpnlive::model::Dimensioning;
use dpnlive::oracle::{explore, ExploreConfig};
use dpnlive::random::{seeded_network, GeneratorConfig};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = AnalysisConfig::default();
    let mut counts = [[0usize; 2]; 2];
    for i in 0..40 {
        let network = seeded_network(1, i, &GeneratorConfig::default());
        let dims = Dimensioning::uniform(&network, network.max_initial_tokens().max(1));
        let live = check_liveness(&network, &dims, Method::BranchIlp, &config)?.verdict.is_live();
        let blocked = explore(&network, &dims, &ExploreConfig::default())?.has_blocked();
        assert!(!(live && blocked), "{} proved live but deadlocks", network.name);
        counts[live as usize][blocked as usize] += 1;
    }
    println!("proved live:           {}", counts[1][0]);
    println!("not proved, deadlocks: {}", counts[0][1]);
    println!("not proved, no deadlock reachable: {}", counts[0][0]);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
