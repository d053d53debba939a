// Check a producer/consumer pair at two capacities with each method.

use dpnlive::analyzer::{check_liveness, verdict_hierarchy, AnalysisConfig, Method, Verdict};
use dpnlive::model::Dimensioning;
use dpnlive::textio::parse;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let network = parse(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/e1.dpn")))
        .map_err(|e| format!("{e:?}"))?;
    let config = AnalysisConfig::default();

    for d in [0, 1] {
        let dims = Dimensioning::uniform(&network, d);
        for method in Method::ALL {
            let report = check_liveness(&network, &dims, method, &config)?;
            match &report.verdict {
                Verdict::Live { .. } => println!("{dims}  {method:<10}  live"),
                Verdict::Unknown { witness, .. } => {
                    // a blocked pseudo-state; it may or may not be reachable
                    let values: Vec<String> = witness
                        .values()
                        .into_iter()
                        .filter(|(name, _)| name.starts_with("n["))
                        .map(|(name, v)| format!("{name}={v}"))
                        .collect();
                    println!("{dims}  {method:<10}  unknown, witness {}", values.join(" "));
                }
                Verdict::Inconclusive { reason, .. } => println!("{dims}  {method:<10}  inconclusive: {reason}"),
            }
        }
    }

    // all three methods at once, checked for consistency
    let reports = verdict_hierarchy(&network, &Dimensioning::uniform(&network, 2), &config)?;
    assert!(reports.iter().all(|r| r.verdict.is_live()));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
