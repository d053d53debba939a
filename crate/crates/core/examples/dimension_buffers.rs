// Find the largest uniform capacity at which a network may still deadlock,
// and compare the integer answer with the relaxation.

use dpnlive::analyzer::{dimension, AnalysisConfig, DimensionResult, Method};
use dpnlive::textio::parse;

const FILES: [(&str, &str); 4] = [
    ("e1", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/e1.dpn"))),
    ("e2", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/e2.dpn"))),
    ("e3", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/e3.dpn"))),
    ("rate2", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus/rate2.dpn"))),
];

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = AnalysisConfig::default();
    for (name, source) in FILES {
        let network = parse(source).map_err(|e| format!("{e:?}"))?;
        for method in [Method::BranchLp, Method::BranchIlp] {
            let report = dimension(&network, method, &config)?;
            let summary = match &report.result {
                DimensionResult::BoundedLive { z_ip, z_lp, recommended } => {
                    format!("deadlock possible up to {z_ip} (relaxation {z_lp}), use {recommended}")
                }
                DimensionResult::Unbounded { .. } => "deadlock possible at every capacity".to_string(),
                DimensionResult::LiveForAllValid { minimal_valid } => {
                    format!("no deadlock at any valid capacity, smallest {minimal_valid}")
                }
                DimensionResult::Inconclusive { reason } => format!("inconclusive: {reason}"),
            };
            println!(
                "{name:<6} {method:<10} {summary} [{} branches, {} cuts]",
                report.branches.total, report.stats.cuts
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
