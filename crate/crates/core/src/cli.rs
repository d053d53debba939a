//! Command-line front end.
//!
//! Exit codes: 0 live / bounded / no deadlock / valid, 10 possible deadlock,
//! 11 inconclusive, 2 usage, parse or validation errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analyzer::{check_liveness, dimension, AnalysisConfig, DimensionResult, Method, Verdict};
use crate::encoder::{build_base_system, build_block_clauses, BlockingOverride, Capacities};
use crate::gomory::CutConfig;
use crate::model::{mirror_transform, Dimensioning, Network};
use crate::oracle::{explore, ExploreConfig};
use crate::textio::{emit_network, emit_report_with, parse, Format, Report, ReportOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BLOCKED: i32 = 10;
pub const EXIT_INCONCLUSIVE: i32 = 11;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dpn", version, about = "Liveness and buffer sizing for dataflow process networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Try to prove that no globally blocked state exists at the given capacities.
    Check(AnalysisArgs),
    /// Find the largest uniform capacity that still admits a blocked state.
    Dimension(AnalysisArgs),
    /// Enumerate reachable configurations at the given capacities.
    Explore(ExploreArgs),
    /// Replace capacities by reverse channels holding free slots.
    Mirror(DimsInput),
    /// Parse and validate a network file.
    Validate(Input),
}

#[derive(Debug, Args)]
struct Input {
    /// Network description file.
    input: PathBuf,
    /// Print a JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DimsInput {
    #[command(flatten)]
    input: Input,
    /// Per-channel capacities, e.g. `f=1,g=2`.
    #[arg(long, conflicts_with = "z_uniform")]
    dims: Option<String>,
    /// The same capacity for every channel.
    #[arg(long, value_name = "N")]
    z_uniform: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Blocking {
    /// Weak for deterministic tasks, strong for the others.
    Model,
    Strong,
    Weak,
}

impl From<Blocking> for BlockingOverride {
    fn from(b: Blocking) -> Self {
        match b {
            Blocking::Model => BlockingOverride::FromModel,
            Blocking::Strong => BlockingOverride::AllStrong,
            Blocking::Weak => BlockingOverride::AllWeak,
        }
    }
}

#[derive(Debug, Args)]
struct AnalysisArgs {
    #[command(flatten)]
    target: DimsInput,
    /// big-m-lp, branch-lp or branch-ilp.
    #[arg(long, default_value = "branch-ilp")]
    method: Method,
    #[arg(long, value_enum, default_value = "model")]
    blocking: Blocking,
    #[arg(long, default_value_t = CutConfig::default().max_cuts)]
    max_cuts: u64,
    #[arg(long, default_value_t = CutConfig::default().max_pivots)]
    max_pivots: u64,
    /// Worker threads for branch solves.
    #[arg(long, default_value_t = 0)]
    parallel: usize,
    /// Print the base system and blockedness clauses.
    #[arg(long)]
    dump_constraints: bool,
    /// Print every cutting plane.
    #[arg(long)]
    dump_cuts: bool,
    /// Print witnesses including zero entries.
    #[arg(long)]
    dump_witness: bool,
    /// Report wall-clock time.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    #[command(flatten)]
    target: DimsInput,
    #[arg(long, value_enum, default_value = "model")]
    blocking: Blocking,
    #[arg(long, default_value_t = ExploreConfig::default().max_configurations)]
    max_configs: usize,
    #[arg(long)]
    timing: bool,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the command line against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line, writing the report to `out` and diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_ERROR
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn load(path: &PathBuf) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|errors| {
        let lines: Vec<String> = errors
            .iter()
            .map(|e| format!("{}:{e}", path.display()))
            .collect();
        Failure(lines.join("\n"))
    })
}

/// Parses `f=1,g=2`.
pub fn parse_dims(text: &str) -> Result<Dimensioning, String> {
    let mut capacities = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (ch, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected <channel>=<capacity>, found '{item}'"))?;
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| format!("invalid capacity in '{item}'"))?;
        if capacities.insert(ch.trim().into(), v).is_some() {
            return Err(format!("channel '{}' given twice", ch.trim()));
        }
    }
    Ok(Dimensioning { capacities })
}

fn dims_for(target: &DimsInput, network: &Network) -> Result<Dimensioning, Failure> {
    let dims = match (&target.dims, target.z_uniform) {
        (Some(text), _) => parse_dims(text).map_err(Failure)?,
        (None, Some(z)) => Dimensioning::uniform(network, z),
        (None, None) => return Err(Failure("this command needs --dims or --z-uniform".into())),
    };
    dims.check(network)?;
    Ok(dims)
}

fn format(json: bool) -> Format {
    if json {
        Format::Json
    } else {
        Format::Text
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate(input) => {
            let text = std::fs::read_to_string(&input.input)
                .map_err(|e| Failure(format!("cannot read {}: {e}", input.input.display())))?;
            let (name, errors) = match parse(&text) {
                Ok(n) => (n.name, Vec::new()),
                Err(errors) => (input.input.display().to_string(), errors),
            };
            let report = Report::Validate {
                network: &name,
                errors: &errors,
            };
            out.write_all(emit_report_with(&report, format(input.json), &ReportOptions::default()).as_bytes())?;
            Ok(if errors.is_empty() { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Mirror(target) => {
            let network = load(&target.input.input)?;
            let dims = dims_for(&target, &network)?;
            let mirrored = mirror_transform(&network, &dims)?;
            let text = emit_network(&mirrored);
            let report = Report::Mirror {
                network: &network.name,
                text: &text,
            };
            out.write_all(emit_report_with(&report, format(target.input.json), &ReportOptions::default()).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Explore(args) => {
            let network = load(&args.target.input.input)?;
            let dims = dims_for(&args.target, &network)?;
            let config = ExploreConfig {
                max_configurations: args.max_configs,
                blocking: args.blocking.into(),
            };
            let start = Instant::now();
            let result = explore(&network, &dims, &config)?;
            let options = ReportOptions {
                millis: args.timing.then(|| start.elapsed().as_millis()),
                full_witness: false,
            };
            let report = Report::Explore {
                network: &network.name,
                dims: &dims,
                result: &result,
            };
            out.write_all(emit_report_with(&report, format(args.target.input.json), &options).as_bytes())?;
            Ok(if result.has_blocked() {
                EXIT_BLOCKED
            } else if result.truncated {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        Command::Check(args) => analysis(args, out, true),
        Command::Dimension(args) => analysis(args, out, false),
    }
}

fn analysis(args: AnalysisArgs, out: &mut dyn Write, check: bool) -> Result<i32, Failure> {
    let network = load(&args.target.input.input)?;
    let config = AnalysisConfig {
        cuts: CutConfig {
            max_cuts: args.max_cuts,
            max_pivots: args.max_pivots,
        },
        blocking: args.blocking.into(),
        parallel: args.parallel,
    };
    let json = args.target.input.json;
    let start = Instant::now();
    let (body, cut_log, code, capacities) = if check {
        let dims = dims_for(&args.target, &network)?;
        let report = check_liveness(&network, &dims, args.method, &config)?;
        let options = options(&args, start);
        let body = emit_report_with(
            &Report::Check {
                network: &network.name,
                report: &report,
            },
            format(json),
            &options,
        );
        let code = match report.verdict {
            Verdict::Live { .. } => EXIT_OK,
            Verdict::Unknown { .. } => EXIT_BLOCKED,
            Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        };
        (body, report.cut_log, code, Capacities::Concrete(dims))
    } else {
        if args.target.dims.is_some() || args.target.z_uniform.is_some() {
            return Err(Failure("dimension searches over capacities and takes no --dims or --z-uniform".into()));
        }
        let report = dimension(&network, args.method, &config)?;
        let options = options(&args, start);
        let body = emit_report_with(
            &Report::Dimension {
                network: &network.name,
                report: &report,
            },
            format(json),
            &options,
        );
        let code = match report.result {
            DimensionResult::BoundedLive { .. } | DimensionResult::LiveForAllValid { .. } => EXIT_OK,
            DimensionResult::Unbounded { .. } => EXIT_BLOCKED,
            DimensionResult::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        };
        (body, report.cut_log, code, Capacities::SymbolicZ)
    };

    let mut constraints = Vec::new();
    if args.dump_constraints {
        let base = build_base_system(&network, capacities)?;
        constraints.extend(base.system.dump().lines().map(str::to_string));
        let clauses = build_block_clauses(&network, config.blocking);
        for c in &clauses.clauses {
            let parts: Vec<String> = c.disjuncts.iter().map(|d| d.to_string()).collect();
            constraints.push(format!("clause {}: {}", c.owner, parts.join(" | ")));
        }
    }
    let cuts = if args.dump_cuts { cut_log } else { Vec::new() };

    if json {
        let mut value: serde_json::Value = serde_json::from_str(&body)?;
        if args.dump_constraints {
            value["constraints"] = constraints.into();
        }
        if args.dump_cuts {
            value["cuts"] = cuts.into();
        }
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        out.write_all(text.as_bytes())?;
    } else {
        out.write_all(body.as_bytes())?;
        if args.dump_constraints {
            writeln!(out, "constraints:")?;
            for line in &constraints {
                writeln!(out, "  {line}")?;
            }
        }
        if args.dump_cuts {
            writeln!(out, "cuts:")?;
            for line in &cuts {
                writeln!(out, "  {line}")?;
            }
        }
    }
    Ok(code)
}

fn options(args: &AnalysisArgs, start: Instant) -> ReportOptions {
    ReportOptions {
        millis: args.timing.then(|| start.elapsed().as_millis()),
        full_witness: args.dump_witness,
    }
}
