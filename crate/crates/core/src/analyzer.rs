//! Liveness and buffer-dimensioning verdicts.
//!
//! A network is proved live at a dimensioning when no pseudo-state has every
//! task blocked, i.e. when the blocked-state system is empty. Emptiness is
//! tested on the big-M relaxation, on the LP relaxation of every branch, or
//! on the integer points of every branch. Failing to prove emptiness yields
//! [`Verdict::Unknown`]: the witness is a pseudo-state that may well be
//! unreachable.
//!
//! Branches are searched depth first. Clauses are ordered by size and each
//! chosen disjunct row is added to a copy of the parent's phase-1 tableau; a
//! subtree is dropped as soon as its rows are LP-infeasible, which covers
//! every branch below it. A clause already satisfied by a chosen row is
//! skipped since its other choices only shrink the region.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::encoder::{
    build_base_system, build_block_clauses, encode_big_m, row_key, BlockClauseSet,
    BlockingOverride, Capacities, Clause, Disjunct, EncodeError, StateSystem,
};
use crate::gomory::{
    integer_feasible_logged, solve_ilp_logged, CutConfig, InconclusiveReason, IlpOutcome,
    IntFeasibility,
};
use crate::model::{validate, Dimensioning, Network, ValidationReport};
use crate::simplex::{
    phase_one, solve_lp, Constraint, IncrementalLp, LinearSystem, LpOutcome,
    Objective, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BigMLp,
    BranchLp,
    BranchIlp,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::BigMLp, Method::BranchLp, Method::BranchIlp];

    pub fn name(self) -> &'static str {
        match self {
            Method::BigMLp => "big-m-lp",
            Method::BranchLp => "branch-lp",
            Method::BranchIlp => "branch-ilp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}' (expected big-m-lp, branch-lp or branch-ilp)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("network is not valid: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidNetwork(ValidationReport),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("dimensioning needs at least one channel")]
    NoChannels,
    #[error("the {0} method does not apply to dimensioning")]
    UnsupportedMethod(Method),
    #[error("{stronger} proved liveness but {weaker} did not")]
    HierarchyViolation { weaker: Method, stronger: Method },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub cuts: CutConfig,
    pub blocking: BlockingOverride,
    /// Worker threads for leaf solves; 0 or 1 runs sequentially. Results do
    /// not depend on it.
    pub parallel: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            cuts: CutConfig::default(),
            blocking: BlockingOverride::FromModel,
            parallel: 0,
        }
    }
}

/// Where a witness pseudo-state lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSource {
    BigM,
    Branch(Vec<Disjunct>),
}

/// A point of `system`, checkable by substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub source: WitnessSource,
    pub system: LinearSystem,
    pub point: Vec<Rational>,
}

impl Witness {
    pub fn verify(&self) -> bool {
        self.system.is_feasible_point(&self.point)
    }

    pub fn values(&self) -> BTreeMap<String, Rational> {
        self.system.named_point(&self.point)
    }

    pub fn is_integral(&self) -> bool {
        self.system.is_integral_point(&self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Live { method: Method },
    /// Emptiness not shown: `witness` is a blocked pseudo-state.
    Unknown { method: Method, witness: Box<Witness> },
    /// A branch exhausted the cutting-plane safeguards.
    Inconclusive { method: Method, reason: InconclusiveReason },
}

impl Verdict {
    pub fn is_live(&self) -> bool {
        matches!(self, Verdict::Live { .. })
    }

    pub fn method(&self) -> Method {
        match self {
            Verdict::Live { method }
            | Verdict::Unknown { method, .. }
            | Verdict::Inconclusive { method, .. } => *method,
        }
    }
}

/// Branch bookkeeping. `total` counts decided search nodes: leaves reached
/// plus subtrees cut off as LP-infeasible, the latter counted as infeasible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BranchCounts {
    pub total: u64,
    pub feasible: u64,
    pub infeasible: u64,
    pub unbounded: u64,
    #[serde(skip_serializing_if = "is_zero")]
    pub inconclusive: u64,
}

fn is_zero(n: &u64) -> bool {
    *n == 0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub cuts: u64,
    pub pivots: u64,
}

impl SolveStats {
    fn add(&mut self, other: SolveStats) {
        self.cuts += other.cuts;
        self.pivots += other.pivots;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LivenessReport {
    pub verdict: Verdict,
    /// Absent for the big-M method, which solves a single system.
    pub branches: Option<BranchCounts>,
    pub stats: SolveStats,
    /// Cutting-plane log, one line per cut, prefixed by the branch.
    pub cut_log: Vec<String>,
}

// ---------------------------------------------------------------------------
// branch search

#[derive(Debug, Clone, Copy, Default)]
struct SearchCounters {
    leaves: u64,
    pruned: u64,
    pivots: u64,
}

struct Leaf {
    disjuncts: Vec<Disjunct>,
    system: LinearSystem,
    /// Lexicographically smallest LP point of the leaf.
    point: Vec<Rational>,
    /// Counters once this leaf was produced.
    counters: SearchCounters,
}

struct Frame {
    lp: IncrementalLp,
    depth: usize,
    chosen: Vec<usize>,
    disjuncts: Vec<Disjunct>,
    next: usize,
}

/// Lazy depth-first enumeration of the LP-feasible branches.
struct BranchSearch {
    clauses: Vec<Clause>,
    /// Per clause: `(row id, row)` for each disjunct.
    rows: Vec<Vec<(usize, Constraint)>>,
    stack: Vec<Frame>,
    seen: HashSet<(usize, Vec<usize>)>,
    counters: SearchCounters,
}

impl BranchSearch {
    fn new(base: &StateSystem, clauses: &BlockClauseSet) -> Result<Self, EncodeError> {
        if let Some(c) = clauses.empty_clause() {
            return Err(EncodeError::ClauseEmpty {
                owner: c.owner.clone(),
            });
        }
        let mut ordered = clauses.clauses.clone();
        ordered.sort_by_key(|c| c.disjuncts.len());
        let mut ids = BTreeMap::new();
        let rows = ordered
            .iter()
            .map(|c| {
                c.disjuncts
                    .iter()
                    .map(|d| {
                        let row = base.disjunct_constraint(d);
                        let next = ids.len();
                        let id = *ids.entry(row_key(&row)).or_insert(next);
                        (id, row)
                    })
                    .collect()
            })
            .collect();
        let mut search = BranchSearch {
            clauses: ordered,
            rows,
            stack: Vec::new(),
            seen: HashSet::new(),
            counters: SearchCounters::default(),
        };
        match IncrementalLp::new(base.system.clone()) {
            Ok(lp) => {
                search.counters.pivots = lp.pivots();
                search.stack.push(Frame {
                    lp,
                    depth: 0,
                    chosen: Vec::new(),
                    disjuncts: Vec::new(),
                    next: 0,
                });
            }
            Err(cert) => {
                assert!(cert.verify(&base.system), "unverified certificate");
                search.counters.pruned = 1;
            }
        }
        Ok(search)
    }

    fn next_leaf(&mut self) -> Option<Leaf> {
        loop {
            let top = self.stack.last_mut()?;
            if top.depth == self.clauses.len() {
                let f = self.stack.pop().expect("nonempty");
                self.counters.leaves += 1;
                return Some(Leaf {
                    point: f.lp.point(),
                    system: f.lp.system().clone(),
                    disjuncts: f.disjuncts,
                    counters: self.counters,
                });
            }
            let rows = &self.rows[top.depth];
            if top.next == 0 && rows.iter().any(|(id, _)| top.chosen.contains(id)) {
                top.depth += 1;
                if !self.seen.insert((top.depth, top.chosen.clone())) {
                    self.stack.pop();
                }
                continue;
            }
            if top.next >= rows.len() {
                self.stack.pop();
                continue;
            }
            let (id, row) = rows[top.next].clone();
            let disjunct = self.clauses[top.depth].disjuncts[top.next].clone();
            top.next += 1;
            let mut chosen = top.chosen.clone();
            let at = chosen.partition_point(|&c| c < id);
            chosen.insert(at, id);
            let depth = top.depth + 1;
            if !self.seen.insert((depth, chosen.clone())) {
                continue;
            }
            let mut lp = top.lp.clone();
            let mut disjuncts = top.disjuncts.clone();
            let before = lp.pivots();
            let added = lp.add_constraint(row);
            self.counters.pivots += lp.pivots() - before;
            match added {
                Ok(()) => {
                    disjuncts.push(disjunct);
                    self.stack.push(Frame {
                        lp,
                        depth,
                        chosen,
                        disjuncts,
                        next: 0,
                    });
                }
                Err(cert) => {
                    assert!(cert.verify(lp.system()), "unverified certificate");
                    self.counters.pruned += 1;
                }
            }
        }
    }
}

/// Evaluates leaves in search order until `stop` holds, fanning solves out
/// over `parallel` threads. Returns the evaluated leaves and the search
/// counters as of the last one, so the result is the same for any thread
/// count.
fn drive<R: Send>(
    search: &mut BranchSearch,
    parallel: usize,
    eval: impl Fn(&Leaf) -> R + Sync,
    stop: impl Fn(&R) -> bool,
) -> (Vec<(Leaf, R)>, SearchCounters) {
    let mut out = Vec::new();
    if parallel <= 1 {
        while let Some(leaf) = search.next_leaf() {
            let r = eval(&leaf);
            let done = stop(&r);
            let counters = leaf.counters;
            out.push((leaf, r));
            if done {
                return (out, counters);
            }
        }
        return (out, search.counters);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .expect("thread pool");
    loop {
        let batch: Vec<Leaf> = std::iter::from_fn(|| search.next_leaf())
            .take(parallel * 2)
            .collect();
        if batch.is_empty() {
            return (out, search.counters);
        }
        let results: Vec<R> = pool.install(|| batch.par_iter().map(&eval).collect());
        for (leaf, r) in batch.into_iter().zip(results) {
            let done = stop(&r);
            let counters = leaf.counters;
            out.push((leaf, r));
            if done {
                return (out, counters);
            }
        }
    }
}

fn prepare(network: &Network) -> Result<(), AnalysisError> {
    let report = validate(network);
    if report.is_valid() {
        Ok(())
    } else {
        Err(AnalysisError::InvalidNetwork(report))
    }
}

fn branch_label(disjuncts: &[Disjunct]) -> String {
    let parts: Vec<String> = disjuncts.iter().map(|d| d.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

// ---------------------------------------------------------------------------
// liveness

enum LeafCheck {
    Feasible(Vec<Rational>),
    Infeasible,
    Inconclusive(InconclusiveReason),
}

/// Tries to prove that no pseudo-state at `dims` has every task blocked.
pub fn check_liveness(
    network: &Network,
    dims: &Dimensioning,
    method: Method,
    config: &AnalysisConfig,
) -> Result<LivenessReport, AnalysisError> {
    prepare(network)?;
    let base = build_base_system(network, Capacities::Concrete(dims.clone()))?;
    let clauses = build_block_clauses(network, config.blocking);
    if method == Method::BigMLp {
        let problem = encode_big_m(&base, &clauses)?;
        let (tableau, outcome) = phase_one(&problem.system);
        let stats = SolveStats {
            cuts: 0,
            pivots: tableau.pivots(),
        };
        let verdict = match outcome {
            Err(certificate) => {
                assert!(certificate.verify(&problem.system), "unverified certificate");
                Verdict::Live { method }
            }
            Ok(()) => Verdict::Unknown {
                method,
                witness: Box::new(Witness {
                    source: WitnessSource::BigM,
                    system: problem.system,
                    point: tableau.point(),
                }),
            },
        };
        return Ok(LivenessReport {
            verdict,
            branches: None,
            stats,
            cut_log: Vec::new(),
        });
    }

    let mut search = BranchSearch::new(&base, &clauses)?;
    let cuts = config.cuts;
    let eval = |leaf: &Leaf| -> (LeafCheck, SolveStats, Vec<String>) {
        if method == Method::BranchLp {
            return (LeafCheck::Feasible(leaf.point.clone()), SolveStats::default(), Vec::new());
        }
        let (r, stats, log) = integer_feasible_logged(&leaf.system, &cuts);
        let stats = SolveStats {
            cuts: stats.cuts,
            pivots: stats.pivots,
        };
        let label = branch_label(&leaf.disjuncts);
        let log = log.iter().map(|c| format!("{label} {}", c.log_line(&leaf.system))).collect();
        let check = match r {
            IntFeasibility::Point(p) => LeafCheck::Feasible(p),
            IntFeasibility::IntInfeasible => LeafCheck::Infeasible,
            IntFeasibility::Inconclusive { reason } => LeafCheck::Inconclusive(reason),
        };
        (check, stats, log)
    };
    let (evaluated, counters) = drive(&mut search, config.parallel, eval, |r| {
        matches!(r.0, LeafCheck::Feasible(_))
    });

    let mut counts = BranchCounts {
        total: counters.leaves + counters.pruned,
        infeasible: counters.pruned,
        ..BranchCounts::default()
    };
    let mut stats = SolveStats {
        cuts: 0,
        pivots: counters.pivots,
    };
    let mut cut_log = Vec::new();
    let mut verdict = Verdict::Live { method };
    let mut reason = None;
    for (leaf, (check, s, log)) in evaluated {
        stats.add(s);
        cut_log.extend(log);
        match check {
            LeafCheck::Feasible(point) => {
                counts.feasible += 1;
                verdict = Verdict::Unknown {
                    method,
                    witness: Box::new(Witness {
                        source: WitnessSource::Branch(leaf.disjuncts),
                        system: leaf.system,
                        point,
                    }),
                };
            }
            LeafCheck::Infeasible => counts.infeasible += 1,
            LeafCheck::Inconclusive(r) => {
                counts.inconclusive += 1;
                reason.get_or_insert(r);
            }
        }
    }
    if let (Verdict::Live { .. }, Some(reason)) = (&verdict, reason) {
        verdict = Verdict::Inconclusive { method, reason };
    }
    Ok(LivenessReport {
        verdict,
        branches: Some(counts),
        stats,
        cut_log,
    })
}

/// Runs all three methods, weakest first, and checks that a weaker method
/// never proves liveness where a stronger one fails.
pub fn verdict_hierarchy(
    network: &Network,
    dims: &Dimensioning,
    config: &AnalysisConfig,
) -> Result<Vec<LivenessReport>, AnalysisError> {
    let reports = Method::ALL
        .into_iter()
        .map(|m| check_liveness(network, dims, m, config))
        .collect::<Result<Vec<_>, _>>()?;
    for pair in reports.windows(2) {
        if pair[0].verdict.is_live() && !pair[1].verdict.is_live() {
            return Err(AnalysisError::HierarchyViolation {
                weaker: pair[0].verdict.method(),
                stronger: pair[1].verdict.method(),
            });
        }
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// dimensioning

/// An optimum of `z` that may be infinite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ZValue {
    Finite(Rational),
    Unbounded,
}

impl fmt::Display for ZValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZValue::Finite(v) => write!(f, "{v}"),
            ZValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimensionResult {
    /// No blocked pseudo-state with capacity above `z_ip`; any uniform
    /// capacity of at least `z_ip + 1` makes the network live.
    BoundedLive {
        z_ip: u64,
        z_lp: ZValue,
        recommended: Dimensioning,
    },
    /// Blocked pseudo-states exist for arbitrarily large capacities.
    Unbounded { witness: Box<Witness>, ray: Vec<Rational> },
    /// No branch is feasible for any valid capacity.
    LiveForAllValid { minimal_valid: Dimensioning },
    Inconclusive { reason: InconclusiveReason },
}

/// Solve record of one leaf of the dimensioning search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRecord {
    pub disjuncts: Vec<Disjunct>,
    pub system: LinearSystem,
    pub lp: LpOutcome,
    /// Absent for the LP method.
    pub ilp: Option<IlpOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub method: Method,
    pub result: DimensionResult,
    /// Largest LP optimum over the feasible branches, if any.
    pub z_lp: Option<ZValue>,
    pub branches: BranchCounts,
    pub stats: SolveStats,
    pub records: Vec<BranchRecord>,
    pub cut_log: Vec<String>,
}

/// Note attached to [`DimensionResult::LiveForAllValid`].
pub const ALL_BRANCHES_EMPTY_NOTE: &str =
    "every branch of the dimensioning program is empty although the network has channels; \
     the initial tokens alone rule out a globally blocked state";

/// Largest uniform capacity admitting a blocked pseudo-state.
pub fn dimension(
    network: &Network,
    method: Method,
    config: &AnalysisConfig,
) -> Result<DimensionReport, AnalysisError> {
    if method == Method::BigMLp {
        return Err(AnalysisError::UnsupportedMethod(method));
    }
    prepare(network)?;
    if network.channels.is_empty() {
        return Err(AnalysisError::NoChannels);
    }
    let base = build_base_system(network, Capacities::SymbolicZ)?;
    let z = base.z.expect("symbolic system");
    let objective = Objective::maximize([(z, Rational::one())]);
    let clauses = build_block_clauses(network, config.blocking);
    let mut search = BranchSearch::new(&base, &clauses)?;
    let cuts = config.cuts;

    let eval = |leaf: &Leaf| -> (LpOutcome, Option<IlpOutcome>, SolveStats, Vec<String>) {
        let lp = solve_lp(&leaf.system, &objective);
        if method == Method::BranchLp {
            return (lp, None, SolveStats::default(), Vec::new());
        }
        let sol = solve_ilp_logged(&leaf.system, &objective, &cuts);
        let label = branch_label(&leaf.disjuncts);
        let log = sol
            .cuts
            .iter()
            .map(|c| format!("{label} {}", c.log_line(&leaf.system)))
            .collect();
        let stats = SolveStats {
            cuts: sol.stats.cuts,
            pivots: sol.stats.pivots,
        };
        (lp, Some(sol.outcome), stats, log)
    };
    let unbounded = |r: &(LpOutcome, Option<IlpOutcome>, SolveStats, Vec<String>)| match &r.1 {
        Some(ilp) => matches!(ilp, IlpOutcome::IntUnbounded { .. }),
        None => matches!(r.0, LpOutcome::Unbounded { .. }),
    };
    let (evaluated, counters) = drive(&mut search, config.parallel, eval, unbounded);

    let mut counts = BranchCounts {
        total: counters.leaves + counters.pruned,
        infeasible: counters.pruned,
        ..BranchCounts::default()
    };
    let mut stats = SolveStats {
        cuts: 0,
        pivots: counters.pivots,
    };
    let mut cut_log = Vec::new();
    let mut records = Vec::new();
    let mut z_lp: Option<ZValue> = None;
    let mut z_ip: Option<Rational> = None;
    let mut unbounded_witness = None;
    let mut reason = None;

    for (leaf, (lp, ilp, s, log)) in evaluated {
        stats.add(s);
        cut_log.extend(log);
        let lp_z = match &lp {
            LpOutcome::Optimal { value, .. } => Some(ZValue::Finite(value.clone())),
            LpOutcome::Unbounded { .. } => Some(ZValue::Unbounded),
            LpOutcome::Infeasible { .. } => None,
        };
        if let Some(v) = lp_z {
            if z_lp.as_ref().is_none_or(|cur| v > *cur) {
                z_lp = Some(v);
            }
        }
        match (&ilp, &lp) {
            (Some(IlpOutcome::IntOptimal { value, .. }), _) => {
                counts.feasible += 1;
                if z_ip.as_ref().is_none_or(|cur| value > cur) {
                    z_ip = Some(value.clone());
                }
            }
            (Some(IlpOutcome::IntUnbounded { witness, ray }), _) => {
                counts.unbounded += 1;
                unbounded_witness.get_or_insert((leaf.disjuncts.clone(), leaf.system.clone(), witness.clone(), ray.clone()));
            }
            (Some(IlpOutcome::IntInfeasible), _) => counts.infeasible += 1,
            (Some(IlpOutcome::Inconclusive { reason: r }), _) => {
                counts.inconclusive += 1;
                reason.get_or_insert(*r);
            }
            (None, LpOutcome::Optimal { value, .. }) => {
                counts.feasible += 1;
                let v = value.floor();
                if z_ip.as_ref().is_none_or(|cur| v > *cur) {
                    z_ip = Some(v);
                }
            }
            (None, LpOutcome::Unbounded { point, ray }) => {
                counts.unbounded += 1;
                unbounded_witness.get_or_insert((leaf.disjuncts.clone(), leaf.system.clone(), point.clone(), ray.clone()));
            }
            (None, LpOutcome::Infeasible { .. }) => counts.infeasible += 1,
        }
        records.push(BranchRecord {
            disjuncts: leaf.disjuncts,
            system: leaf.system,
            lp,
            ilp,
        });
    }

    let result = if let Some((disjuncts, system, point, ray)) = unbounded_witness {
        DimensionResult::Unbounded {
            witness: Box::new(Witness {
                source: WitnessSource::Branch(disjuncts),
                system,
                point,
            }),
            ray,
        }
    } else if let Some(reason) = reason {
        DimensionResult::Inconclusive { reason }
    } else if let Some(z) = z_ip {
        let z = z.to_i64().and_then(|v| u64::try_from(v).ok()).expect("z is a small nonnegative integer");
        DimensionResult::BoundedLive {
            z_ip: z,
            z_lp: z_lp.clone().expect("an integral optimum has a relaxation optimum"),
            recommended: Dimensioning::uniform(network, z + 1),
        }
    } else {
        DimensionResult::LiveForAllValid {
            minimal_valid: Dimensioning::uniform(network, network.max_initial_tokens()),
        }
    };
    Ok(DimensionReport {
        method,
        result,
        z_lp,
        branches: counts,
        stats,
        records,
        cut_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::enumerate_branches;
    use crate::model::fixtures::*;
    use crate::model::TaskMode;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn e1_live_at_one_by_every_method() {
        let n = e1();
        let d = Dimensioning::uniform(&n, 1);
        for m in Method::ALL {
            let rep = check_liveness(&n, &d, m, &cfg()).unwrap();
            assert_eq!(rep.verdict, Verdict::Live { method: m }, "{m}");
        }
    }

    #[test]
    fn e1_unknown_at_zero() {
        let n = e1();
        let d = Dimensioning::uniform(&n, 0);
        let rep = check_liveness(&n, &d, Method::BranchIlp, &cfg()).unwrap();
        let Verdict::Unknown { witness, .. } = rep.verdict else {
            panic!("expected unknown")
        };
        assert!(witness.verify() && witness.is_integral());
        let v = witness.values();
        assert_eq!((v["n[A.a]"].clone(), v["n[B.b]"].clone()), (r(0), r(0)));
    }

    #[test]
    fn e2_unknown_everywhere() {
        let n = e2();
        let d = Dimensioning::uniform(&n, 5);
        let reports = verdict_hierarchy(&n, &d, &cfg()).unwrap();
        assert!(reports.iter().all(|r| matches!(r.verdict, Verdict::Unknown { .. })));
    }

    #[test]
    fn invalid_dimensioning_is_an_error() {
        let n = e3();
        let d = Dimensioning::uniform(&n, 0);
        assert!(matches!(
            check_liveness(&n, &d, Method::BranchIlp, &cfg()),
            Err(AnalysisError::Encode(EncodeError::Model(_)))
        ));
    }

    #[test]
    fn golden_dimensions() {
        let rep = dimension(&e1(), Method::BranchIlp, &cfg()).unwrap();
        match rep.result {
            DimensionResult::BoundedLive { z_ip, z_lp, recommended } => {
                assert_eq!(z_ip, 0);
                assert_eq!(z_lp, ZValue::Finite(r(0)));
                assert_eq!(recommended.to_string(), "f=1");
            }
            other => panic!("unexpected {other:?}"),
        }
        let rep = dimension(&e2(), Method::BranchIlp, &cfg()).unwrap();
        assert!(matches!(rep.result, DimensionResult::Unbounded { .. }));
        let rep = dimension(&e3(), Method::BranchIlp, &cfg()).unwrap();
        match rep.result {
            DimensionResult::LiveForAllValid { minimal_valid } => {
                assert_eq!(minimal_valid.to_string(), "f1=1,f2=1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lp_dimensioning_floors_the_relaxation() {
        let rep = dimension(&e1(), Method::BranchLp, &cfg()).unwrap();
        assert!(matches!(rep.result, DimensionResult::BoundedLive { z_ip: 0, .. }));
        assert!(matches!(
            dimension(&e1(), Method::BigMLp, &cfg()),
            Err(AnalysisError::UnsupportedMethod(_))
        ));
    }

    #[test]
    fn search_agrees_with_full_expansion() {
        for (n, d) in [(e1(), 0), (e1(), 1), (e2(), 2), (e3(), 1), (e3(), 2)] {
            for blocking in [BlockingOverride::AllStrong, BlockingOverride::AllWeak] {
                let dims = Dimensioning::uniform(&n, d);
                let base = build_base_system(&n, Capacities::Concrete(dims.clone())).unwrap();
                let clauses = build_block_clauses(&n, blocking);
                let any = enumerate_branches(&base, &clauses)
                    .unwrap()
                    .branches
                    .iter()
                    .any(|b| crate::simplex::check_feasible(&b.system).is_feasible());
                let c = AnalysisConfig {
                    blocking,
                    ..cfg()
                };
                let rep = check_liveness(&n, &dims, Method::BranchLp, &c).unwrap();
                assert_eq!(any, !rep.verdict.is_live(), "{} d={d}", n.name);
            }
        }
    }

    #[test]
    fn parallel_runs_match_sequential() {
        let mut n = e3();
        n.tasks[0].mode = TaskMode::Deterministic;
        let par = AnalysisConfig {
            parallel: 3,
            ..cfg()
        };
        for d in 1..4 {
            let dims = Dimensioning::uniform(&n, d);
            for m in Method::ALL {
                assert_eq!(
                    check_liveness(&n, &dims, m, &cfg()).unwrap(),
                    check_liveness(&n, &dims, m, &par).unwrap()
                );
            }
        }
        assert_eq!(
            dimension(&e2(), Method::BranchIlp, &cfg()).unwrap(),
            dimension(&e2(), Method::BranchIlp, &par).unwrap()
        );
    }
}
