//! Compilation of a network into linear systems over transition counts.
//!
//! A pseudo-state assigns an execution count `n_τ` to every transition,
//! initial transitions included. From the counts:
//!
//! - `γ_v` = executions entering `v` minus executions leaving `v`, which is 1
//!   for the current state of a task and 0 elsewhere;
//! - `qp_f` / `qc_f` = total quantity produced on / consumed from `f`, where
//!   `qp_f` also counts the initial tokens written by the initial transition.
//!
//! Blockedness of a task is a CNF over disjuncts. Two encodings turn the
//! disjunctions into linear programs: a big-M system with indicator
//! variables, and an exact expansion into one pure system per disjunct
//! choice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{
    ChannelId, Dimensioning, ModelError, Network, StateId, TaskId, TaskMode, TransitionRef,
};
use crate::simplex::{Constraint, LinExpr, LinearSystem, Objective, Rational, Relation, VarId, VarKind};

/// Name of the uniform capacity variable under [`Capacities::SymbolicZ`].
pub const Z_NAME: &str = "z";

/// Expanding more branches than this is refused.
pub const BRANCH_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacities {
    Concrete(Dimensioning),
    /// Every channel has capacity `z`, a variable of the system.
    SymbolicZ,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the big-M encoding needs concrete capacities")]
    SymbolicZNotSupported,
    #[error("blockedness clause of {owner} has no disjunct")]
    ClauseEmpty { owner: ClauseOwner },
    #[error("{count} branches exceed the expansion limit")]
    TooManyBranches { count: u128 },
}

/// The admissible pseudo-states of a network.
#[derive(Debug, Clone)]
pub struct StateSystem {
    pub system: LinearSystem,
    pub capacities: Capacities,
    pub counts: BTreeMap<TransitionRef, VarId>,
    pub z: Option<VarId>,
    pub gamma: BTreeMap<(TaskId, StateId), LinExpr>,
    pub produced: BTreeMap<ChannelId, LinExpr>,
    pub consumed: BTreeMap<ChannelId, LinExpr>,
}

impl StateSystem {
    pub fn count(&self, transition: &TransitionRef) -> VarId {
        self.counts[transition]
    }

    /// `qp_f - qc_f`, the content of `f`.
    pub fn content(&self, f: &ChannelId) -> LinExpr {
        self.produced[f].minus(&self.consumed[f])
    }

    /// Point of the system for the given counts (missing ones are 0) and,
    /// under a symbolic capacity, the value of `z`.
    pub fn assignment(&self, counts: &BTreeMap<TransitionRef, u64>, z: Option<u64>) -> Vec<Rational> {
        let mut point = vec![Rational::zero(); self.system.num_vars()];
        for (t, v) in &self.counts {
            point[v.0] = Rational::from(counts.get(t).copied().unwrap_or(0));
        }
        if let (Some(v), Some(z)) = (self.z, z) {
            point[v.0] = Rational::from(z);
        }
        point
    }

    /// Capacity of `f` as an expression (a constant or `z`).
    fn capacity(&self, f: &ChannelId) -> LinExpr {
        match (&self.capacities, self.z) {
            (Capacities::Concrete(d), _) => LinExpr::constant(d.capacity(f)),
            (Capacities::SymbolicZ, Some(z)) => LinExpr::var(z),
            (Capacities::SymbolicZ, None) => unreachable!("symbolic system without z"),
        }
    }

    /// The inequality a disjunct stands for.
    pub fn disjunct_constraint(&self, d: &Disjunct) -> Constraint {
        let tag = format!("clause {d}");
        match d {
            Disjunct::NotInState { task, state } => self.gamma[&(task.clone(), state.clone())]
                .clone()
                .into_constraint(Relation::Le, 0, tag),
            // qp_f - qc_f <= qc_τf - 1
            Disjunct::ReadBlocked {
                channel, quantity, ..
            } => self
                .content(channel)
                .into_constraint(Relation::Le, *quantity as i64 - 1, tag),
            // qc_f - qp_f + d_f <= qp_τf - 1
            Disjunct::WriteBlocked {
                channel, quantity, ..
            } => {
                let mut e = self.consumed[channel].minus(&self.produced[channel]);
                e.add_expr(&self.capacity(channel), &Rational::one());
                e.into_constraint(Relation::Le, Rational::from(*quantity) - Rational::one(), tag)
            }
        }
    }
}

/// Builds initialization, conservation, unicity, consistency and capacity
/// constraints. Every variable is a nonnegative integer.
pub fn build_base_system(network: &Network, capacities: Capacities) -> Result<StateSystem, EncodeError> {
    if let Capacities::Concrete(d) = &capacities {
        d.check(network)?;
    }
    let mut system = LinearSystem::new();
    let mut counts = BTreeMap::new();
    for task in &network.tasks {
        let r = TransitionRef::initial(task.id.clone());
        let v = system.add_variable(format!("n[{r}]"), VarKind::TransitionCount, None);
        counts.insert(r, v);
        for tr in &task.transitions {
            let r = TransitionRef::new(task.id.clone(), tr.id.clone());
            let v = system.add_variable(format!("n[{r}]"), VarKind::TransitionCount, None);
            counts.insert(r, v);
        }
    }
    let z = matches!(capacities, Capacities::SymbolicZ)
        .then(|| system.add_variable(Z_NAME, VarKind::CapacityZ, None));

    let mut gamma = BTreeMap::new();
    let mut produced: BTreeMap<ChannelId, LinExpr> = network
        .channels
        .iter()
        .map(|c| (c.id.clone(), LinExpr::new()))
        .collect();
    let mut consumed = produced.clone();

    for task in &network.tasks {
        let init = counts[&TransitionRef::initial(task.id.clone())];
        system.add_constraint(LinExpr::var(init).into_constraint(
            Relation::Eq,
            1,
            format!("init[{}]", task.id),
        ));
        for (f, q) in &task.initial_transition.produce {
            produced.get_mut(f).expect("declared channel").add_term(init, *q);
        }
        for s in &task.states {
            let mut g = LinExpr::new();
            if task.initial_transition.target == *s {
                g.add_term(init, 1);
            }
            for tr in &task.transitions {
                let v = counts[&TransitionRef::new(task.id.clone(), tr.id.clone())];
                if tr.target == *s {
                    g.add_term(v, 1);
                }
                if tr.source == *s {
                    g.add_term(v, -1);
                }
            }
            gamma.insert((task.id.clone(), s.clone()), g);
        }
        for tr in &task.transitions {
            let v = counts[&TransitionRef::new(task.id.clone(), tr.id.clone())];
            for (f, q) in &tr.produce {
                produced.get_mut(f).expect("declared channel").add_term(v, *q);
            }
            for (f, q) in &tr.consume {
                consumed.get_mut(f).expect("declared channel").add_term(v, *q);
            }
        }
    }

    for task in &network.tasks {
        let mut total = LinExpr::new();
        for s in &task.states {
            let g = &gamma[&(task.id.clone(), s.clone())];
            let tag = format!("conservation[{}.{}]", task.id, s);
            system.add_constraint(g.clone().into_constraint(Relation::Ge, 0, tag.clone()));
            system.add_constraint(g.clone().into_constraint(Relation::Le, 1, tag));
            total.add_expr(g, &Rational::one());
        }
        system.add_constraint(total.into_constraint(Relation::Eq, 1, format!("unicity[{}]", task.id)));
    }

    let mut base = StateSystem {
        system,
        capacities,
        counts,
        z,
        gamma,
        produced,
        consumed,
    };
    for c in &network.channels {
        let content = base.content(&c.id);
        base.system.add_constraint(content.clone().into_constraint(
            Relation::Ge,
            0,
            format!("consistency[{}]", c.id),
        ));
        let row = content.minus(&base.capacity(&c.id));
        base.system
            .add_constraint(row.into_constraint(Relation::Le, 0, format!("capacity[{}]", c.id)));
    }
    if let Some(z) = z {
        for c in &network.channels {
            base.system.add_constraint(LinExpr::var(z).into_constraint(
                Relation::Ge,
                network.initial_tokens(&c.id),
                format!("validity[{}]", c.id),
            ));
        }
    }
    Ok(base)
}

/// Which blockedness notion applies to each task.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum BlockingOverride {
    /// Deterministic tasks weak, nondeterministic tasks strong.
    #[default]
    FromModel,
    AllStrong,
    AllWeak,
}

impl BlockingOverride {
    /// True when `mode` is read as weak blockedness.
    pub fn is_weak(self, mode: TaskMode) -> bool {
        match self {
            BlockingOverride::FromModel => mode == TaskMode::Deterministic,
            BlockingOverride::AllStrong => false,
            BlockingOverride::AllWeak => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Disjunct {
    /// `γ_v <= 0`.
    NotInState { task: TaskId, state: StateId },
    /// Fewer than `quantity` tokens on `channel`.
    ReadBlocked {
        transition: TransitionRef,
        channel: ChannelId,
        quantity: u64,
    },
    /// Fewer than `quantity` free slots on `channel`.
    WriteBlocked {
        transition: TransitionRef,
        channel: ChannelId,
        quantity: u64,
    },
}

impl fmt::Display for Disjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disjunct::NotInState { task, state } => write!(f, "not-in-state({task}.{state})"),
            Disjunct::ReadBlocked {
                transition,
                channel,
                ..
            } => write!(f, "read-blocked({transition},{channel})"),
            Disjunct::WriteBlocked {
                transition,
                channel,
                ..
            } => write!(f, "write-blocked({transition},{channel})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseOwner {
    /// Strong blockedness: the transition cannot fire.
    Transition(TransitionRef),
    /// Weak blockedness: some transition leaving the state cannot fire.
    State { task: TaskId, state: StateId },
}

impl fmt::Display for ClauseOwner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseOwner::Transition(t) => write!(f, "transition {t}"),
            ClauseOwner::State { task, state } => write!(f, "state {task}.{state}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub owner: ClauseOwner,
    pub disjuncts: Vec<Disjunct>,
}

/// Conjunction of the blockedness clauses of every task: a pseudo-state
/// satisfying all of them has every task blocked at once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockClauseSet {
    pub clauses: Vec<Clause>,
}

impl BlockClauseSet {
    pub fn empty_clause(&self) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.disjuncts.is_empty())
    }

    /// Number of raw disjunct selections, saturating.
    pub fn product_size(&self) -> u128 {
        self.clauses
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.disjuncts.len() as u128))
    }
}

fn blocking_disjuncts(task: &TaskId, tr: &crate::model::Transition) -> Vec<Disjunct> {
    let r = TransitionRef::new(task.clone(), tr.id.clone());
    let reads = tr.consume.iter().filter(|(_, q)| **q > 0).map(|(f, q)| Disjunct::ReadBlocked {
        transition: r.clone(),
        channel: f.clone(),
        quantity: *q,
    });
    let writes = tr.produce.iter().filter(|(_, q)| **q > 0).map(|(f, q)| Disjunct::WriteBlocked {
        transition: r.clone(),
        channel: f.clone(),
        quantity: *q,
    });
    reads.chain(writes).collect()
}

/// One clause per transition for strongly blocked tasks, one per state with
/// outgoing transitions for weakly blocked tasks. A state without outgoing
/// transitions yields no weak clause: a task resting there is blocked.
pub fn build_block_clauses(network: &Network, blocking: BlockingOverride) -> BlockClauseSet {
    let mut clauses = Vec::new();
    for task in &network.tasks {
        if blocking.is_weak(task.mode) {
            for s in &task.states {
                let mut out = task.outgoing(s).peekable();
                if out.peek().is_none() {
                    continue;
                }
                let mut disjuncts = vec![Disjunct::NotInState {
                    task: task.id.clone(),
                    state: s.clone(),
                }];
                for tr in out {
                    disjuncts.extend(blocking_disjuncts(&task.id, tr));
                }
                clauses.push(Clause {
                    owner: ClauseOwner::State {
                        task: task.id.clone(),
                        state: s.clone(),
                    },
                    disjuncts,
                });
            }
        } else {
            for tr in &task.transitions {
                let mut disjuncts = vec![Disjunct::NotInState {
                    task: task.id.clone(),
                    state: tr.source.clone(),
                }];
                disjuncts.extend(blocking_disjuncts(&task.id, tr));
                clauses.push(Clause {
                    owner: ClauseOwner::Transition(TransitionRef::new(
                        task.id.clone(),
                        tr.id.clone(),
                    )),
                    disjuncts,
                });
            }
        }
    }
    BlockClauseSet { clauses }
}

/// Single system with one 0/1 indicator per disjunct.
#[derive(Debug, Clone)]
pub struct BigMProblem {
    pub system: LinearSystem,
    /// `(clause, disjunct, indicator)`.
    pub indicators: Vec<(usize, usize, VarId)>,
}

/// Relaxation constant for a disjunct: its row with `+M` on the right-hand
/// side holds at every pseudo-state. Never negative.
pub fn big_m(d: &Disjunct, dims: &Dimensioning) -> u64 {
    match d {
        Disjunct::NotInState { .. } => 1,
        Disjunct::ReadBlocked {
            channel, quantity, ..
        } => (dims.capacity(channel) + 1).saturating_sub(*quantity),
        Disjunct::WriteBlocked {
            channel, quantity, ..
        } => (dims.capacity(channel) + 1).saturating_sub(*quantity),
    }
}

/// Each clause becomes `Σ y >= 1` and each disjunct row `a·x <= b` becomes
/// `a·x + M·y <= b + M`.
pub fn encode_big_m(base: &StateSystem, clauses: &BlockClauseSet) -> Result<BigMProblem, EncodeError> {
    let Capacities::Concrete(dims) = &base.capacities else {
        return Err(EncodeError::SymbolicZNotSupported);
    };
    if let Some(c) = clauses.empty_clause() {
        return Err(EncodeError::ClauseEmpty {
            owner: c.owner.clone(),
        });
    }
    let mut system = base.system.clone();
    let mut indicators = Vec::new();
    for (ci, clause) in clauses.clauses.iter().enumerate() {
        let mut cover = LinExpr::new();
        for (di, d) in clause.disjuncts.iter().enumerate() {
            let y = system.add_variable(format!("y[{ci}.{di}]"), VarKind::Indicator, Some(1));
            indicators.push((ci, di, y));
            cover.add_term(y, 1);
            let m = Rational::from(big_m(d, dims));
            let mut row = base.disjunct_constraint(d);
            row.rhs += &m;
            if !m.is_zero() {
                row.coeffs.insert(y, m);
            }
            system.add_constraint(row);
        }
        system.add_constraint(cover.into_constraint(Relation::Ge, 1, format!("cover[{}]", clause.owner)));
    }
    Ok(BigMProblem { system, indicators })
}

/// One pure system per disjunct selection.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Chosen disjunct index per clause.
    pub choice: Vec<usize>,
    pub disjuncts: Vec<Disjunct>,
    pub system: LinearSystem,
}

#[derive(Debug, Clone)]
pub struct BranchSet {
    pub branches: Vec<Branch>,
    /// `maximize z` for dimensioning problems.
    pub objective: Option<Objective>,
    /// Selections before deduplication.
    pub raw_count: u128,
}

type RowKey = (Vec<(VarId, Rational)>, &'static str, Rational);

pub(crate) fn row_key(c: &Constraint) -> RowKey {
    let (coeffs, rel, rhs) = c.key();
    (coeffs, rel.symbol(), rhs)
}

/// Cartesian product of the clauses' disjuncts, in lexicographic order of
/// the choice vectors; selections yielding the same set of rows are kept
/// once.
pub fn enumerate_branches(base: &StateSystem, clauses: &BlockClauseSet) -> Result<BranchSet, EncodeError> {
    if let Some(c) = clauses.empty_clause() {
        return Err(EncodeError::ClauseEmpty {
            owner: c.owner.clone(),
        });
    }
    let raw_count = clauses.product_size();
    if raw_count > BRANCH_LIMIT {
        return Err(EncodeError::TooManyBranches { count: raw_count });
    }
    let rows: Vec<Vec<Constraint>> = clauses
        .clauses
        .iter()
        .map(|c| c.disjuncts.iter().map(|d| base.disjunct_constraint(d)).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut branches = Vec::new();
    let mut choice = vec![0usize; clauses.clauses.len()];
    loop {
        let key: BTreeSet<RowKey> = choice
            .iter()
            .enumerate()
            .map(|(ci, &di)| row_key(&rows[ci][di]))
            .collect();
        if seen.insert(key) {
            let mut system = base.system.clone();
            let mut added = BTreeSet::new();
            for (ci, &di) in choice.iter().enumerate() {
                if added.insert(row_key(&rows[ci][di])) {
                    system.add_constraint(rows[ci][di].clone());
                }
            }
            branches.push(Branch {
                disjuncts: choice
                    .iter()
                    .enumerate()
                    .map(|(ci, &di)| clauses.clauses[ci].disjuncts[di].clone())
                    .collect(),
                choice: choice.clone(),
                system,
            });
        }
        // odometer, last clause fastest
        let mut k = choice.len();
        loop {
            if k == 0 {
                let objective = base.z.map(|z| Objective::maximize([(z, Rational::one())]));
                return Ok(BranchSet {
                    branches,
                    objective,
                    raw_count,
                });
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < clauses.clauses[k].disjuncts.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// The dimensioning program: branches over the symbolic-capacity system
/// with objective `maximize z`.
pub fn build_dimensioning_branches(
    network: &Network,
    blocking: BlockingOverride,
) -> Result<BranchSet, EncodeError> {
    let base = build_base_system(network, Capacities::SymbolicZ)?;
    let clauses = build_block_clauses(network, blocking);
    enumerate_branches(&base, &clauses)
}
