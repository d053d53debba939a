//! Explicit-state reference executor.
//!
//! Breadth-first exploration of every configuration reachable under bounded
//! buffers. Small networks only: the space is bounded by
//! `Π|V_t| · Π(d_f + 1)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::encoder::BlockingOverride;
use crate::model::{
    ChannelId, Dimensioning, ModelError, Network, StateId, TaskId, Transition, TransitionRef,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown transition {0}")]
    UnknownTransition(TransitionRef),
    #[error("{transition} does not leave state {state}")]
    WrongSourceState {
        transition: TransitionRef,
        state: StateId,
    },
    #[error("step {step} of the trace ({transition}) is not enabled")]
    IllegalTrace { step: usize, transition: TransitionRef },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Configuration {
    pub task_state: BTreeMap<TaskId, StateId>,
    pub contents: BTreeMap<ChannelId, u64>,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let states: Vec<String> = self.task_state.iter().map(|(t, s)| format!("{t}={s}")).collect();
        let contents: Vec<String> = self.contents.iter().map(|(c, q)| format!("{c}={q}")).collect();
        write!(f, "{} | {}", states.join(" "), contents.join(" "))
    }
}

fn find_transition<'a>(network: &'a Network, r: &TransitionRef) -> Result<&'a Transition, OracleError> {
    network
        .task(r.task.as_str())
        .and_then(|t| t.transition(r.transition.as_str()))
        .ok_or_else(|| OracleError::UnknownTransition(r.clone()))
}

fn can_fire(tr: &Transition, contents: &BTreeMap<ChannelId, u64>, dims: &Dimensioning) -> bool {
    tr.consume.iter().all(|(f, q)| contents[f] >= *q)
        && tr.produce.iter().all(|(f, q)| contents[f] + q <= dims.capacity(f))
}

/// Whether `transition` may fire in `config`: enough tokens on every channel
/// it reads and enough room on every channel it writes.
pub fn enabled(
    network: &Network,
    config: &Configuration,
    transition: &TransitionRef,
    dims: &Dimensioning,
) -> Result<bool, OracleError> {
    let tr = find_transition(network, transition)?;
    let state = &config.task_state[&transition.task];
    if &tr.source != state {
        return Err(OracleError::WrongSourceState {
            transition: transition.clone(),
            state: state.clone(),
        });
    }
    Ok(can_fire(tr, &config.contents, dims))
}

/// Every task at the target of its initial transition, channels holding the
/// initial tokens.
pub fn initial_configuration(network: &Network, dims: &Dimensioning) -> Result<Configuration, OracleError> {
    dims.check(network)?;
    Ok(Configuration {
        task_state: network
            .tasks
            .iter()
            .map(|t| (t.id.clone(), t.initial_transition.target.clone()))
            .collect(),
        contents: network
            .channels
            .iter()
            .map(|c| (c.id.clone(), network.initial_tokens(&c.id)))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreConfig {
    pub max_configurations: usize,
    pub blocking: BlockingOverride,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            max_configurations: 1_000_000,
            blocking: BlockingOverride::FromModel,
        }
    }
}

/// Blockedness of one task in one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TaskBlock {
    /// No outgoing transition can fire.
    pub strong: bool,
    /// Some outgoing transition cannot fire, or there is none.
    pub weak: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockedConfiguration {
    pub configuration: Configuration,
    pub tasks: BTreeMap<TaskId, TaskBlock>,
    /// Shortest sequence of transitions reaching the configuration.
    pub trace: Vec<TransitionRef>,
}

#[derive(Debug, Clone)]
pub struct ExplorationResult {
    pub configurations_visited: usize,
    /// Configurations where every task is blocked, in visit order.
    pub blocked: Vec<BlockedConfiguration>,
    pub truncated: bool,
    /// Every visited configuration, in visit order.
    pub configurations: Vec<Configuration>,
    /// BFS tree: predecessor and the transition taken from it.
    parents: Vec<Option<(usize, TransitionRef)>>,
}

impl ExplorationResult {
    /// Shortest trace reaching visited configuration `index`.
    pub fn trace(&self, index: usize) -> Vec<TransitionRef> {
        let mut out = Vec::new();
        let mut cur = index;
        while let Some((p, t)) = &self.parents[cur] {
            out.push(t.clone());
            cur = *p;
        }
        out.reverse();
        out
    }

    pub fn has_blocked(&self) -> bool {
        !self.blocked.is_empty()
    }
}

/// Breadth-first search over reachable configurations, tasks and their
/// transitions taken in identifier order. A configuration is recorded as
/// blocked when every task is blocked in the sense its mode selects.
pub fn explore(network: &Network, dims: &Dimensioning, config: &ExploreConfig) -> Result<ExplorationResult, OracleError> {
    let start = initial_configuration(network, dims)?;
    let net = network.canonical();
    let mut index: HashMap<Configuration, usize> = HashMap::new();
    let mut result = ExplorationResult {
        configurations_visited: 0,
        blocked: Vec::new(),
        truncated: false,
        configurations: Vec::new(),
        parents: Vec::new(),
    };
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    result.configurations.push(start);
    result.parents.push(None);
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        result.configurations_visited += 1;
        let current = result.configurations[i].clone();
        let mut blocks = BTreeMap::new();
        let mut all_blocked = true;
        for task in &net.tasks {
            let state = &current.task_state[&task.id];
            let (mut any_enabled, mut any_disabled, mut any) = (false, false, false);
            for tr in task.outgoing(state) {
                any = true;
                if can_fire(tr, &current.contents, dims) {
                    any_enabled = true;
                    let mut next = current.clone();
                    for (f, q) in &tr.consume {
                        *next.contents.get_mut(f).expect("channel") -= q;
                    }
                    for (f, q) in &tr.produce {
                        *next.contents.get_mut(f).expect("channel") += q;
                    }
                    next.task_state.insert(task.id.clone(), tr.target.clone());
                    if !index.contains_key(&next) {
                        if result.configurations.len() >= config.max_configurations {
                            result.truncated = true;
                            continue;
                        }
                        let j = result.configurations.len();
                        index.insert(next.clone(), j);
                        result.configurations.push(next);
                        result
                            .parents
                            .push(Some((i, TransitionRef::new(task.id.clone(), tr.id.clone()))));
                        queue.push_back(j);
                    }
                } else {
                    any_disabled = true;
                }
            }
            let block = TaskBlock {
                strong: !any_enabled,
                weak: any_disabled || !any,
            };
            let blocked = if config.blocking.is_weak(task.mode) {
                block.weak
            } else {
                block.strong
            };
            all_blocked &= blocked;
            blocks.insert(task.id.clone(), block);
        }
        if all_blocked {
            result.blocked.push(BlockedConfiguration {
                configuration: current,
                tasks: blocks,
                trace: result.trace(i),
            });
        }
    }
    Ok(result)
}

/// Execution count of every transition along `trace`, initial transitions
/// counted once. Checks that each step leaves the task's current state and
/// finds enough tokens to read; capacities are not checked.
pub fn trace_counts(trace: &[TransitionRef], network: &Network) -> Result<BTreeMap<TransitionRef, u64>, OracleError> {
    let mut counts = BTreeMap::new();
    let mut state: BTreeMap<&TaskId, &StateId> = BTreeMap::new();
    let mut contents: BTreeMap<&ChannelId, u64> = network
        .channels
        .iter()
        .map(|c| (&c.id, network.initial_tokens(&c.id)))
        .collect();
    for task in &network.tasks {
        counts.insert(TransitionRef::initial(task.id.clone()), 1);
        for tr in &task.transitions {
            counts.insert(TransitionRef::new(task.id.clone(), tr.id.clone()), 0);
        }
        state.insert(&task.id, &task.initial_transition.target);
    }
    for (step, r) in trace.iter().enumerate() {
        let illegal = || OracleError::IllegalTrace {
            step,
            transition: r.clone(),
        };
        let tr = find_transition(network, r).map_err(|_| illegal())?;
        let task = network.task(r.task.as_str()).expect("found above");
        if state[&task.id] != &tr.source {
            return Err(illegal());
        }
        for (f, q) in &tr.consume {
            let c = contents.get_mut(f).ok_or_else(illegal)?;
            *c = c.checked_sub(*q).ok_or_else(illegal)?;
        }
        for (f, q) in &tr.produce {
            *contents.get_mut(f).ok_or_else(illegal)? += q;
        }
        state.insert(&task.id, &tr.target);
        *counts.get_mut(r).expect("listed above") += 1;
    }
    Ok(counts)
}
