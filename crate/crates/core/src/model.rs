//! Dataflow process networks: tasks with state-transition graphs talking
//! over single-producer/single-consumer FIFO channels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(TaskId);
id_type!(ChannelId);
id_type!(StateId);
id_type!(TransitionId);

/// Name of the implicit initial state of every task, also used as the
/// identifier of its initial transition.
pub const INITIAL_STATE: &str = "init";

/// A transition qualified by its task, printed `A.a`. The initial transition
/// of `A` is `A.init`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionRef {
    pub task: TaskId,
    pub transition: TransitionId,
}

impl TransitionRef {
    pub fn new(task: impl Into<TaskId>, transition: impl Into<TransitionId>) -> Self {
        TransitionRef {
            task: task.into(),
            transition: transition.into(),
        }
    }

    pub fn initial(task: impl Into<TaskId>) -> Self {
        TransitionRef::new(task, INITIAL_STATE)
    }

    pub fn is_initial(&self) -> bool {
        self.transition.as_str() == INITIAL_STATE
    }
}

impl fmt::Display for TransitionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.task, self.transition)
    }
}

impl Serialize for TransitionRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Identifiers are nonempty strings over `[A-Za-z0-9_]`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskMode {
    /// Blocked when some outgoing transition of the current state is disabled.
    Deterministic,
    /// Blocked when every outgoing transition of the current state is disabled.
    Nondeterministic,
}

impl TaskMode {
    pub fn keyword(self) -> &'static str {
        match self {
            TaskMode::Deterministic => "deterministic",
            TaskMode::Nondeterministic => "nondeterministic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Channel {
    pub id: ChannelId,
    pub producer: TaskId,
    pub consumer: TaskId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub id: TransitionId,
    pub source: StateId,
    pub target: StateId,
    pub consume: BTreeMap<ChannelId, u64>,
    pub produce: BTreeMap<ChannelId, u64>,
}

impl Transition {
    pub fn consumed(&self, f: &ChannelId) -> u64 {
        self.consume.get(f).copied().unwrap_or(0)
    }

    pub fn produced(&self, f: &ChannelId) -> u64 {
        self.produce.get(f).copied().unwrap_or(0)
    }

    /// Total produced plus consumed quantity; must be positive.
    pub fn effect(&self) -> u128 {
        self.consume
            .values()
            .chain(self.produce.values())
            .map(|&q| q as u128)
            .sum()
    }
}

/// The unconditional first transition of a task. It consumes nothing; its
/// productions are the initial contents of the task's output channels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InitialTransition {
    pub target: StateId,
    pub produce: BTreeMap<ChannelId, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Task {
    pub id: TaskId,
    pub mode: TaskMode,
    pub initial_state: StateId,
    /// Non-initial states.
    pub states: BTreeSet<StateId>,
    pub initial_transition: InitialTransition,
    pub transitions: Vec<Transition>,
}

impl Task {
    pub fn outgoing<'a>(&'a self, state: &'a StateId) -> impl Iterator<Item = &'a Transition> + 'a {
        self.transitions.iter().filter(move |t| &t.source == state)
    }

    pub fn transition(&self, id: &str) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.id.as_str() == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Network {
    pub name: String,
    pub tasks: Vec<Task>,
    pub channels: Vec<Channel>,
}

impl Network {
    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id.as_str() == id)
    }

    pub fn channel(&self, id: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.id.as_str() == id)
    }

    /// Tokens placed on `f` by the initial transition of its producer.
    pub fn initial_tokens(&self, f: &ChannelId) -> u64 {
        self.channel(f.as_str())
            .and_then(|c| self.task(c.producer.as_str()))
            .and_then(|t| t.initial_transition.produce.get(f).copied())
            .unwrap_or(0)
    }

    pub fn max_initial_tokens(&self) -> u64 {
        self.channels
            .iter()
            .map(|c| self.initial_tokens(&c.id))
            .max()
            .unwrap_or(0)
    }

    /// Tasks, channels and transitions sorted by identifier.
    pub fn canonical(&self) -> Network {
        let mut n = self.clone();
        n.tasks.sort_by(|a, b| a.id.cmp(&b.id));
        n.channels.sort_by(|a, b| a.id.cmp(&b.id));
        for t in &mut n.tasks {
            t.transitions.sort_by(|a, b| a.id.cmp(&b.id));
        }
        n
    }

    pub fn structurally_equal(&self, other: &Network) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Buffer capacity per channel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Dimensioning {
    pub capacities: BTreeMap<ChannelId, u64>,
}

impl Dimensioning {
    pub fn uniform(network: &Network, capacity: u64) -> Self {
        Dimensioning {
            capacities: network
                .channels
                .iter()
                .map(|c| (c.id.clone(), capacity))
                .collect(),
        }
    }

    pub fn get(&self, f: &ChannelId) -> Option<u64> {
        self.capacities.get(f).copied()
    }

    pub fn capacity(&self, f: &ChannelId) -> u64 {
        self.capacities[f]
    }

    /// Capacities cover exactly the channels of `network` and each one can
    /// hold the channel's initial tokens.
    pub fn check(&self, network: &Network) -> Result<(), ModelError> {
        for f in self.capacities.keys() {
            if network.channel(f.as_str()).is_none() {
                return Err(ModelError::UnknownChannel { channel: f.clone() });
            }
        }
        for c in &network.channels {
            let Some(d) = self.get(&c.id) else {
                return Err(ModelError::MissingCapacity {
                    channel: c.id.clone(),
                });
            };
            let initial = network.initial_tokens(&c.id);
            if d < initial {
                return Err(ModelError::InvalidDimensioning {
                    channel: c.id.clone(),
                    capacity: d,
                    initial,
                });
            }
        }
        Ok(())
    }

    /// Smallest dimensioning able to hold the initial tokens.
    pub fn minimal(network: &Network) -> Self {
        Dimensioning {
            capacities: network
                .channels
                .iter()
                .map(|c| (c.id.clone(), network.initial_tokens(&c.id)))
                .collect(),
        }
    }
}

impl fmt::Display for Dimensioning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .capacities
            .iter()
            .map(|(c, d)| format!("{c}={d}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("capacity {capacity} of channel '{channel}' is below its {initial} initial tokens")]
    InvalidDimensioning {
        channel: ChannelId,
        capacity: u64,
        initial: u64,
    },
    #[error("no capacity given for channel '{channel}'")]
    MissingCapacity { channel: ChannelId },
    #[error("capacity given for unknown channel '{channel}'")]
    UnknownChannel { channel: ChannelId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    EmptyNetwork,
    InvalidIdentifier,
    DuplicateDefinition,
    UnknownTask,
    ChannelSelfLoop,
    UnknownChannel,
    RoleViolation,
    ZeroQuantity,
    Ineffective,
    UnknownState,
    InitialStateEntered,
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    /// Offending entity: `task`, `channel`, or `task.transition`.
    pub entity: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, rule: Rule, entity: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            entity: entity.into(),
            message: message.into(),
        });
    }
}

/// Checks every structural assumption and lists each violation.
pub fn validate(network: &Network) -> ValidationReport {
    let mut report = ValidationReport::default();
    if network.tasks.is_empty() {
        report.push(Rule::EmptyNetwork, &network.name, "network has no tasks");
    }

    let mut seen = BTreeSet::new();
    for t in &network.tasks {
        if !is_identifier(t.id.as_str()) {
            report.push(Rule::InvalidIdentifier, t.id.as_str(), "invalid task identifier");
        }
        if !seen.insert(t.id.as_str()) {
            report.push(Rule::DuplicateDefinition, t.id.as_str(), "task defined twice");
        }
    }
    let mut seen = BTreeSet::new();
    for c in &network.channels {
        if !is_identifier(c.id.as_str()) {
            report.push(Rule::InvalidIdentifier, c.id.as_str(), "invalid channel identifier");
        }
        if !seen.insert(c.id.as_str()) {
            report.push(Rule::DuplicateDefinition, c.id.as_str(), "channel defined twice");
        }
        for end in [&c.producer, &c.consumer] {
            if network.task(end.as_str()).is_none() {
                report.push(
                    Rule::UnknownTask,
                    c.id.as_str(),
                    format!("endpoint '{end}' is not a task"),
                );
            }
        }
        if c.producer == c.consumer {
            report.push(
                Rule::ChannelSelfLoop,
                c.id.as_str(),
                "producer and consumer must differ",
            );
        }
    }

    for t in &network.tasks {
        validate_task(network, t, &mut report);
    }

    if !network.tasks.is_empty() && !is_connected(network) {
        report.push(
            Rule::Disconnected,
            &network.name,
            "network graph is not connected",
        );
    }
    report
}

fn validate_task(network: &Network, t: &Task, report: &mut ValidationReport) {
    let tid = t.id.as_str();
    let role_check = |report: &mut ValidationReport,
                      entity: &str,
                      map: &BTreeMap<ChannelId, u64>,
                      producing: bool| {
        for (f, q) in map {
            match network.channel(f.as_str()) {
                None => report.push(
                    Rule::UnknownChannel,
                    entity,
                    format!("channel '{f}' is not declared"),
                ),
                Some(c) => {
                    let owner = if producing { &c.producer } else { &c.consumer };
                    if owner != &t.id {
                        let role = if producing { "produce on" } else { "consume from" };
                        report.push(
                            Rule::RoleViolation,
                            entity,
                            format!("task '{tid}' may not {role} channel '{f}'"),
                        );
                    }
                }
            }
            if *q == 0 {
                report.push(
                    Rule::ZeroQuantity,
                    entity,
                    format!("quantity on channel '{f}' must be positive"),
                );
            }
        }
    };

    if t.states.contains(&t.initial_state) {
        report.push(
            Rule::InitialStateEntered,
            tid,
            "initial state listed among ordinary states",
        );
    }
    let init_entity = format!("{tid}.{INITIAL_STATE}");
    if !t.states.contains(&t.initial_transition.target) {
        report.push(
            Rule::UnknownState,
            &init_entity,
            format!("target state '{}' is not a state of the task", t.initial_transition.target),
        );
    }
    role_check(report, &init_entity, &t.initial_transition.produce, true);

    let mut seen = BTreeSet::new();
    for tr in &t.transitions {
        let entity = format!("{tid}.{}", tr.id);
        if !is_identifier(tr.id.as_str()) {
            report.push(Rule::InvalidIdentifier, &entity, "invalid transition identifier");
        } else if tr.id.as_str() == INITIAL_STATE {
            report.push(
                Rule::InvalidIdentifier,
                &entity,
                "transition identifier is reserved for the initial transition",
            );
        }
        if !seen.insert(tr.id.as_str()) {
            report.push(Rule::DuplicateDefinition, &entity, "transition defined twice");
        }
        if tr.target == t.initial_state {
            report.push(
                Rule::InitialStateEntered,
                &entity,
                "the initial state has no incoming transitions",
            );
        } else if !t.states.contains(&tr.target) {
            report.push(
                Rule::UnknownState,
                &entity,
                format!("target state '{}' is not a state of the task", tr.target),
            );
        }
        if !t.states.contains(&tr.source) {
            report.push(
                Rule::UnknownState,
                &entity,
                format!("source state '{}' is not a state of the task", tr.source),
            );
        }
        role_check(report, &entity, &tr.consume, false);
        role_check(report, &entity, &tr.produce, true);
        if tr.effect() == 0 {
            report.push(
                Rule::Ineffective,
                &entity,
                "transition neither produces nor consumes",
            );
        }
    }
    for s in &t.states {
        if !is_identifier(s.as_str()) {
            report.push(
                Rule::InvalidIdentifier,
                format!("{tid}.{s}"),
                "invalid state identifier",
            );
        }
    }
}

/// Weak connectivity of the task graph with channels as undirected edges.
fn is_connected(network: &Network) -> bool {
    let index: BTreeMap<&str, usize> = network
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| (t.id.as_str(), i))
        .collect();
    let mut adj = vec![Vec::new(); network.tasks.len()];
    for c in &network.channels {
        if let (Some(&a), Some(&b)) = (
            index.get(c.producer.as_str()),
            index.get(c.consumer.as_str()),
        ) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; network.tasks.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Name of the reverse channel paired with `f` by [`mirror_transform`].
pub fn mirror_name(network: &Network, f: &ChannelId) -> ChannelId {
    let mut name = format!("{f}_mirror");
    while network.channel(&name).is_some() {
        name.push('_');
    }
    ChannelId(name)
}

/// Replaces capacity bounds by blocking reads: every channel `f` gets a
/// reverse channel `f'` holding `d_f` minus the initial tokens of `f`; each
/// write of `q` on `f` also reads `q` from `f'` and each read of `q` on `f`
/// also writes `q` to `f'`.
pub fn mirror_transform(network: &Network, dims: &Dimensioning) -> Result<Network, ModelError> {
    dims.check(network)?;
    let mut out = network.clone();
    let pairs: Vec<(ChannelId, ChannelId)> = network
        .channels
        .iter()
        .map(|c| (c.id.clone(), mirror_name(network, &c.id)))
        .collect();
    for (c, (_, m)) in network.channels.iter().zip(&pairs) {
        out.channels.push(Channel {
            id: m.clone(),
            producer: c.consumer.clone(),
            consumer: c.producer.clone(),
        });
    }
    for task in &mut out.tasks {
        for (f, m) in &pairs {
            let ch = network.channel(f.as_str()).expect("channel exists");
            if ch.consumer == task.id {
                let room = dims.capacity(f) - network.initial_tokens(f);
                if room > 0 {
                    task.initial_transition.produce.insert(m.clone(), room);
                }
            }
            for tr in &mut task.transitions {
                if let Some(&q) = tr.produce.get(f) {
                    tr.consume.insert(m.clone(), q);
                }
                if let Some(&q) = tr.consume.get(f) {
                    tr.produce.insert(m.clone(), q);
                }
            }
        }
    }
    Ok(out)
}

/// Capacities for running a mirrored network: each original channel and its
/// mirror get `d_f`, which their combined content can never exceed.
pub fn mirror_dimensioning(network: &Network, dims: &Dimensioning) -> Dimensioning {
    let mut out = dims.clone();
    for c in &network.channels {
        out.capacities
            .insert(mirror_name(network, &c.id), dims.capacity(&c.id));
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn qty(pairs: &[(&str, u64)]) -> BTreeMap<ChannelId, u64> {
        pairs.iter().map(|(c, q)| (ChannelId::from(*c), *q)).collect()
    }

    pub fn loop_task(
        id: &str,
        state: &str,
        tr: &str,
        consume: &[(&str, u64)],
        produce: &[(&str, u64)],
        init: &[(&str, u64)],
    ) -> Task {
        Task {
            id: id.into(),
            mode: TaskMode::Nondeterministic,
            initial_state: INITIAL_STATE.into(),
            states: [StateId::from(state)].into_iter().collect(),
            initial_transition: InitialTransition {
                target: state.into(),
                produce: qty(init),
            },
            transitions: vec![Transition {
                id: tr.into(),
                source: state.into(),
                target: state.into(),
                consume: qty(consume),
                produce: qty(produce),
            }],
        }
    }

    pub fn channel(id: &str, p: &str, c: &str) -> Channel {
        Channel {
            id: id.into(),
            producer: p.into(),
            consumer: c.into(),
        }
    }

    pub fn e1() -> Network {
        Network {
            name: "e1".into(),
            tasks: vec![
                loop_task("A", "s0", "a", &[], &[("f", 1)], &[]),
                loop_task("B", "t0", "b", &[("f", 1)], &[], &[]),
            ],
            channels: vec![channel("f", "A", "B")],
        }
    }

    pub fn e2() -> Network {
        Network {
            name: "e2".into(),
            tasks: vec![
                loop_task("A", "s0", "a", &[("f2", 1)], &[("f1", 1)], &[]),
                loop_task("B", "t0", "b", &[("f1", 1)], &[("f2", 1)], &[]),
            ],
            channels: vec![channel("f1", "A", "B"), channel("f2", "B", "A")],
        }
    }

    pub fn e3() -> Network {
        let mut n = e2();
        n.name = "e3".into();
        n.tasks[1].initial_transition.produce = qty(&[("f2", 1)]);
        n
    }
}
