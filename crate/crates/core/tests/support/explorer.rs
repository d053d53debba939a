//! Small explicit-state explorer written against the model types only, used
//! to cross-check the library's exploration.

use std::collections::HashSet;

use dpnlive::model::{Dimensioning, Network, TaskMode};

/// Task states (as transition-graph state names) and channel contents, both
/// in declaration order.
pub type State = (Vec<String>, Vec<u64>);

pub struct Explored {
    pub reachable: HashSet<State>,
    pub blocked: HashSet<State>,
}

/// `weak(mode)` selects weak blockedness for a task mode.
pub fn explore_all(network: &Network, dims: &Dimensioning, weak: impl Fn(TaskMode) -> bool) -> Explored {
    let chan = |id: &str| network.channels.iter().position(|c| c.id.as_str() == id).unwrap();
    let caps: Vec<u64> = network.channels.iter().map(|c| dims.capacity(&c.id)).collect();

    let mut contents = vec![0u64; network.channels.len()];
    let mut states = Vec::new();
    for t in &network.tasks {
        for (f, q) in &t.initial_transition.produce {
            contents[chan(f.as_str())] += q;
        }
        states.push(t.initial_transition.target.0.clone());
    }

    let mut reachable = HashSet::new();
    let mut blocked = HashSet::new();
    let mut stack = vec![(states, contents)];
    while let Some(s) = stack.pop() {
        if !reachable.insert(s.clone()) {
            continue;
        }
        let mut all_blocked = true;
        for (i, t) in network.tasks.iter().enumerate() {
            let (mut any_enabled, mut any_disabled) = (false, false);
            for tr in t.transitions.iter().filter(|tr| tr.source.0 == s.0[i]) {
                let ok = tr.consume.iter().all(|(f, q)| s.1[chan(f.as_str())] >= *q)
                    && tr
                        .produce
                        .iter()
                        .all(|(f, q)| s.1[chan(f.as_str())] + q <= caps[chan(f.as_str())]);
                if !ok {
                    any_disabled = true;
                    continue;
                }
                any_enabled = true;
                let mut next = s.clone();
                next.0[i] = tr.target.0.clone();
                for (f, q) in &tr.consume {
                    next.1[chan(f.as_str())] -= q;
                }
                for (f, q) in &tr.produce {
                    next.1[chan(f.as_str())] += q;
                }
                stack.push(next);
            }
            let task_blocked = if weak(t.mode) {
                any_disabled || !any_enabled
            } else {
                !any_enabled
            };
            all_blocked &= task_blocked;
        }
        if all_blocked {
            blocked.insert(s);
        }
    }
    Explored { reachable, blocked }
}

/// Converts a library configuration into the explorer's representation.
pub fn state_of(network: &Network, c: &dpnlive::oracle::Configuration) -> State {
    (
        network.tasks.iter().map(|t| c.task_state[&t.id].0.clone()).collect(),
        network.channels.iter().map(|f| c.contents[&f.id]).collect(),
    )
}
