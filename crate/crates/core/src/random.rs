//! Seeded generator of small valid networks for sweeps and property tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    Channel, ChannelId, InitialTransition, Network, StateId, Task, TaskId, TaskMode, Transition,
    INITIAL_STATE,
};

/// Size limits of generated networks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    /// At least two tasks are generated.
    pub max_tasks: usize,
    pub max_states: usize,
    pub max_transitions_per_state: usize,
    pub max_rate: u64,
    pub max_initial_tokens: u64,
    /// Chance of a channel beyond the spanning tree, per task pair.
    pub extra_channel_probability: f64,
    pub deterministic_probability: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_tasks: 3,
            max_states: 3,
            max_transitions_per_state: 2,
            max_rate: 2,
            max_initial_tokens: 1,
            extra_channel_probability: 0.3,
            deterministic_probability: 0.3,
        }
    }
}

/// Network number `index` of the stream seeded by `seed`.
pub fn seeded_network(seed: u64, index: u64, config: &GeneratorConfig) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ index);
    random_network(&mut rng, config, format!("rand{index}"))
}

/// Draws a network that passes [`crate::model::validate`]: channels connect
/// distinct tasks along a spanning tree plus optional extras, and every
/// transition moves at least one token.
pub fn random_network(rng: &mut impl Rng, config: &GeneratorConfig, name: String) -> Network {
    let task_count = rng.gen_range(2..=config.max_tasks.max(2));
    let task_ids: Vec<TaskId> = (0..task_count)
        .map(|i| TaskId(((b'A' + i as u8) as char).to_string()))
        .collect();

    let mut channels = Vec::new();
    let add_channel = |rng: &mut dyn rand::RngCore, a: usize, b: usize, channels: &mut Vec<Channel>| {
        let (p, c) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        channels.push(Channel {
            id: ChannelId(format!("f{}", channels.len() + 1)),
            producer: task_ids[p].clone(),
            consumer: task_ids[c].clone(),
        });
    };
    for i in 1..task_count {
        let j = rng.gen_range(0..i);
        add_channel(rng, i, j, &mut channels);
    }
    for i in 0..task_count {
        for j in i + 1..task_count {
            if rng.gen_bool(config.extra_channel_probability) {
                add_channel(rng, i, j, &mut channels);
            }
        }
    }

    let tasks = task_ids
        .iter()
        .map(|id| random_task(rng, config, id, &channels))
        .collect();
    Network {
        name,
        tasks,
        channels,
    }
}

fn random_task(rng: &mut impl Rng, config: &GeneratorConfig, id: &TaskId, channels: &[Channel]) -> Task {
    let produces: Vec<&ChannelId> = channels.iter().filter(|c| &c.producer == id).map(|c| &c.id).collect();
    let consumes: Vec<&ChannelId> = channels.iter().filter(|c| &c.consumer == id).map(|c| &c.id).collect();
    let state_count = rng.gen_range(1..=config.max_states.max(1));
    let states: Vec<StateId> = (0..state_count).map(|i| StateId(format!("s{i}"))).collect();

    let mut transitions = Vec::new();
    for source in &states {
        let count = rng.gen_range(1..=config.max_transitions_per_state.max(1));
        for _ in 0..count {
            let mut consume = BTreeMap::new();
            let mut produce = BTreeMap::new();
            for f in &consumes {
                if rng.gen_bool(0.5) {
                    consume.insert((*f).clone(), rng.gen_range(1..=config.max_rate));
                }
            }
            for f in &produces {
                if rng.gen_bool(0.5) {
                    produce.insert((*f).clone(), rng.gen_range(1..=config.max_rate));
                }
            }
            if consume.is_empty() && produce.is_empty() {
                let all: Vec<(&ChannelId, bool)> = consumes
                    .iter()
                    .map(|f| (*f, false))
                    .chain(produces.iter().map(|f| (*f, true)))
                    .collect();
                let (f, producing) = *all.choose(rng).expect("every task has a channel");
                let side = if producing { &mut produce } else { &mut consume };
                side.insert(f.clone(), rng.gen_range(1..=config.max_rate));
            }
            transitions.push(Transition {
                id: format!("t{}", transitions.len()).into(),
                source: source.clone(),
                target: states.choose(rng).expect("nonempty").clone(),
                consume,
                produce,
            });
        }
    }

    let mut initial = BTreeMap::new();
    if config.max_initial_tokens > 0 {
        for f in &produces {
            if rng.gen_bool(0.3) {
                initial.insert((*f).clone(), rng.gen_range(1..=config.max_initial_tokens));
            }
        }
    }
    let mode = if rng.gen_bool(config.deterministic_probability) {
        TaskMode::Deterministic
    } else {
        TaskMode::Nondeterministic
    };
    Task {
        id: id.clone(),
        mode,
        initial_state: INITIAL_STATE.into(),
        states: states.iter().cloned().collect::<BTreeSet<_>>(),
        initial_transition: InitialTransition {
            target: states[0].clone(),
            produce: initial,
        },
        transitions,
    }
}
