//! Shared test support: the example network plant, a seeded random plant
//! generator, and brute-force oracles kept independent of the library's
//! synthesis and shortest-path code paths.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use secprot::{Alphabet, Automaton, EventClass, Plant, Policy, PolicyKind, Supervisor, Transition};

/// The network plant shipped as `examples/network.des`, built by hand so the
/// parser can be checked against it.
pub fn network_plant() -> Plant {
    let level = |l| EventClass::Protectable { level: l };
    let events = vec![
        ("sigma0".to_string(), level(0)),
        ("sigma1".to_string(), EventClass::Unprotectable),
        ("sigma2".to_string(), level(2)),
        ("sigma3".to_string(), EventClass::Unprotectable),
        ("sigma4".to_string(), level(1)),
        ("sigma5".to_string(), EventClass::Unprotectable),
        ("sigma6".to_string(), level(1)),
        ("sigma7".to_string(), EventClass::Unprotectable),
        ("sigma8".to_string(), level(2)),
        ("sigma9".to_string(), EventClass::Unprotectable),
        ("sigma10".to_string(), level(1)),
    ];
    let transitions = [
        ("q0", "sigma0", "q1"),
        ("q1", "sigma1", "q0"),
        ("q1", "sigma2", "q2"),
        ("q1", "sigma8", "q4"),
        ("q2", "sigma3", "q1"),
        ("q2", "sigma4", "q3"),
        ("q2", "sigma6", "q5"),
        ("q3", "sigma5", "q2"),
        ("q3", "sigma7", "q5"),
        ("q4", "sigma9", "q1"),
        ("q4", "sigma10", "q5"),
    ]
    .into_iter()
    .map(|(from, event, to)| Transition::new(from, event, to))
    .collect();
    Plant::new(
        (0..6).map(|i| format!("q{i}")).collect(),
        Alphabet::new(events, 3),
        transitions,
        Some("q0".into()),
        vec!["q5".into()],
    )
}

/// Parameters of a random plant family.
#[derive(Clone, Copy)]
pub struct GenConfig {
    pub states: (usize, usize),
    pub events: (usize, usize),
    pub level_count: usize,
    pub density: (f64, f64),
    pub secrets: (usize, usize),
    /// Probability of keeping the initial state when drawn as a secret.
    pub secret_initial_prob: f64,
    pub unprotectable_prob: f64,
}

/// Family used by the synthesis/verification agreement checks:
/// up to 8 states and events, 3 cost levels, density 0.3..0.8, 1-2 secrets.
pub const MAIN_FAMILY: GenConfig = GenConfig {
    states: (2, 8),
    events: (2, 8),
    level_count: 3,
    density: (0.3, 0.8),
    secrets: (1, 2),
    secret_initial_prob: 0.08,
    unprotectable_prob: 0.35,
};

/// Small family for the exhaustive supervisor oracle: few enough transitions
/// that every subset can be enumerated.
pub const SMALL_FAMILY: GenConfig = GenConfig {
    states: (2, 5),
    events: (2, 4),
    ..MAIN_FAMILY
};

pub fn random_plant(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Plant {
    let state_count = rng.gen_range(cfg.states.0..=cfg.states.1);
    let event_count = rng.gen_range(cfg.events.0..=cfg.events.1);
    let states: Vec<String> = (0..state_count).map(|i| format!("s{i}")).collect();
    let events: Vec<(String, EventClass)> = (0..event_count)
        .map(|i| {
            let class = if rng.gen_bool(cfg.unprotectable_prob) {
                EventClass::Unprotectable
            } else {
                EventClass::Protectable {
                    level: rng.gen_range(0..cfg.level_count),
                }
            };
            (format!("e{i}"), class)
        })
        .collect();

    let density = rng.gen_range(cfg.density.0..cfg.density.1);
    let mut transitions = Vec::new();
    for state in &states {
        for (event, _) in &events {
            if rng.gen_bool(density) {
                let to = &states[rng.gen_range(0..state_count)];
                transitions.push(Transition::new(state.clone(), event.clone(), to.clone()));
            }
        }
    }

    let mut candidates: Vec<usize> = (0..state_count).collect();
    candidates.shuffle(rng);
    let wanted = rng
        .gen_range(cfg.secrets.0..=cfg.secrets.1)
        .min(state_count);
    let mut secret_idx: Vec<usize> = candidates.into_iter().take(wanted).collect();
    if secret_idx.contains(&0) && !rng.gen_bool(cfg.secret_initial_prob) {
        secret_idx.retain(|&i| i != 0);
        if let Some(replacement) = (1..state_count).find(|i| !secret_idx.contains(i)) {
            secret_idx.push(replacement);
        }
    }
    secret_idx.sort_unstable();
    let secrets = secret_idx.into_iter().map(|i| states[i].clone()).collect();

    let alphabet = Alphabet::new(events, cfg.level_count);
    let plant = Plant::new(states, alphabet, transitions, Some("s0".into()), secrets);
    assert!(
        plant.validate().is_empty(),
        "generator produced an invalid plant"
    );
    plant
}

/// Random valid policy: each transition on a protectable event is picked
/// independently.
pub fn random_policy(rng: &mut ChaCha8Rng, plant: &Plant, kind: PolicyKind, prob: f64) -> Policy {
    let mut policy = Policy::new(kind);
    for t in plant.transitions() {
        if plant.alphabet().is_protectable(&t.event) && rng.gen_bool(prob) {
            policy.insert(t.from.clone(), t.event.clone());
        }
    }
    policy
}

/// Language inclusion L(a) ⊆ L(b) for deterministic automata, by product
/// traversal; every step of `a` must be matched by `b`.
pub fn language_included(a: &impl Automaton, b: &impl Automaton) -> bool {
    let (qa, qb) = match (a.initial_state(), b.initial_state()) {
        (None, _) => return true,
        (Some(_), None) => return false,
        (Some(qa), Some(qb)) => (qa, qb),
    };
    let mut visited: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut stack = vec![(qa, qb)];
    visited.insert((qa, qb));
    while let Some((x, y)) = stack.pop() {
        for event in a.defined_events(x) {
            let Some(nx) = a.step(x, event) else {
                unreachable!()
            };
            let Some(ny) = b.step(y, event) else {
                return false;
            };
            if visited.insert((nx, ny)) {
                stack.push((nx, ny));
            }
        }
    }
    true
}

/// Minimum number of counted transitions over all routes from the initial
/// state to a secret, by exhaustive enumeration of state-repetition-free
/// paths. Counted weights are nonnegative, so some optimal path is
/// repetition-free and this agrees with the shortest-path answer.
pub fn enumerated_min_count(plant: &Plant, counted: &dyn Fn(&str, &str) -> bool) -> Option<usize> {
    fn explore(
        plant: &Plant,
        counted: &dyn Fn(&str, &str) -> bool,
        state: &str,
        visited: &mut Vec<String>,
        crossings: usize,
        best: &mut Option<usize>,
    ) {
        if plant.is_secret(state) {
            *best = Some(best.map_or(crossings, |b: usize| b.min(crossings)));
            return;
        }
        for t in plant.transitions_from(state) {
            if visited.iter().any(|v| v == &t.to) {
                continue;
            }
            visited.push(t.to.clone());
            explore(
                plant,
                counted,
                &t.to,
                visited,
                crossings + usize::from(counted(state, &t.event)),
                best,
            );
            visited.pop();
        }
    }

    let q0 = plant.initial()?;
    let mut best = None;
    let mut visited = vec![q0.to_string()];
    explore(plant, counted, q0, &mut visited, 0, &mut best);
    best
}

/// True when a string of events outside `controllable` leads from the
/// initial state to a secret: the emptiness condition for the supremal
/// supervisor, decided by plain BFS.
pub fn uncontrollable_path_to_secret(plant: &Plant, controllable: &BTreeSet<String>) -> bool {
    let Some(q0) = plant.initial() else {
        return false;
    };
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut queue: VecDeque<&str> = VecDeque::new();
    seen.insert(q0);
    queue.push_back(q0);
    while let Some(q) = queue.pop_front() {
        if plant.is_secret(q) {
            return true;
        }
        for t in plant.transitions_from(q) {
            if !controllable.contains(&t.event) && seen.insert(&t.to) {
                queue.push_back(&t.to);
            }
        }
    }
    false
}

/// Exhaustive supervisor oracle: enumerate every subset of the
/// specification's transitions, root it at the initial state, restrict it to
/// its reachable part, and keep it when its language is controllable. The
/// supremal supervisor must contain each kept subautomaton's language and be
/// a kept subautomaton itself; it must be empty exactly when no rooted
/// subautomaton survives.
pub fn assert_supcon_is_subautomata_union(
    plant: &Plant,
    spec: &Plant,
    controllable: &BTreeSet<String>,
    sup: &Supervisor,
) {
    let transitions = spec.transitions();
    assert!(
        transitions.len() <= 20,
        "oracle instance too large: {} transitions",
        transitions.len()
    );

    let rooted = |included: &[&Transition]| -> Option<Plant> {
        let q0 = spec.initial()?;
        let mut reach: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        reach.insert(q0);
        queue.push_back(q0);
        while let Some(q) = queue.pop_front() {
            for t in included.iter().filter(|t| t.from == q) {
                if reach.insert(&t.to) {
                    queue.push_back(&t.to);
                }
            }
        }
        let states: Vec<String> = spec
            .states()
            .iter()
            .filter(|s| reach.contains(s.as_str()))
            .cloned()
            .collect();
        let kept: Vec<Transition> = included
            .iter()
            .filter(|t| reach.contains(t.from.as_str()))
            .map(|t| (*t).clone())
            .collect();
        Some(Plant::new(
            states,
            spec.alphabet().clone(),
            kept,
            Some(q0.to_string()),
            vec![],
        ))
    };

    let is_controllable = |candidate: &Plant| -> bool {
        candidate.states().iter().all(|x| {
            plant.transitions_from(x).all(|t| {
                controllable.contains(&t.event)
                    || candidate.target(x, &t.event) == Some(t.to.as_str())
            })
        })
    };

    let mut any_valid = false;
    for mask in 0u32..(1 << transitions.len()) {
        let included: Vec<&Transition> = transitions
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| t)
            .collect();
        let Some(candidate) = rooted(&included) else {
            break; // empty specification: no rooted subautomaton at all
        };
        if is_controllable(&candidate) {
            any_valid = true;
            assert!(
                language_included(&candidate, sup),
                "a controllable subautomaton escapes the supremal supervisor"
            );
        }
    }

    if any_valid {
        assert!(
            !sup.is_empty(),
            "supervisor empty but a controllable subautomaton exists"
        );
        // The supervisor must itself be a kept subautomaton: rooted in the
        // spec, reachable, controllable.
        for t in sup.transitions() {
            assert_eq!(spec.target(&t.from, &t.event), Some(t.to.as_str()));
        }
        for x in sup.states() {
            for t in plant.transitions_from(x) {
                if !controllable.contains(&t.event) {
                    assert_eq!(
                        sup.target(x, &t.event),
                        Some(t.to.as_str()),
                        "supervisor output is not controllable"
                    );
                }
            }
        }
    } else {
        assert!(
            sup.is_empty(),
            "supervisor nonempty but every subautomaton is uncontrollable"
        );
    }
}
