//! Independent verification of protection policies by path counting.
//!
//! Nothing here touches the supervisory-control machinery: secure
//! reachability is decided by 0/1-weight shortest paths, where a transition
//! weighs 1 when it is protected (or protectable, for solvability questions)
//! and 0 otherwise. The minimum weight over all paths from the initial state
//! to a secret is the number of protections an intruder cannot avoid.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::model::{Plant, Policy, PolicyKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("cost level {level} is out of range 0..{level_count}")]
    LevelOutOfRange { level: usize, level_count: usize },
    #[error("expected a protection policy, got a {0} policy")]
    NotAProtectionPolicy(PolicyKind),
    #[error("policy does not fit the plant: {0}")]
    InvalidPolicy(String),
}

/// Minimum number of counted transitions over all paths from the initial
/// state to a secret; `Infinite` when no path reaches any secret.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtectionCount {
    Finite(usize),
    Infinite,
}

impl ProtectionCount {
    pub fn at_least(self, m: usize) -> bool {
        match self {
            ProtectionCount::Infinite => true,
            ProtectionCount::Finite(c) => c >= m,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            ProtectionCount::Finite(c) => Some(c),
            ProtectionCount::Infinite => None,
        }
    }
}

/// A path from the initial state to a secret that crosses fewer protected
/// transitions than required. `states` has one more entry than `events`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub states: Vec<String>,
    pub events: Vec<String>,
    pub protected_count: usize,
}

/// Outcome of [`verify_policy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Minimum, over all paths from the initial state to any secret, of the
/// number of transitions whose (source, event) satisfies `counted`.
///
/// Computed as a 0/1-weight shortest path; since weights are nonnegative,
/// revisiting states or secrets never lowers the count, so first arrival at
/// a secret suffices.
pub fn min_protected_count(plant: &Plant, counted: impl Fn(&str, &str) -> bool) -> ProtectionCount {
    let Some(q0) = plant.initial() else {
        return ProtectionCount::Infinite;
    };

    let mut dist: BTreeMap<&str, usize> = BTreeMap::new();
    let mut deque: VecDeque<&str> = VecDeque::new();
    dist.insert(q0, 0);
    deque.push_back(q0);
    while let Some(q) = deque.pop_front() {
        let d = dist[q];
        for t in plant.transitions_from(q) {
            let weight = usize::from(counted(q, &t.event));
            let candidate = d + weight;
            if dist
                .get(t.to.as_str())
                .is_none_or(|&known| candidate < known)
            {
                dist.insert(&t.to, candidate);
                if weight == 0 {
                    deque.push_front(&t.to);
                } else {
                    deque.push_back(&t.to);
                }
            }
        }
    }

    plant
        .secrets()
        .iter()
        .filter_map(|s| dist.get(s.as_str()))
        .min()
        .map_or(ProtectionCount::Infinite, |&c| ProtectionCount::Finite(c))
}

/// True when every string reaching a secret contains at least `m` events
/// protectable at cost level `level` or below.
pub fn is_securely_reachable(plant: &Plant, level: usize, m: usize) -> Result<bool, VerifyError> {
    let level_count = plant.alphabet().level_count();
    if level >= level_count {
        return Err(VerifyError::LevelOutOfRange { level, level_count });
    }
    let counted = plant.alphabet().protectable_up_to(level);
    Ok(min_protected_count(plant, |_, event| counted.contains(event)).at_least(m))
}

/// Smallest cost level at which the secrets are securely reachable with `m`
/// protections, or `None` when even the full protectable alphabet fails.
pub fn least_k(plant: &Plant, m: usize) -> Option<usize> {
    (0..plant.alphabet().level_count())
        .find(|&level| is_securely_reachable(plant, level, m).expect("level is in range"))
}

/// Audits a protection policy: every path from the initial state to a secret
/// must cross at least `m` transitions the policy protects. On failure the
/// verdict carries a witness path crossing fewer; among the paths with the
/// fewest protected crossings it is shortest, and among those the first by
/// event declaration order.
pub fn verify_policy(plant: &Plant, policy: &Policy, m: usize) -> Result<Verdict, VerifyError> {
    if policy.kind() != PolicyKind::Protection {
        return Err(VerifyError::NotAProtectionPolicy(policy.kind()));
    }
    if let Some(violation) = policy.validate_for(plant).first() {
        return Err(VerifyError::InvalidPolicy(violation.to_string()));
    }

    let count = min_protected_count(plant, |state, event| policy.contains(state, event));
    match count {
        ProtectionCount::Infinite => Ok(Verdict::Holds),
        ProtectionCount::Finite(c) if c >= m => Ok(Verdict::Holds),
        ProtectionCount::Finite(c) => {
            let witness = lex_min_witness(plant, policy, c);
            Ok(Verdict::Violated(witness))
        }
    }
}

/// Reconstructs the canonical witness with exactly `count` protected
/// crossings: search the product of plant states and crossing counts, take a
/// shortest path to a secret, and break ties greedily by event declaration
/// order.
fn lex_min_witness(plant: &Plant, policy: &Policy, count: usize) -> Witness {
    let q0 = plant
        .initial()
        .expect("finite count implies an initial state");
    let states: Vec<&str> = plant.states().iter().map(String::as_str).collect();
    let index: BTreeMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let node = |state: usize, crossed: usize| crossed * states.len() + state;
    let node_count = states.len() * (count + 1);

    // Shortest distance from each product node to a goal node, by reverse BFS.
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for t in plant.transitions() {
        let (Some(&from), Some(&to)) = (index.get(t.from.as_str()), index.get(t.to.as_str()))
        else {
            continue;
        };
        let weight = usize::from(policy.contains(&t.from, &t.event));
        for crossed in 0..=count {
            if crossed + weight <= count {
                reverse[node(to, crossed + weight)].push(node(from, crossed));
            }
        }
    }
    let mut to_goal: Vec<Option<usize>> = vec![None; node_count];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for secret in plant.secrets() {
        if let Some(&s) = index.get(secret.as_str()) {
            let goal = node(s, count);
            if to_goal[goal].is_none() {
                to_goal[goal] = Some(0);
                queue.push_back(goal);
            }
        }
    }
    while let Some(n) = queue.pop_front() {
        let d = to_goal[n].expect("queued nodes have distances");
        for &p in &reverse[n] {
            if to_goal[p].is_none() {
                to_goal[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }

    // Walk forward, always taking the earliest-declared event that stays on
    // a shortest path to the goal.
    let mut state = q0;
    let mut crossed = 0;
    let mut remaining = to_goal[node(index[q0], 0)].expect("a witness path exists");
    let mut witness_states = vec![q0.to_string()];
    let mut witness_events = Vec::new();
    while remaining > 0 {
        let mut outgoing: Vec<_> = plant.transitions_from(state).collect();
        outgoing.sort_by_key(|t| plant.alphabet().position(&t.event));
        let step = outgoing
            .into_iter()
            .find_map(|t| {
                let next_crossed = crossed + usize::from(policy.contains(state, &t.event));
                if next_crossed > count {
                    return None;
                }
                let n = node(*index.get(t.to.as_str())?, next_crossed);
                (to_goal[n] == Some(remaining - 1)).then_some((t, next_crossed))
            })
            .expect("shortest-path distances admit a next step");
        witness_events.push(step.0.event.clone());
        witness_states.push(step.0.to.clone());
        state = &step.0.to;
        crossed = step.1;
        remaining -= 1;
    }

    Witness {
        states: witness_states,
        events: witness_events,
        protected_count: crossed,
    }
}
