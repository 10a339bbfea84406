//! Synthesis of minimum-cost protection policies.
//!
//! The security problem is solved as a supervisory-control problem: remove
//! the secret states to form a specification, compute the supremal
//! controllable sublanguage while sweeping the cost levels from cheapest to
//! costliest, read off the disabled transitions as a policy, relabel those
//! transitions as uncontrollable copies, and repeat once per required
//! protection. The merged policy, read back in the protection vocabulary,
//! guards every path to a secret with the required number of protections.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::model::{Plant, Policy, PolicyKind, Supervisor, Transition, RELABEL_INFIX};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("specification is not a subautomaton of the plant: {0}")]
    SpecNotSubautomaton(String),
    #[error("protection count must be at least 1")]
    InvalidProtectionCount,
    #[error("policies assign `{event}` at `{state}` more than once")]
    OverlappingPolicies { state: String, event: String },
    #[error("control policy contains relabeled event `{0}`")]
    RelabeledInPolicy(String),
    #[error("cannot merge a {0} policy into a {1} policy")]
    MixedPolicyKinds(PolicyKind, PolicyKind),
}

/// One completed synthesis round: the supervisor found, the cost level its
/// sweep stopped at, and the control policy read off from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisRound {
    pub supervisor: Supervisor,
    pub cost_level: usize,
    pub control_policy: Policy,
}

/// Why synthesis stopped early: at `round`, every cost level produced an
/// empty supervisor. When secrets are reachable at all, `witness` is a path
/// from the initial state to a secret whose events offer no protection
/// opportunity (unprotectable, or already guarded in an earlier round).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundFailure {
    pub round: usize,
    pub witness: Option<WitnessPath>,
}

/// A concrete path through a plant: `states` has one more entry than `events`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPath {
    pub states: Vec<String>,
    pub events: Vec<String>,
}

/// Result of [`synthesize`]: the rounds completed, the merged policies in
/// both vocabularies, and the least cost level `k` used by any round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisResult {
    /// Requested number of protections.
    pub m: usize,
    /// Completed rounds; has length `m` exactly when `solvable`.
    pub rounds: Vec<SynthesisRound>,
    /// Union of the per-round control policies; empty when unsolvable.
    pub merged_control: Policy,
    /// The merged policy in the protection vocabulary; empty when unsolvable.
    pub merged_protection: Policy,
    /// Cost level of the last round, which dominates the earlier ones.
    pub least_k: Option<usize>,
    pub solvable: bool,
    pub failure: Option<RoundFailure>,
}

/// Builds the control specification for a plant: the plant without its
/// secret states and without any transition touching a secret state.
///
/// When the initial state itself is secret the specification is empty.
pub fn build_spec(plant: &Plant) -> Plant {
    let empty = match plant.initial() {
        None => true,
        Some(q0) => plant.is_secret(q0),
    };
    if empty {
        return Plant::new(
            Vec::new(),
            plant.alphabet().clone(),
            Vec::new(),
            None,
            Vec::new(),
        );
    }
    let states: Vec<String> = plant
        .states()
        .iter()
        .filter(|s| !plant.is_secret(s))
        .cloned()
        .collect();
    let transitions: Vec<Transition> = plant
        .transitions()
        .iter()
        .filter(|t| !plant.is_secret(&t.from) && !plant.is_secret(&t.to))
        .cloned()
        .collect();
    Plant::new(
        states,
        plant.alphabet().clone(),
        transitions,
        plant.initial().map(String::from),
        Vec::new(),
    )
}

fn check_subautomaton(plant: &Plant, spec: &Plant) -> Result<(), SynthError> {
    for s in spec.states() {
        if !plant.has_state(s) {
            return Err(SynthError::SpecNotSubautomaton(format!(
                "state `{s}` is not a plant state"
            )));
        }
    }
    for t in spec.transitions() {
        if plant.target(&t.from, &t.event) != Some(t.to.as_str()) {
            return Err(SynthError::SpecNotSubautomaton(format!(
                "transition {t} is not a plant transition"
            )));
        }
    }
    if let Some(x0) = spec.initial() {
        if plant.initial() != Some(x0) {
            return Err(SynthError::SpecNotSubautomaton(format!(
                "initial state `{x0}` differs from the plant's"
            )));
        }
        if !spec.has_state(x0) {
            return Err(SynthError::SpecNotSubautomaton(format!(
                "initial state `{x0}` is not a specification state"
            )));
        }
    }
    Ok(())
}

/// Computes the supervisor generating the supremal controllable sublanguage
/// of the specification w.r.t. the plant and the given controllable events.
///
/// Greatest fixpoint on the specification's state set: a state dies when some
/// uncontrollable event is defined on it in the plant but its specification
/// transition is missing or leads to a dead state; after each pass the spec
/// is restricted to the part reachable from the initial state. Both languages
/// are prefix-closed, so no marking or nonblocking step is involved. The
/// result is empty exactly when the initial state dies.
pub fn supcon(
    plant: &Plant,
    spec: &Plant,
    controllable: &BTreeSet<String>,
) -> Result<Supervisor, SynthError> {
    check_subautomaton(plant, spec)?;
    let Some(q0) = spec.initial() else {
        return Ok(Supervisor::empty());
    };

    let mut live: BTreeSet<&str> = spec.states().iter().map(String::as_str).collect();
    loop {
        if !live.contains(q0) {
            return Ok(Supervisor::empty());
        }

        let bad: Vec<&str> = live
            .iter()
            .copied()
            .filter(|q| {
                plant.transitions_from(q).any(|t| {
                    if controllable.contains(&t.event) {
                        return false;
                    }
                    match spec.target(q, &t.event) {
                        Some(to) => !live.contains(to),
                        None => true,
                    }
                })
            })
            .collect();
        if !bad.is_empty() {
            for q in bad {
                live.remove(q);
            }
            continue;
        }

        let mut reachable: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        reachable.insert(q0);
        queue.push_back(q0);
        while let Some(q) = queue.pop_front() {
            for t in spec.transitions().iter().filter(|t| t.from == q) {
                if live.contains(t.to.as_str()) && reachable.insert(&t.to) {
                    queue.push_back(&t.to);
                }
            }
        }
        if reachable.len() == live.len() {
            break;
        }
        live = reachable;
    }

    let states: Vec<String> = plant
        .states()
        .iter()
        .filter(|s| live.contains(s.as_str()))
        .cloned()
        .collect();
    let transitions: Vec<Transition> = spec
        .transitions()
        .iter()
        .filter(|t| live.contains(t.from.as_str()) && live.contains(t.to.as_str()))
        .cloned()
        .collect();
    Ok(Supervisor::new(states, transitions, q0.to_string()))
}

/// Sweeps the cost levels from 0 upward and returns the first nonempty
/// supremal supervisor together with the level it was found at, or `None`
/// when every level fails. Relabeled events are never controllable.
pub fn min_cost_supervisor(
    plant: &Plant,
    spec: &Plant,
) -> Result<Option<(Supervisor, usize)>, SynthError> {
    for level in 0..plant.alphabet().level_count() {
        let controllable = plant.alphabet().protectable_up_to(level);
        let supervisor = supcon(plant, spec, &controllable)?;
        if !supervisor.is_empty() {
            return Ok(Some((supervisor, level)));
        }
    }
    Ok(None)
}

/// Reads the control policy off a supervisor: at every supervisor state, the
/// controllable events the plant defines but the supervisor omits.
pub fn derive_control_policy(plant: &Plant, supervisor: &Supervisor) -> Policy {
    let mut policy = Policy::new(PolicyKind::Control);
    for state in supervisor.states() {
        for t in plant.transitions_from(state) {
            if plant.alphabet().is_protectable(&t.event)
                && supervisor.target(state, &t.event).is_none()
            {
                policy.insert(state.clone(), t.event.clone());
            }
        }
    }
    policy
}

/// Replaces each transition the policy disables by a fresh uncontrollable
/// copy of its event, named `<event>#r<round>`. Everything else — states,
/// targets, the remaining transitions — is unchanged, so the transition
/// count is preserved.
pub fn relabel(plant: &Plant, policy: &Policy, round: usize) -> Plant {
    let mut alphabet = plant.alphabet().clone();
    let mut transitions = plant.transitions().to_vec();

    // Deterministic order: states then events, both in declaration order.
    let mut pairs: Vec<(&str, &str)> = policy.pairs().collect();
    pairs.sort_by_key(|(state, event)| {
        (
            plant.state_position(state),
            plant.alphabet().position(event),
        )
    });

    for (state, event) in pairs {
        if plant.target(state, event).is_none() {
            continue;
        }
        let fresh = alphabet.push_relabeled(event, round);
        for t in &mut transitions {
            if t.from == state && t.event == event {
                t.event = fresh.clone();
            }
        }
    }

    Plant::new(
        plant.states().to_vec(),
        alphabet,
        transitions,
        plant.initial().map(String::from),
        plant.secrets().to_vec(),
    )
}

/// Pointwise union of per-round control policies. Rounds disable disjoint
/// transitions by construction, so any overlap is an internal bug and is
/// reported instead of silently unioned.
pub fn merge_policies<'a>(
    policies: impl IntoIterator<Item = &'a Policy>,
) -> Result<Policy, SynthError> {
    let mut merged: Option<Policy> = None;
    for policy in policies {
        let target = merged.get_or_insert_with(|| Policy::new(policy.kind()));
        if target.kind() != policy.kind() {
            return Err(SynthError::MixedPolicyKinds(policy.kind(), target.kind()));
        }
        for (state, event) in policy.pairs() {
            if target.contains(state, event) {
                return Err(SynthError::OverlappingPolicies {
                    state: state.to_string(),
                    event: event.to_string(),
                });
            }
            target.insert(state, event);
        }
    }
    Ok(merged.unwrap_or_else(|| Policy::new(PolicyKind::Control)))
}

/// Renames a control policy into the protection vocabulary: same map, the
/// events are now read as "protect" rather than "disable". Relabeled events
/// have no protection reading and are rejected.
pub fn to_protection_policy(control: &Policy) -> Result<Policy, SynthError> {
    let mut policy = Policy::new(PolicyKind::Protection);
    for (state, event) in control.pairs() {
        if event.contains(RELABEL_INFIX) {
            return Err(SynthError::RelabeledInPolicy(event.to_string()));
        }
        policy.insert(state, event);
    }
    Ok(policy)
}

/// Shortest path from the initial state to a secret using only events that
/// are unprotectable at every cost level (including relabeled copies).
/// This is the emptiness witness: such a path exists exactly when no
/// supervisor at any level can separate the secrets.
fn unguardable_witness(plant: &Plant) -> Option<WitnessPath> {
    let q0 = plant.initial()?;
    let levels = plant.alphabet().level_count();
    let guardable: BTreeSet<String> = if levels == 0 {
        BTreeSet::new()
    } else {
        plant.alphabet().protectable_up_to(levels - 1)
    };

    // BFS with declaration-order tie-breaking for a reproducible witness.
    let mut parent: std::collections::BTreeMap<&str, (&str, &str)> = Default::default();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut queue: VecDeque<&str> = VecDeque::new();
    seen.insert(q0);
    queue.push_back(q0);
    let mut hit: Option<&str> = if plant.is_secret(q0) { Some(q0) } else { None };
    while hit.is_none() {
        let Some(q) = queue.pop_front() else { break };
        let mut outgoing: Vec<&Transition> = plant
            .transitions_from(q)
            .filter(|t| !guardable.contains(&t.event))
            .collect();
        outgoing.sort_by_key(|t| plant.alphabet().position(&t.event));
        for t in outgoing {
            if seen.insert(&t.to) {
                parent.insert(&t.to, (q, &t.event));
                queue.push_back(&t.to);
                if plant.is_secret(&t.to) {
                    hit = Some(&t.to);
                    break;
                }
            }
        }
    }

    let mut states = vec![hit?.to_string()];
    let mut events = Vec::new();
    let mut current = hit?;
    while let Some((prev, event)) = parent.get(current) {
        events.push(event.to_string());
        states.push(prev.to_string());
        current = prev;
    }
    states.reverse();
    events.reverse();
    Some(WitnessPath { states, events })
}

/// Runs `m` synthesis rounds on the plant. Each round builds the
/// specification for the current plant, finds the cheapest nonempty
/// supervisor, derives its control policy, and relabels the disabled
/// transitions for the next round. Stops early when a round has no
/// supervisor at any cost level.
pub fn synthesize(plant: &Plant, m: usize) -> Result<SynthesisResult, SynthError> {
    if m == 0 {
        return Err(SynthError::InvalidProtectionCount);
    }

    let mut current = plant.clone();
    let mut rounds: Vec<SynthesisRound> = Vec::new();
    for round in 0..m {
        let spec = build_spec(&current);
        let Some((supervisor, cost_level)) = min_cost_supervisor(&current, &spec)? else {
            let failure = RoundFailure {
                round,
                witness: unguardable_witness(&current),
            };
            return Ok(SynthesisResult {
                m,
                rounds,
                merged_control: Policy::new(PolicyKind::Control),
                merged_protection: Policy::new(PolicyKind::Protection),
                least_k: None,
                solvable: false,
                failure: Some(failure),
            });
        };
        if let Some(prev) = rounds.last() {
            // Later rounds only lose controllable transitions, so the sweep
            // cannot stop earlier than the previous round did.
            assert!(
                prev.cost_level <= cost_level,
                "cost level decreased from {} to {} at round {}",
                prev.cost_level,
                cost_level,
                round
            );
        }
        let control_policy = derive_control_policy(&current, &supervisor);
        current = relabel(&current, &control_policy, round);
        rounds.push(SynthesisRound {
            supervisor,
            cost_level,
            control_policy,
        });
    }

    let merged_control = merge_policies(rounds.iter().map(|r| &r.control_policy))?;
    let merged_protection = to_protection_policy(&merged_control)?;
    let least_k = rounds.last().map(|r| r.cost_level);
    Ok(SynthesisResult {
        m,
        rounds,
        merged_control,
        merged_protection,
        least_k,
        solvable: true,
        failure: None,
    })
}
