use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::plant::Plant;

/// Vocabulary a policy is expressed in. A protection policy names protectable
/// events to guard; a control policy names controllable events to disable.
/// The two differ only by this tag — converting is a renaming.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Protection,
    Control,
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Protection => write!(f, "protection"),
            PolicyKind::Control => write!(f, "control"),
        }
    }
}

/// State-indexed assignment of events: which events to protect (or disable)
/// at each state. States with an empty assignment are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    kind: PolicyKind,
    map: BTreeMap<String, BTreeSet<String>>,
}

/// One violation found when checking a policy against its host plant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyViolation {
    UnknownState(String),
    UnknownEvent { state: String, event: String },
    UndefinedTransition { state: String, event: String },
    NotProtectable { state: String, event: String },
}

impl fmt::Display for PolicyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyViolation::UnknownState(s) => write!(f, "policy names undeclared state `{s}`"),
            PolicyViolation::UnknownEvent { state, event } => {
                write!(
                    f,
                    "policy names undeclared event `{event}` at state `{state}`"
                )
            }
            PolicyViolation::UndefinedTransition { state, event } => {
                write!(f, "no transition on `{event}` at state `{state}`")
            }
            PolicyViolation::NotProtectable { state, event } => {
                write!(f, "event `{event}` at state `{state}` is not protectable")
            }
        }
    }
}

impl Policy {
    pub fn new(kind: PolicyKind) -> Self {
        Policy {
            kind,
            map: BTreeMap::new(),
        }
    }

    pub fn from_pairs<S, E>(kind: PolicyKind, pairs: impl IntoIterator<Item = (S, E)>) -> Self
    where
        S: Into<String>,
        E: Into<String>,
    {
        let mut policy = Policy::new(kind);
        for (state, event) in pairs {
            policy.insert(state, event);
        }
        policy
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn insert(&mut self, state: impl Into<String>, event: impl Into<String>) {
        self.map
            .entry(state.into())
            .or_default()
            .insert(event.into());
    }

    /// Events assigned at `state`; empty when the state is unlisted.
    pub fn events_at(&self, state: &str) -> impl Iterator<Item = &str> {
        self.map
            .get(state)
            .into_iter()
            .flat_map(|events| events.iter().map(String::as_str))
    }

    pub fn contains(&self, state: &str, event: &str) -> bool {
        self.map
            .get(state)
            .is_some_and(|events| events.contains(event))
    }

    /// States with a nonempty assignment, in name order.
    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    /// All (state, event) pairs, in name order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().flat_map(|(state, events)| {
            events
                .iter()
                .map(move |event| (state.as_str(), event.as_str()))
        })
    }

    /// Number of (state, event) pairs.
    pub fn len(&self) -> usize {
        self.map.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Checks that every listed event names a transition defined at that state
    /// and is protectable there (relabeled copies and unprotectable events can
    /// be neither guarded nor disabled).
    pub fn validate_for(&self, plant: &Plant) -> Vec<PolicyViolation> {
        let mut out = Vec::new();
        for (state, events) in &self.map {
            if !plant.has_state(state) {
                out.push(PolicyViolation::UnknownState(state.clone()));
                continue;
            }
            for event in events {
                if !plant.alphabet().contains(event) {
                    out.push(PolicyViolation::UnknownEvent {
                        state: state.clone(),
                        event: event.clone(),
                    });
                    continue;
                }
                if !plant.alphabet().is_protectable(event) {
                    out.push(PolicyViolation::NotProtectable {
                        state: state.clone(),
                        event: event.clone(),
                    });
                }
                if plant.target(state, event).is_none() {
                    out.push(PolicyViolation::UndefinedTransition {
                        state: state.clone(),
                        event: event.clone(),
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::network_plant;

    #[test]
    fn valid_policy_passes_checks() {
        let plant = network_plant();
        let policy = Policy::from_pairs(
            PolicyKind::Protection,
            [("q0", "sigma0"), ("q2", "sigma4"), ("q2", "sigma6")],
        );
        assert_eq!(policy.validate_for(&plant), Vec::new());
        assert_eq!(policy.len(), 3);
    }

    #[test]
    fn invalid_policies_are_reported() {
        let plant = network_plant();

        let unknown_state = Policy::from_pairs(PolicyKind::Protection, [("q9", "sigma0")]);
        assert_eq!(
            unknown_state.validate_for(&plant),
            vec![PolicyViolation::UnknownState("q9".into())]
        );

        // sigma1 is unprotectable, and sigma0 is not defined at q1.
        let bad = Policy::from_pairs(PolicyKind::Protection, [("q1", "sigma1"), ("q1", "sigma0")]);
        let report = bad.validate_for(&plant);
        assert!(report.contains(&PolicyViolation::NotProtectable {
            state: "q1".into(),
            event: "sigma1".into(),
        }));
        assert!(report.contains(&PolicyViolation::UndefinedTransition {
            state: "q1".into(),
            event: "sigma0".into(),
        }));
    }
}
