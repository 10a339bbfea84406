use std::collections::BTreeSet;

use super::alphabet::Alphabet;
use super::plant::Plant;
use super::supervisor::Supervisor;
use super::ModelError;

/// A deterministic generator of a prefix-closed language: an initial state
/// plus a partial transition function. Implemented by plants and supervisors
/// so they can be compared uniformly.
pub trait Automaton {
    /// `None` for the empty automaton, whose language is empty.
    fn initial_state(&self) -> Option<&str>;

    fn step(&self, state: &str, event: &str) -> Option<&str>;

    /// Events defined at `state`.
    fn defined_events(&self, state: &str) -> BTreeSet<&str>;

    /// Declared alphabet, when the automaton carries one. Supervisors share
    /// their host's alphabet and return `None`.
    fn declared_alphabet(&self) -> Option<&Alphabet> {
        None
    }
}

impl Automaton for Plant {
    fn initial_state(&self) -> Option<&str> {
        self.initial()
    }

    fn step(&self, state: &str, event: &str) -> Option<&str> {
        self.target(state, event)
    }

    fn defined_events(&self, state: &str) -> BTreeSet<&str> {
        self.transitions_from(state)
            .map(|t| t.event.as_str())
            .collect()
    }

    fn declared_alphabet(&self) -> Option<&Alphabet> {
        Some(self.alphabet())
    }
}

impl Automaton for Supervisor {
    fn initial_state(&self) -> Option<&str> {
        self.initial()
    }

    fn step(&self, state: &str, event: &str) -> Option<&str> {
        self.target(state, event)
    }

    fn defined_events(&self, state: &str) -> BTreeSet<&str> {
        self.transitions()
            .iter()
            .filter(|t| t.from == state)
            .map(|t| t.event.as_str())
            .collect()
    }
}

/// Decides whether two deterministic automata generate the same prefix-closed
/// language, by synchronized traversal of state pairs.
///
/// When both sides declare an alphabet, the event sets must coincide.
pub fn language_equivalent(a: &impl Automaton, b: &impl Automaton) -> Result<bool, ModelError> {
    if let (Some(alpha_a), Some(alpha_b)) = (a.declared_alphabet(), b.declared_alphabet()) {
        let ids_a: BTreeSet<&str> = alpha_a.ids().collect();
        let ids_b: BTreeSet<&str> = alpha_b.ids().collect();
        if ids_a != ids_b {
            return Err(ModelError::AlphabetMismatch);
        }
    }

    let (qa, qb) = match (a.initial_state(), b.initial_state()) {
        (None, None) => return Ok(true),
        (Some(_), None) | (None, Some(_)) => return Ok(false),
        (Some(qa), Some(qb)) => (qa, qb),
    };

    let mut visited: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut stack = vec![(qa, qb)];
    visited.insert((qa, qb));
    while let Some((x, y)) = stack.pop() {
        let mut events = a.defined_events(x);
        events.extend(b.defined_events(y));
        for event in events {
            match (a.step(x, event), b.step(y, event)) {
                (Some(nx), Some(ny)) => {
                    if visited.insert((nx, ny)) {
                        stack.push((nx, ny));
                    }
                }
                (None, None) => unreachable!("event taken from the defined sets"),
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}
