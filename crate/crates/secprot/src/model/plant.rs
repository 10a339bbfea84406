use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::alphabet::{Alphabet, EventClass, RELABEL_INFIX};
use super::ModelError;

/// A single labeled transition `from --event--> to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub event: String,
    pub to: String,
}

impl Transition {
    pub fn new(from: impl Into<String>, event: impl Into<String>, to: impl Into<String>) -> Self {
        Transition {
            from: from.into(),
            event: event.into(),
            to: to.into(),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.from, self.event, self.to)
    }
}

/// A finite-state plant: states, a classed alphabet, a partial deterministic
/// transition function, an initial state, and a set of secret states.
///
/// Construction does not check anything, so malformed inputs can be
/// represented and reported by [`Plant::validate`]. All operations that
/// assume well-formedness say so.
///
/// A specification automaton derived from a plant may be empty (no states,
/// no initial state); that case is represented by `initial = None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plant {
    states: Vec<String>,
    alphabet: Alphabet,
    transitions: Vec<Transition>,
    initial: Option<String>,
    secrets: Vec<String>,
}

/// One violation of the plant invariants, as reported by [`Plant::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateState(String),
    DuplicateEvent(String),
    DuplicateSecret(String),
    MissingInitial,
    UnknownInitial(String),
    UnknownSecret(String),
    UnknownTransitionState {
        transition: Transition,
        state: String,
    },
    UnknownTransitionEvent {
        transition: Transition,
    },
    Nondeterministic {
        state: String,
        event: String,
    },
    LevelOutOfRange {
        event: String,
        level: usize,
        level_count: usize,
    },
    UnknownRelabelOriginal {
        event: String,
        original: String,
    },
    RelabelOriginalNotProtectable {
        event: String,
        original: String,
    },
    ReservedEventId(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "duplicate state `{s}`"),
            Violation::DuplicateEvent(e) => write!(f, "duplicate event `{e}`"),
            Violation::DuplicateSecret(s) => write!(f, "duplicate secret `{s}`"),
            Violation::MissingInitial => write!(f, "no initial state"),
            Violation::UnknownInitial(s) => write!(f, "initial state `{s}` is not declared"),
            Violation::UnknownSecret(s) => write!(f, "secret state `{s}` is not declared"),
            Violation::UnknownTransitionState { transition, state } => {
                write!(f, "transition {transition} uses undeclared state `{state}`")
            }
            Violation::UnknownTransitionEvent { transition } => {
                write!(f, "transition {transition} uses an undeclared event")
            }
            Violation::Nondeterministic { state, event } => {
                write!(f, "more than one transition on `{event}` at state `{state}`")
            }
            Violation::LevelOutOfRange { event, level, level_count } => write!(
                f,
                "event `{event}` has cost level {level}, outside the declared range 0..{level_count}"
            ),
            Violation::UnknownRelabelOriginal { event, original } => {
                write!(f, "relabeled event `{event}` names undeclared original `{original}`")
            }
            Violation::RelabelOriginalNotProtectable { event, original } => {
                write!(f, "relabeled event `{event}` names non-protectable original `{original}`")
            }
            Violation::ReservedEventId(e) => {
                write!(f, "event id `{e}` uses the reserved `{RELABEL_INFIX}` infix")
            }
        }
    }
}

impl Plant {
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        transitions: Vec<Transition>,
        initial: Option<String>,
        secrets: Vec<String>,
    ) -> Self {
        Plant {
            states,
            alphabet,
            transitions,
            initial,
            secrets,
        }
    }

    /// States in declaration order.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Transitions in declaration order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Initial state; `None` only for the empty specification automaton.
    pub fn initial(&self) -> Option<&str> {
        self.initial.as_deref()
    }

    /// Secret states in declaration order.
    pub fn secrets(&self) -> &[String] {
        &self.secrets
    }

    pub fn has_state(&self, state: &str) -> bool {
        self.states.iter().any(|s| s == state)
    }

    pub fn is_secret(&self, state: &str) -> bool {
        self.secrets.iter().any(|s| s == state)
    }

    /// Position of a state in declaration order.
    pub fn state_position(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    /// Target of the transition on `event` at `from`, if defined.
    pub fn target(&self, from: &str, event: &str) -> Option<&str> {
        self.transitions
            .iter()
            .find(|t| t.from == from && t.event == event)
            .map(|t| t.to.as_str())
    }

    pub fn transitions_from<'a>(&'a self, from: &str) -> impl Iterator<Item = &'a Transition> + 'a {
        let from = from.to_owned();
        self.transitions.iter().filter(move |t| t.from == from)
    }

    /// Checks every plant invariant and returns the violations found.
    ///
    /// The list is empty exactly when the plant is well-formed: unique
    /// identifiers, declared endpoints and events, a declared initial state,
    /// deterministic transitions, cost levels inside the declared range, and
    /// consistent relabel links.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        let mut seen_states = BTreeSet::new();
        for s in &self.states {
            if !seen_states.insert(s.as_str()) {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }

        let mut seen_events = BTreeSet::new();
        for (id, class) in self.alphabet.events() {
            if !seen_events.insert(id) {
                out.push(Violation::DuplicateEvent(id.to_string()));
            }
            match class {
                EventClass::Protectable { level } => {
                    if *level >= self.alphabet.level_count() {
                        out.push(Violation::LevelOutOfRange {
                            event: id.to_string(),
                            level: *level,
                            level_count: self.alphabet.level_count(),
                        });
                    }
                }
                EventClass::Relabeled { original } => match self.alphabet.class(original) {
                    None => out.push(Violation::UnknownRelabelOriginal {
                        event: id.to_string(),
                        original: original.clone(),
                    }),
                    Some(c) if !c.is_protectable() => {
                        out.push(Violation::RelabelOriginalNotProtectable {
                            event: id.to_string(),
                            original: original.clone(),
                        })
                    }
                    Some(_) => {}
                },
                EventClass::Unprotectable => {}
            }
            // Only relabeled events may carry the reserved infix.
            if id.contains(RELABEL_INFIX) && !class.is_relabeled() {
                out.push(Violation::ReservedEventId(id.to_string()));
            }
        }

        match &self.initial {
            None => out.push(Violation::MissingInitial),
            Some(q0) if !self.has_state(q0) => out.push(Violation::UnknownInitial(q0.clone())),
            Some(_) => {}
        }

        let mut seen_secrets = BTreeSet::new();
        for s in &self.secrets {
            if !self.has_state(s) {
                out.push(Violation::UnknownSecret(s.clone()));
            }
            if !seen_secrets.insert(s.as_str()) {
                out.push(Violation::DuplicateSecret(s.clone()));
            }
        }

        let mut seen_pairs = BTreeSet::new();
        for t in &self.transitions {
            for endpoint in [&t.from, &t.to] {
                if !self.has_state(endpoint) {
                    out.push(Violation::UnknownTransitionState {
                        transition: t.clone(),
                        state: endpoint.clone(),
                    });
                }
            }
            if !self.alphabet.contains(&t.event) {
                out.push(Violation::UnknownTransitionEvent {
                    transition: t.clone(),
                });
            }
            if !seen_pairs.insert((t.from.as_str(), t.event.as_str())) {
                out.push(Violation::Nondeterministic {
                    state: t.from.clone(),
                    event: t.event.clone(),
                });
            }
        }

        out
    }

    /// Runs the event sequence `s` from `from` and returns the reached state,
    /// or `None` when some step is undefined. Assumes a well-formed plant.
    pub fn step_string<'a, S: AsRef<str>>(
        &'a self,
        from: &'a str,
        s: &[S],
    ) -> Result<Option<&'a str>, ModelError> {
        if !self.has_state(from) {
            return Err(ModelError::UnknownState(from.to_string()));
        }
        let mut current = from;
        for event in s {
            let event = event.as_ref();
            if !self.alphabet.contains(event) {
                return Err(ModelError::UnknownEvent(event.to_string()));
            }
            match self.target(current, event) {
                Some(next) => current = next,
                None => return Ok(None),
            }
        }
        Ok(Some(current))
    }

    /// Set of states reachable from `from` by any defined string.
    pub fn reachable_states(&self, from: &str) -> Result<BTreeSet<&str>, ModelError> {
        let root = self
            .states
            .iter()
            .find(|s| *s == from)
            .ok_or_else(|| ModelError::UnknownState(from.to_string()))?;
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        seen.insert(root);
        queue.push_back(root);
        while let Some(q) = queue.pop_front() {
            for t in self.transitions_from(q) {
                if seen.insert(&t.to) {
                    queue.push_back(&t.to);
                }
            }
        }
        Ok(seen)
    }

    /// Replaces every relabeled event by its original on all transitions and
    /// drops the relabeled entries from the alphabet; inverse of relabeling.
    ///
    /// Fails when the rewrite would make two transitions share a
    /// (state, event) pair, which cannot happen on relabeling output but can
    /// on hand-built plants.
    pub fn erase_relabels(&self) -> Result<Plant, ModelError> {
        let originals: BTreeMap<&str, &str> = self
            .alphabet
            .events()
            .filter_map(|(id, class)| match class {
                EventClass::Relabeled { original } => Some((id, original.as_str())),
                _ => None,
            })
            .collect();

        let mut transitions = Vec::with_capacity(self.transitions.len());
        let mut seen_pairs = BTreeSet::new();
        for t in &self.transitions {
            let event = originals.get(t.event.as_str()).copied().unwrap_or(&t.event);
            if !seen_pairs.insert((t.from.clone(), event.to_string())) {
                return Err(ModelError::RelabelCollision {
                    state: t.from.clone(),
                    event: event.to_string(),
                });
            }
            transitions.push(Transition::new(t.from.clone(), event, t.to.clone()));
        }

        let alphabet = Alphabet::new(
            self.alphabet
                .events()
                .filter(|(_, class)| !class.is_relabeled())
                .map(|(id, class)| (id.to_string(), class.clone()))
                .collect(),
            self.alphabet.level_count(),
        );

        Ok(Plant::new(
            self.states.clone(),
            alphabet,
            transitions,
            self.initial.clone(),
            self.secrets.clone(),
        ))
    }
}
