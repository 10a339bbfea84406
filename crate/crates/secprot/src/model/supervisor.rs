use super::plant::Transition;

/// A supervisor: a subautomaton of some host plant, i.e. a subset of its
/// states and transitions rooted at the host's initial state.
///
/// The empty supervisor is a distinguished value generating the empty
/// language (not even the empty string), which is how an unsolvable
/// synthesis round is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supervisor {
    states: Vec<String>,
    transitions: Vec<Transition>,
    initial: Option<String>,
}

impl Supervisor {
    pub fn new(states: Vec<String>, transitions: Vec<Transition>, initial: String) -> Self {
        Supervisor {
            states,
            transitions,
            initial: Some(initial),
        }
    }

    pub fn empty() -> Self {
        Supervisor {
            states: Vec::new(),
            transitions: Vec::new(),
            initial: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_none()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> Option<&str> {
        self.initial.as_deref()
    }

    pub fn has_state(&self, state: &str) -> bool {
        self.states.iter().any(|s| s == state)
    }

    pub fn target(&self, from: &str, event: &str) -> Option<&str> {
        self.transitions
            .iter()
            .find(|t| t.from == from && t.event == event)
            .map(|t| t.to.as_str())
    }
}
