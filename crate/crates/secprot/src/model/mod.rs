//! Automaton data model: plants with classed alphabets, supervisors,
//! state-indexed policies, and the basic operations on them.

mod alphabet;
mod language;
mod plant;
mod policy;
mod supervisor;

pub use alphabet::{Alphabet, EventClass, RELABEL_INFIX};
pub use language::{language_equivalent, Automaton};
pub use plant::{Plant, Transition, Violation};
pub use policy::{Policy, PolicyKind, PolicyViolation};
pub use supervisor::Supervisor;

use thiserror::Error;

/// Input errors raised by model operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("automata are declared over different alphabets")]
    AlphabetMismatch,
    #[error("erasing relabels would define `{event}` twice at state `{state}`")]
    RelabelCollision { state: String, event: String },
}
