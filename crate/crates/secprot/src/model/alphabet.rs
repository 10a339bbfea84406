use std::collections::BTreeSet;

/// Reserved infix for relabeled event identifiers (`<original>#r<round>`).
/// Input files may not use it, which keeps relabeled events recognizable by name.
pub const RELABEL_INFIX: &str = "#r";

/// Classification of an event in a plant alphabet.
///
/// Every event is either unprotectable, protectable at some cost level, or a
/// relabeled copy of a protectable event produced by a synthesis round.
/// Relabeled events carry no cost level and can never be disabled again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventClass {
    /// The administrator cannot guard this event.
    Unprotectable,
    /// Guardable at the given cost level (0 = cheapest).
    Protectable { level: usize },
    /// Copy of a protectable event whose transition was disabled in an
    /// earlier synthesis round; treated as unprotectable from then on.
    Relabeled { original: String },
}

impl EventClass {
    pub fn is_protectable(&self) -> bool {
        matches!(self, EventClass::Protectable { .. })
    }

    pub fn is_relabeled(&self) -> bool {
        matches!(self, EventClass::Relabeled { .. })
    }
}

/// The event set of a plant: identifiers with their classes, in declaration
/// order, plus the number of cost levels `n`.
///
/// Protectable levels must lie in `0..n`; individual levels may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    events: Vec<(String, EventClass)>,
    level_count: usize,
}

impl Alphabet {
    pub fn new(events: Vec<(String, EventClass)>, level_count: usize) -> Self {
        Alphabet {
            events,
            level_count,
        }
    }

    /// Events with their classes, in declaration order.
    pub fn events(&self) -> impl Iterator<Item = (&str, &EventClass)> {
        self.events.iter().map(|(id, class)| (id.as_str(), class))
    }

    /// Event identifiers in declaration order.
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.events.iter().map(|(id, _)| id.as_str())
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Number of cost levels `n`; valid levels are `0..n`.
    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn contains(&self, id: &str) -> bool {
        self.events.iter().any(|(e, _)| e == id)
    }

    pub fn class(&self, id: &str) -> Option<&EventClass> {
        self.events
            .iter()
            .find(|(e, _)| e == id)
            .map(|(_, class)| class)
    }

    /// Position of an event in declaration order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.events.iter().position(|(e, _)| e == id)
    }

    pub fn is_protectable(&self, id: &str) -> bool {
        self.class(id).is_some_and(EventClass::is_protectable)
    }

    /// Union of the protectable levels `0..=level`, monotone in `level`.
    pub fn protectable_up_to(&self, level: usize) -> BTreeSet<String> {
        self.events
            .iter()
            .filter(|(_, class)| match class {
                EventClass::Protectable { level: l } => *l <= level,
                _ => false,
            })
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Extends the alphabet with a relabeled copy of `original`.
    ///
    /// Panics if the identifier is already taken: relabel rounds are numbered,
    /// so a collision means the caller reused a round index.
    pub(crate) fn push_relabeled(&mut self, original: &str, round: usize) -> String {
        let id = format!("{original}{RELABEL_INFIX}{round}");
        match self.class(&id) {
            None => {
                self.events.push((
                    id.clone(),
                    EventClass::Relabeled {
                        original: original.to_string(),
                    },
                ));
                id
            }
            Some(EventClass::Relabeled { original: o }) if o == original => id,
            Some(_) => panic!("relabeled event id `{id}` collides with a declared event"),
        }
    }
}
