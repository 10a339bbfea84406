//! Hand-built automata used across the unit tests: a six-state network model
//! with one secret server, plus the plants produced by one and two rounds of
//! relabeling on it.

use crate::model::{Alphabet, EventClass, Plant, Policy, PolicyKind, Transition};

fn base_events() -> Vec<(String, EventClass)> {
    let level = |l| EventClass::Protectable { level: l };
    vec![
        ("sigma0".into(), level(0)),
        ("sigma1".into(), EventClass::Unprotectable),
        ("sigma2".into(), level(2)),
        ("sigma3".into(), EventClass::Unprotectable),
        ("sigma4".into(), level(1)),
        ("sigma5".into(), EventClass::Unprotectable),
        ("sigma6".into(), level(1)),
        ("sigma7".into(), EventClass::Unprotectable),
        ("sigma8".into(), level(2)),
        ("sigma9".into(), EventClass::Unprotectable),
        ("sigma10".into(), level(1)),
    ]
}

fn base_transitions() -> Vec<Transition> {
    [
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
    .collect()
}

/// Six-state plant with secret `q5`; three cost levels with
/// level 0 = {sigma0}, level 1 = {sigma4, sigma6, sigma10},
/// level 2 = {sigma2, sigma8}.
pub fn network_plant() -> Plant {
    Plant::new(
        (0..6).map(|i| format!("q{i}")).collect(),
        Alphabet::new(base_events(), 3),
        base_transitions(),
        Some("q0".into()),
        vec!["q5".into()],
    )
}

/// First protection policy found on [`network_plant`]: guard sigma0 at q0.
pub fn round0_policy(kind: PolicyKind) -> Policy {
    Policy::from_pairs(kind, [("q0", "sigma0")])
}

/// Second-round policy: guard sigma4 and sigma6 at q2, sigma10 at q4.
pub fn round1_policy(kind: PolicyKind) -> Policy {
    Policy::from_pairs(
        kind,
        [("q2", "sigma4"), ("q2", "sigma6"), ("q4", "sigma10")],
    )
}

/// [`network_plant`] after relabeling the round-0 policy: the q0 -> q1
/// transition now carries the uncontrollable copy sigma0#r0.
pub fn network_g1() -> Plant {
    let mut events = base_events();
    events.push((
        "sigma0#r0".into(),
        EventClass::Relabeled {
            original: "sigma0".into(),
        },
    ));
    let transitions = base_transitions()
        .into_iter()
        .map(|mut t| {
            if t.from == "q0" && t.event == "sigma0" {
                t.event = "sigma0#r0".into();
            }
            t
        })
        .collect();
    Plant::new(
        (0..6).map(|i| format!("q{i}")).collect(),
        Alphabet::new(events, 3),
        transitions,
        Some("q0".into()),
        vec!["q5".into()],
    )
}

/// [`network_g1`] after relabeling the round-1 policy as well; four transitions
/// carry relabeled events in total.
pub fn network_g2() -> Plant {
    let g1 = network_g1();
    let mut events: Vec<(String, EventClass)> = g1
        .alphabet()
        .events()
        .map(|(id, class)| (id.to_string(), class.clone()))
        .collect();
    for original in ["sigma4", "sigma6", "sigma10"] {
        events.push((
            format!("{original}#r1"),
            EventClass::Relabeled {
                original: original.into(),
            },
        ));
    }
    let relabeled = [("q2", "sigma4"), ("q2", "sigma6"), ("q4", "sigma10")];
    let transitions = g1
        .transitions()
        .iter()
        .cloned()
        .map(|mut t| {
            if relabeled.contains(&(t.from.as_str(), t.event.as_str())) {
                t.event = format!("{}#r1", t.event);
            }
            t
        })
        .collect();
    Plant::new(
        g1.states().to_vec(),
        Alphabet::new(events, 3),
        transitions,
        Some("q0".into()),
        vec!["q5".into()],
    )
}
