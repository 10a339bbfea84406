//! Text formats: the line-oriented plant file, the policy document written
//! and read by the CLI, and DOT export for rendering models.
//!
//! Plant files are UTF-8, one declaration per line, `#` starts a comment:
//!
//! ```text
//! states: q0 q1 q2
//! initial: q0
//! secret: q2
//! levels: 2
//! event: a p0
//! event: b u
//! trans: q0 a q1
//! trans: q1 b q2
//! ```
//!
//! Sections appear in that order. Event classes are `u` (unprotectable) or
//! `p<level>`. Relabeled events are synthesis-internal and have no file
//! syntax; the `#r` infix is reserved so they can never be declared.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    Alphabet, EventClass, Plant, Policy, PolicyKind, Transition, Violation, RELABEL_INFIX,
};
use crate::synth::SynthesisResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid plant: {}", format_violations(.0))]
    InvalidPlant(Vec<Violation>),
    #[error("plant contains relabeled event `{0}`, which has no file syntax")]
    RelabeledPlant(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A parsed policy file: the synthesis header plus the policy body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyDocument {
    pub m: usize,
    pub least_k: Option<usize>,
    pub solvable: bool,
    pub policy: Policy,
}

struct Line<'a> {
    number: usize,
    content: &'a str,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Strips comments and blank lines, keeping 1-based line numbers.
fn meaningful_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then_some(Line {
                number: i + 1,
                content,
            })
        })
        .collect()
}

fn split_keyword<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str), IoError> {
    match line.content.split_once(':') {
        Some((keyword, rest)) => Ok((keyword.trim(), rest.trim())),
        None => Err(err(
            line.number,
            1,
            format!("expected `<keyword>: ...`, got `{}`", line.content),
        )),
    }
}

fn check_identifier(line: usize, id: &str) -> Result<(), IoError> {
    let column = 1;
    if id.contains(RELABEL_INFIX) {
        return Err(err(
            line,
            column,
            format!("identifier `{id}` uses the reserved `{RELABEL_INFIX}` infix"),
        ));
    }
    if id.contains(',') || id.contains(':') {
        return Err(err(
            line,
            column,
            format!("identifier `{id}` contains a delimiter character"),
        ));
    }
    Ok(())
}

/// Parses and validates a plant file. Syntax problems report line and column;
/// a syntactically fine plant that breaks a model invariant is rejected with
/// the validation report.
pub fn parse_plant(text: &str) -> Result<Plant, IoError> {
    let lines = meaningful_lines(text);
    let mut cursor = lines.iter().peekable();

    let mut expect = |keyword: &str| -> Result<(usize, &str), IoError> {
        match cursor.next() {
            Some(line) => {
                let (kw, rest) = split_keyword(line)?;
                if kw == keyword {
                    Ok((line.number, rest))
                } else {
                    Err(err(
                        line.number,
                        1,
                        format!("expected `{keyword}:`, got `{kw}:`"),
                    ))
                }
            }
            None => Err(err(
                lines.last().map_or(1, |l| l.number),
                1,
                format!("missing `{keyword}:` line"),
            )),
        }
    };

    let (line_no, states_str) = expect("states")?;
    let states: Vec<String> = states_str.split_whitespace().map(String::from).collect();
    for s in &states {
        check_identifier(line_no, s)?;
    }

    let (line_no, initial_str) = expect("initial")?;
    let initial = initial_str.to_string();
    if initial.is_empty() {
        return Err(err(line_no, 1, "missing initial state"));
    }
    check_identifier(line_no, &initial)?;

    let (line_no, secret_str) = expect("secret")?;
    let secrets: Vec<String> = secret_str.split_whitespace().map(String::from).collect();
    for s in &secrets {
        check_identifier(line_no, s)?;
    }

    let (line_no, levels_str) = expect("levels")?;
    let level_count: usize = levels_str
        .parse()
        .map_err(|_| err(line_no, 1, format!("invalid level count `{levels_str}`")))?;

    let mut events: Vec<(String, EventClass)> = Vec::new();
    let mut transitions: Vec<Transition> = Vec::new();
    let mut in_transitions = false;
    for line in cursor {
        let (keyword, rest) = split_keyword(line)?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "event" if !in_transitions => {
                let [id, class] = fields.as_slice() else {
                    return Err(err(line.number, 1, "expected `event: <id> u|p<level>`"));
                };
                check_identifier(line.number, id)?;
                let class = parse_event_class(line.number, class)?;
                events.push((id.to_string(), class));
            }
            "event" => {
                return Err(err(
                    line.number,
                    1,
                    "event declarations must precede transitions",
                ))
            }
            "trans" => {
                in_transitions = true;
                let [from, event, to] = fields.as_slice() else {
                    return Err(err(line.number, 1, "expected `trans: <src> <event> <dst>`"));
                };
                for id in [from, event, to] {
                    check_identifier(line.number, id)?;
                }
                transitions.push(Transition::new(*from, *event, *to));
            }
            other => return Err(err(line.number, 1, format!("unexpected `{other}:` line"))),
        }
    }

    let plant = Plant::new(
        states,
        Alphabet::new(events, level_count),
        transitions,
        Some(initial),
        secrets,
    );
    let violations = plant.validate();
    if violations.is_empty() {
        Ok(plant)
    } else {
        Err(IoError::InvalidPlant(violations))
    }
}

fn parse_event_class(line: usize, token: &str) -> Result<EventClass, IoError> {
    if token == "u" {
        return Ok(EventClass::Unprotectable);
    }
    if let Some(level) = token.strip_prefix('p') {
        if let Ok(level) = level.parse() {
            return Ok(EventClass::Protectable { level });
        }
    }
    Err(err(
        line,
        1,
        format!("invalid event class `{token}`, expected `u` or `p<level>`"),
    ))
}

/// Prints a plant in the file grammar; inverse of [`parse_plant`] on
/// well-formed plants. Relabeled events cannot be expressed and are refused.
pub fn print_plant(plant: &Plant) -> Result<String, IoError> {
    let mut out = String::new();
    writeln!(out, "states: {}", plant.states().join(" ")).unwrap();
    writeln!(out, "initial: {}", plant.initial().unwrap_or_default()).unwrap();
    writeln!(out, "secret: {}", plant.secrets().join(" ")).unwrap();
    writeln!(out, "levels: {}", plant.alphabet().level_count()).unwrap();
    for (id, class) in plant.alphabet().events() {
        let class = match class {
            EventClass::Unprotectable => "u".to_string(),
            EventClass::Protectable { level } => format!("p{level}"),
            EventClass::Relabeled { .. } => {
                return Err(IoError::RelabeledPlant(id.to_string()));
            }
        };
        writeln!(out, "event: {id} {class}").unwrap();
    }
    for t in plant.transitions() {
        writeln!(out, "trans: {} {} {}", t.from, t.event, t.to).unwrap();
    }
    Ok(out)
}

/// Prints a synthesis result as a policy document: header lines for `m`, the
/// least cost level and solvability, then one line per state with a nonempty
/// assignment. States follow plant declaration order, events follow alphabet
/// declaration order, so the output is deterministic.
pub fn print_policy(plant: &Plant, result: &SynthesisResult) -> String {
    let mut out = String::new();
    writeln!(out, "m: {}", result.m).unwrap();
    match result.least_k {
        Some(k) => writeln!(out, "k: {k}").unwrap(),
        None => writeln!(out, "k: none").unwrap(),
    }
    writeln!(out, "solvable: {}", result.solvable).unwrap();
    out.push_str(&policy_body(plant, &result.merged_protection));
    out
}

fn policy_body(plant: &Plant, policy: &Policy) -> String {
    let mut out = String::new();
    let mut states: Vec<&str> = policy.states().collect();
    states.sort_by_key(|s| (plant.state_position(s), s.to_string()));
    for state in states {
        let mut events: Vec<&str> = policy.events_at(state).collect();
        events.sort_by_key(|e| (plant.alphabet().position(e), e.to_string()));
        writeln!(out, "{state}: {}", events.join(", ")).unwrap();
    }
    out
}

/// Parses a policy document back into its header and protection policy.
pub fn parse_policy(text: &str) -> Result<PolicyDocument, IoError> {
    let lines = meaningful_lines(text);
    let mut cursor = lines.iter();

    let mut header = |keyword: &str| -> Result<(usize, &str), IoError> {
        match cursor.next() {
            Some(line) => {
                let (kw, rest) = split_keyword(line)?;
                if kw == keyword {
                    Ok((line.number, rest))
                } else {
                    Err(err(
                        line.number,
                        1,
                        format!("expected `{keyword}:`, got `{kw}:`"),
                    ))
                }
            }
            None => Err(err(1, 1, format!("missing `{keyword}:` line"))),
        }
    };

    let (line_no, m_str) = header("m")?;
    let m: usize = m_str
        .parse()
        .map_err(|_| err(line_no, 1, format!("invalid protection count `{m_str}`")))?;

    let (line_no, k_str) = header("k")?;
    let least_k = if k_str == "none" {
        None
    } else {
        Some(
            k_str
                .parse()
                .map_err(|_| err(line_no, 1, format!("invalid cost level `{k_str}`")))?,
        )
    };

    let (line_no, solvable_str) = header("solvable")?;
    let solvable = match solvable_str {
        "true" => true,
        "false" => false,
        other => return Err(err(line_no, 1, format!("invalid boolean `{other}`"))),
    };

    let mut policy = Policy::new(PolicyKind::Protection);
    for line in cursor {
        let (state, rest) = split_keyword(line)?;
        check_identifier(line.number, state)?;
        if rest.is_empty() {
            return Err(err(line.number, 1, "empty event list"));
        }
        for event in rest.split(',') {
            let event = event.trim();
            if event.is_empty() {
                return Err(err(line.number, 1, "empty event name"));
            }
            check_identifier(line.number, event)?;
            policy.insert(state, event);
        }
    }

    Ok(PolicyDocument {
        m,
        least_k,
        solvable,
        policy,
    })
}

/// Renders a plant as a DOT digraph. Secret states are shaded, the initial
/// state is marked by an entry arrow, and with a policy every protected
/// transition is drawn bold with a `[lock]` marker on its label. Relabeled
/// events are shown as their original with a prime suffix.
pub fn export_dot(plant: &Plant, policy: Option<&Policy>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph plant {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    if plant.initial().is_some() {
        writeln!(out, "  __initial [shape=point, label=\"\"];").unwrap();
    }
    for state in plant.states() {
        if plant.is_secret(state) {
            writeln!(out, "  \"{state}\" [style=filled, fillcolor=lightgrey];").unwrap();
        } else {
            writeln!(out, "  \"{state}\";").unwrap();
        }
    }
    if let Some(q0) = plant.initial() {
        writeln!(out, "  __initial -> \"{q0}\";").unwrap();
    }
    for t in plant.transitions() {
        let label = match plant.alphabet().class(&t.event) {
            Some(EventClass::Relabeled { original }) => format!("{original}'"),
            _ => t.event.clone(),
        };
        let protected = policy.is_some_and(|p| p.contains(&t.from, &t.event));
        if protected {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{} [lock]\", style=bold];",
                t.from, t.to, label
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                t.from, t.to, label
            )
            .unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
