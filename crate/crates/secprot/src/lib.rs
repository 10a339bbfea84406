//! Synthesis and verification of minimum-cost protection policies for secret
//! states in finite-state discrete-event system models.
//!
//! A plant is a finite automaton whose events are either unprotectable or
//! protectable at one of `n` cost levels; some states hold secrets. The
//! [`synth`] module finds, per required protection, the cheapest set of
//! transitions to guard so that every route from the initial state to a
//! secret crosses at least `m` guarded transitions, using supremal
//! controllable sublanguage computations with transition relabeling between
//! rounds. The [`verify`] module answers the same questions independently by
//! 0/1-weight shortest paths, and audits concrete policies. [`io`] holds the
//! file formats and DOT export, [`cli`] the command-line front end.

pub mod cli;
pub mod io;
pub mod model;
pub mod synth;
pub mod verify;

#[cfg(test)]
pub(crate) mod test_fixtures;

pub use model::{
    language_equivalent, Alphabet, Automaton, EventClass, ModelError, Plant, Policy, PolicyKind,
    PolicyViolation, Supervisor, Transition, Violation, RELABEL_INFIX,
};
pub use synth::{
    build_spec, derive_control_policy, merge_policies, min_cost_supervisor, relabel, supcon,
    synthesize, to_protection_policy, RoundFailure, SynthError, SynthesisResult, SynthesisRound,
    WitnessPath,
};
pub use verify::{
    is_securely_reachable, least_k, min_protected_count, verify_policy, ProtectionCount, Verdict,
    VerifyError, Witness,
};
