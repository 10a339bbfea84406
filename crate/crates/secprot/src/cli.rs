//! Command-line front end: check solvability, synthesize policies, verify
//! policies against a plant, and export DOT graphs.
//!
//! Exit codes are stable across commands: 0 on success, 1 when the checked
//! property is false (unsolvable instance, failed verification), 2 on usage
//! or input errors. `SECPROT_COLOR=1` enables ANSI color in reports.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::io;
use crate::model::{Plant, Policy, RELABEL_INFIX};
use crate::synth::{self, SynthesisResult};
use crate::verify::{self, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FALSE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser)]
#[command(
    name = "secprot",
    version,
    about = "Synthesize and verify minimum-cost protection policies for secret states in finite-state models"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the least cost level protecting the secrets, or test one level
    Check {
        /// Plant file
        plant: PathBuf,
        /// Required number of protections on every route to a secret
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Test this cost level instead of searching for the least one
        #[arg(long)]
        k: Option<usize>,
    },
    /// Synthesize a minimum-cost protection policy
    Synth {
        /// Plant file
        plant: PathBuf,
        /// Required number of protections on every route to a secret
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Write the policy document here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also print each synthesis round and its cost level
        #[arg(long)]
        rounds: bool,
    },
    /// Verify a policy document against a plant
    Verify {
        /// Plant file
        plant: PathBuf,
        /// Policy document
        policy: PathBuf,
        /// Required number of protections on every route to a secret
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
    },
    /// Export a plant (optionally with a policy) as a DOT graph
    Export {
        /// Plant file
        plant: PathBuf,
        /// Policy document whose protections get lock markers
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Write the DOT text here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

pub fn run() -> i32 {
    match Cli::parse().command {
        Command::Check { plant, m, k } => cmd_check(&plant, m as usize, k),
        Command::Synth {
            plant,
            m,
            output,
            rounds,
        } => cmd_synth(&plant, m as usize, output.as_deref(), rounds),
        Command::Verify { plant, policy, m } => cmd_verify(&plant, &policy, m as usize),
        Command::Export {
            plant,
            policy,
            output,
        } => cmd_export(&plant, policy.as_deref(), output.as_deref()),
    }
}

fn cmd_check(plant_path: &Path, m: usize, k: Option<usize>) -> i32 {
    let plant = match load_plant(plant_path) {
        Ok(plant) => plant,
        Err(code) => return code,
    };
    match k {
        Some(level) => match verify::is_securely_reachable(&plant, level, m) {
            Ok(true) => {
                println!("{}", paint("true", GREEN));
                EXIT_OK
            }
            Ok(false) => {
                println!("{}", paint("false", RED));
                EXIT_PROPERTY_FALSE
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT_ERROR
            }
        },
        None => match verify::least_k(&plant, m) {
            Some(level) => {
                println!("least k = {level}");
                EXIT_OK
            }
            None => {
                println!("{}", paint("unsolvable", RED));
                EXIT_PROPERTY_FALSE
            }
        },
    }
}

fn cmd_synth(plant_path: &Path, m: usize, output: Option<&Path>, rounds: bool) -> i32 {
    let plant = match load_plant(plant_path) {
        Ok(plant) => plant,
        Err(code) => return code,
    };
    let result = match synth::synthesize(&plant, m) {
        Ok(result) => result,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    if rounds {
        print_rounds(&plant, &result);
    }
    let document = io::print_policy(&plant, &result);
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, &document) {
                eprintln!("error: cannot write `{}`: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
        }
        None => print!("{document}"),
    }
    if result.solvable {
        EXIT_OK
    } else {
        report_failure(&result);
        EXIT_PROPERTY_FALSE
    }
}

fn print_rounds(plant: &Plant, result: &SynthesisResult) {
    for (index, round) in result.rounds.iter().enumerate() {
        println!("round {index}: k = {}", round.cost_level);
        let mut states: Vec<&str> = round.control_policy.states().collect();
        states.sort_by_key(|s| plant.state_position(s));
        for state in states {
            let mut events: Vec<&str> = round.control_policy.events_at(state).collect();
            events.sort_by_key(|e| plant.alphabet().position(e));
            println!("  {state}: {}", events.join(", "));
        }
    }
}

fn report_failure(result: &SynthesisResult) {
    let Some(failure) = &result.failure else {
        return;
    };
    eprintln!(
        "{}",
        paint(
            &format!(
                "unsolvable: round {} of {} admits no supervisor at any cost level",
                failure.round, result.m
            ),
            RED
        )
    );
    if let Some(witness) = &failure.witness {
        eprintln!(
            "route to a secret with no protection opportunity left: {}",
            render_path(&witness.states, &witness.events)
        );
    }
}

fn cmd_verify(plant_path: &Path, policy_path: &Path, m: usize) -> i32 {
    let plant = match load_plant(plant_path) {
        Ok(plant) => plant,
        Err(code) => return code,
    };
    let document = match read_file(policy_path) {
        Ok(text) => match io::parse_policy(&text) {
            Ok(doc) => doc,
            Err(e) => {
                eprintln!("error: {}: {e}", policy_path.display());
                return EXIT_INPUT_ERROR;
            }
        },
        Err(code) => return code,
    };
    match verify::verify_policy(&plant, &document.policy, m) {
        Ok(Verdict::Holds) => {
            println!("{}", paint("OK", GREEN));
            EXIT_OK
        }
        Ok(Verdict::Violated(witness)) => {
            println!(
                "{}",
                paint(
                    &format!(
                        "violated: this route crosses {} protected transition(s), need {m}:",
                        witness.protected_count
                    ),
                    RED
                )
            );
            println!("{}", render_path(&witness.states, &witness.events));
            EXIT_PROPERTY_FALSE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn cmd_export(plant_path: &Path, policy_path: Option<&Path>, output: Option<&Path>) -> i32 {
    let plant = match load_plant(plant_path) {
        Ok(plant) => plant,
        Err(code) => return code,
    };
    let policy: Option<Policy> = match policy_path {
        None => None,
        Some(path) => match read_file(path) {
            Ok(text) => match io::parse_policy(&text) {
                Ok(doc) => {
                    let violations = doc.policy.validate_for(&plant);
                    if let Some(v) = violations.first() {
                        eprintln!("error: {}: {v}", path.display());
                        return EXIT_INPUT_ERROR;
                    }
                    Some(doc.policy)
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_INPUT_ERROR;
                }
            },
            Err(code) => return code,
        },
    };
    let dot = io::export_dot(&plant, policy.as_ref());
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, &dot) {
                eprintln!("error: cannot write `{}`: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
        }
        None => print!("{dot}"),
    }
    EXIT_OK
}

fn load_plant(path: &Path) -> Result<Plant, i32> {
    let text = read_file(path)?;
    io::parse_plant(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT_ERROR
    })
}

fn read_file(path: &Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read `{}`: {e}", path.display());
        EXIT_INPUT_ERROR
    })
}

fn render_path(states: &[String], events: &[String]) -> String {
    let mut out = String::new();
    for (i, state) in states.iter().enumerate() {
        if i > 0 {
            out.push_str(&format!(" -{}-> ", display_event(&events[i - 1])));
        }
        out.push_str(state);
    }
    out
}

/// Relabeled events print as their original with a prime suffix.
fn display_event(event: &str) -> String {
    match event.split_once(RELABEL_INFIX) {
        Some((original, _)) => format!("{original}'"),
        None => event.to_string(),
    }
}

const GREEN: &str = "\x1b[32m";
const RED: &str = "\x1b[31m";

fn paint(text: &str, color: &str) -> String {
    if std::env::var("SECPROT_COLOR").as_deref() == Ok("1") {
        format!("{color}{text}\x1b[0m")
    } else {
        text.to_string()
    }
}
