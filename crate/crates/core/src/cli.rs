//! The `cobool` command line.
//!
//! Exit codes: 0 success, 1 failed cross-check, 2 error, 10 SAT, 20 UNSAT.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::classifier::{classify, explain, Classification, TractabilityReason};
use crate::encoder::{encode, lift, BooleanSystem, EncodeError, Encoding};
use crate::generate::{random_instance, random_template, GenError, InstanceParams};
use crate::model::{
    evaluate, normalize_instance, parse_instance, parse_template, render_instance, render_template,
    Assignment, Instance, ModelError, Normalized, NormalizedInstance, ParseError, Template,
};
use crate::oracle::solve_backtracking;
use crate::polysolve::{solve_tractable, SolveError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;

#[derive(Debug, Parser)]
#[command(name = "cobool", version, about = "Classify and solve CSPs over graphs of co-Boolean functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Polynomial engine when the template is tractable, oracle otherwise.
    Auto,
    /// Polynomial engine; an error on NP-complete templates.
    Poly,
    /// Backtracking over the original domain.
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a template is tractable.
    Classify {
        template: PathBuf,
        /// Print the report as JSON only.
        #[arg(long)]
        json: bool,
        /// Print the full pipeline trace after the verdict.
        #[arg(long)]
        explain: bool,
    },
    /// Solve an instance.
    Solve {
        template: PathBuf,
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        #[arg(long)]
        json: bool,
        /// Also print the Boolean system handed to the polynomial engine.
        #[arg(long)]
        dump_boolean: bool,
        /// Also print the engine and the core retraction.
        #[arg(long)]
        explain: bool,
    },
    /// Cross-check the polynomial engine against the oracle on random
    /// instances.
    Check {
        template: PathBuf,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of variables per instance.
        #[arg(long, default_value_t = 12)]
        vars: usize,
        /// Maximum number of constraints per instance.
        #[arg(long, default_value_t = 20)]
        cons: usize,
        #[arg(long, default_value_t = 0.1)]
        pin_prob: f64,
    },
    /// Generate a random template or instance.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    Template {
        /// Domain size.
        #[arg(long)]
        domain: usize,
        /// Number of functions.
        #[arg(long)]
        functions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Instance {
        template: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        cons: usize,
        #[arg(long, default_value_t = 0.0)]
        pin_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pin only elements of the template's core.
        #[arg(long)]
        core_pins: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("template classified NP-complete; the polynomial engine does not apply")]
    NotTractable,
    #[error(
        "pin `{var} := {value}` names an element outside the core {core:?}; only core elements can be pinned after core reduction (use --engine oracle)"
    )]
    PinOutsideCore {
        var: String,
        value: usize,
        core: Vec<usize>,
    },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_template(path: &Path) -> Result<Template, CliError> {
    parse_template(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Which engine produced an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineUsed {
    Poly(TractabilityReason),
    Oracle,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// `None` is UNSAT.
    pub assignment: Option<Assignment>,
    pub engine: EngineUsed,
    pub classification: Option<Classification>,
    /// The Boolean system, when one was built.
    pub system: Option<BooleanSystem>,
}

fn oracle_answer(n: Normalized, tmpl: &Template) -> Option<Assignment> {
    let n = n.ready()?;
    solve_backtracking(&n, tmpl).map(|v| n.expand(&v))
}

/// Core reduction, encoding and the licensed polynomial engine.
fn poly_answer(
    n: Normalized,
    c: &Classification,
    reason: TractabilityReason,
) -> Result<(Option<Assignment>, Option<BooleanSystem>), CliError> {
    let Some(n) = n.ready() else {
        return Ok((None, None));
    };
    let r = &c.core.retraction;
    let core_inst: NormalizedInstance = n
        .map_pins(|d| r.rename(d))
        .map_err(|(var, value)| CliError::PinOutsideCore {
            var,
            value,
            core: r.image().to_vec(),
        })?;
    if reason == TractabilityReason::DegenerateCore {
        // every function fixes the single core element
        let values = vec![r.original(0); n.num_vars()];
        return Ok((Some(n.expand(&values)), None));
    }
    match encode(&core_inst, &c.matrix)? {
        Encoding::TriviallyUnsat { .. } => Ok((None, None)),
        Encoding::System(sys, vm) => {
            let answer = match solve_tractable(&sys, reason)? {
                None => None,
                Some(ba) => {
                    let core_values = lift(&ba, &vm, &c.matrix)?;
                    let values: Vec<usize> = core_values.iter().map(|&e| r.original(e)).collect();
                    Some(n.expand(&values))
                }
            };
            Ok((answer, Some(*sys)))
        }
    }
}

/// Solves `inst` over `tmpl` with the requested engine. Every returned
/// model has been checked against the original instance.
pub fn solve_instance(tmpl: &Template, inst: &Instance, engine: Engine) -> Result<SolveOutcome, CliError> {
    let classification = match engine {
        Engine::Oracle => None,
        Engine::Auto | Engine::Poly => Some(classify(tmpl)),
    };
    let reason = classification.as_ref().and_then(|c| c.verdict.reason());
    if engine == Engine::Poly && reason.is_none() {
        return Err(CliError::NotTractable);
    }
    let n = normalize_instance(inst, tmpl)?;
    let outcome = match (engine, reason) {
        (Engine::Poly, None) => return Err(CliError::NotTractable),
        (Engine::Oracle, _) | (Engine::Auto, None) => SolveOutcome {
            assignment: oracle_answer(n, tmpl),
            engine: EngineUsed::Oracle,
            classification,
            system: None,
        },
        (_, Some(reason)) => {
            let c = classification.as_ref().expect("classified");
            let (assignment, system) = poly_answer(n, c, reason)?;
            SolveOutcome {
                assignment,
                engine: EngineUsed::Poly(reason),
                classification,
                system,
            }
        }
    };
    if let Some(a) = &outcome.assignment {
        if !evaluate(inst, tmpl, a)? {
            return Err(CliError::Internal(format!("model {a:?} fails the instance")));
        }
    }
    Ok(outcome)
}

fn assignment_json(a: &Assignment) -> Value {
    a.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
}

fn print_solve(
    out: &mut dyn Write,
    o: &SolveOutcome,
    as_json: bool,
    dump_boolean: bool,
    explain_flag: bool,
) -> Result<(), CliError> {
    let (engine, reason) = match o.engine {
        EngineUsed::Poly(r) => ("poly", Some(r.name())),
        EngineUsed::Oracle => ("oracle", None),
    };
    if as_json {
        let mut v = json!({
            "result": if o.assignment.is_some() { "SAT" } else { "UNSAT" },
            "assignment": o.assignment.as_ref().map(assignment_json),
            "engine": engine,
            "reason": reason,
        });
        if dump_boolean {
            v["boolean_system"] = json!(o.system.as_ref().map(BooleanSystem::dump));
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        return Ok(());
    }
    match &o.assignment {
        Some(a) => {
            writeln!(out, "SAT")?;
            for (k, v) in a.iter() {
                writeln!(out, "{k} = {v}")?;
            }
        }
        None => writeln!(out, "UNSAT")?,
    }
    if dump_boolean {
        match &o.system {
            Some(sys) => write!(out, "{}", sys.dump())?,
            None => writeln!(out, "# no Boolean system was built")?,
        }
    }
    if explain_flag {
        match reason {
            Some(r) => writeln!(out, "# engine: poly ({r})")?,
            None => writeln!(out, "# engine: oracle")?,
        }
        if let Some(c) = &o.classification {
            let r = &c.core.retraction;
            if r.is_identity() {
                writeln!(out, "# core: identity retraction")?;
            } else {
                let pairs: Vec<String> = r.map().iter().enumerate().map(|(d, p)| format!("{d}->{p}")).collect();
                writeln!(out, "# retraction: {}", pairs.join(" "))?;
            }
        }
    }
    Ok(())
}

/// Agreement statistics of a `check` campaign.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub samples: usize,
    pub sat: usize,
    pub unsat: usize,
    /// Seeds of instances where the engines disagree.
    pub disagreements: Vec<u64>,
}

/// Runs `samples` random instances through the polynomial engine and the
/// oracle. Instance sizes are uniform in `1..=max_vars`, `1..=max_cons`;
/// pins name core elements only.
pub fn cross_check(
    tmpl: &Template,
    samples: usize,
    seed: u64,
    max_vars: usize,
    max_cons: usize,
    pin_probability: f64,
) -> Result<CheckStats, CliError> {
    let c = classify(tmpl);
    if !c.verdict.is_tractable() {
        return Err(CliError::NotTractable);
    }
    if max_vars == 0 || max_cons == 0 {
        return Err(GenError::ZeroCount("size bound").into());
    }
    let pins = c.core.retraction.image().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = CheckStats {
        samples,
        ..CheckStats::default()
    };
    for _ in 0..samples {
        let s: u64 = rng.gen();
        let params = InstanceParams {
            vars: rng.gen_range(1..=max_vars),
            constraints: rng.gen_range(1..=max_cons),
            pin_probability,
            pin_elements: Some(&pins),
        };
        let inst = random_instance(s, tmpl, &params)?;
        let poly = solve_instance(tmpl, &inst, Engine::Poly)?;
        let oracle = solve_instance(tmpl, &inst, Engine::Oracle)?;
        match (poly.assignment.is_some(), oracle.assignment.is_some()) {
            (true, true) => stats.sat += 1,
            (false, false) => stats.unsat += 1,
            _ => stats.disagreements.push(s),
        }
    }
    Ok(stats)
}

/// Executes a parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Classify {
            template,
            json,
            explain: explain_flag,
        } => {
            let c = classify(&load_template(template)?);
            let report = explain(&c);
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json"))?;
            } else {
                writeln!(out, "{}", c.verdict_line())?;
                if *explain_flag {
                    write!(out, "{}", report.text)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Solve {
            template,
            instance,
            engine,
            json,
            dump_boolean,
            explain: explain_flag,
        } => {
            let tmpl = load_template(template)?;
            let inst = load_instance(instance)?;
            let o = solve_instance(&tmpl, &inst, *engine)?;
            print_solve(out, &o, *json, *dump_boolean, *explain_flag)?;
            Ok(if o.assignment.is_some() { EXIT_SAT } else { EXIT_UNSAT })
        }
        Command::Check {
            template,
            samples,
            seed,
            vars,
            cons,
            pin_prob,
        } => {
            let tmpl = load_template(template)?;
            let stats = cross_check(&tmpl, *samples, *seed, *vars, *cons, *pin_prob)?;
            let agree = stats.sat + stats.unsat;
            writeln!(out, "samples: {}", stats.samples)?;
            writeln!(out, "sat: {}", stats.sat)?;
            writeln!(out, "unsat: {}", stats.unsat)?;
            writeln!(out, "agree: {agree}")?;
            writeln!(out, "disagree: {}", stats.disagreements.len())?;
            for s in &stats.disagreements {
                writeln!(out, "  instance seed {s}")?;
            }
            Ok(if stats.disagreements.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Gen { what } => {
            match what {
                GenCommand::Template { domain, functions, seed } => {
                    write!(out, "{}", render_template(&random_template(*seed, *domain, *functions)?))?;
                }
                GenCommand::Instance {
                    template,
                    vars,
                    cons,
                    pin_prob,
                    seed,
                    core_pins,
                } => {
                    let tmpl = load_template(template)?;
                    let core = core_pins.then(|| classify(&tmpl).core.retraction.image().to_vec());
                    let params = InstanceParams {
                        vars: *vars,
                        constraints: *cons,
                        pin_probability: *pin_prob,
                        pin_elements: core.as_deref(),
                    };
                    write!(out, "{}", render_instance(&random_instance(*seed, &tmpl, &params)?))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
