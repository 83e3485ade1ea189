//! Command-line surface over the `opsched` library.
//!
//! Exit codes: 0 on success, 1 when the input is well formed but violates
//! the problem (infeasible schedule, invalid instance under `validate`, no
//! solution found), 2 on usage, I/O or format errors.

pub mod gantt;
pub mod io;

use std::io::Write;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use opsched::generator::{generate, instance_stats, params_for_class, InstanceClass, InstanceStats, GENERATOR_VERSION};
use opsched::milp::{build_model, emit_lp, evaluate_schedule, RowViolation};
use opsched::solvers::{brute_force, greedy_result, solve_exact, ExactOptions, SolveError, Status};
use opsched::{big_m_constants, check_schedule, makespan, validate_instance, BigM, Instance, Report, Time};

/// Largest instance `--alg brute` accepts; enumeration grows factorially.
pub const BRUTE_MAX_OPS: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "opsched", version, about = "Online printing shop scheduling toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Alg {
    Exact,
    Greedy,
    Brute,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance of class small, medium or large with index k.
    Gen {
        class: InstanceClass,
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance path; a manifest is written next to it.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Solve an instance and write the result JSON.
    Solve {
        instance: String,
        #[arg(long, value_enum, default_value_t = Alg::Exact)]
        alg: Alg,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<u64>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a schedule (or a solver result) against an instance.
    Check {
        instance: String,
        schedule: String,
        /// Also evaluate every MILP row on the schedule.
        #[arg(long)]
        model: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Write the MILP model in LP format.
    ExportLp {
        instance: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Render a schedule as an SVG Gantt chart.
    Gantt {
        instance: String,
        schedule: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Validate an instance.
    Validate {
        instance: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Print size statistics and big-M constants of an instance.
    Stats {
        instance: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub class: String,
    pub k: u32,
    pub seed: u64,
    pub generator_version: String,
    pub n: u32,
    pub o_min: u32,
    pub o_max: u32,
    pub m_min: u32,
    pub m_max: u32,
    pub q: u32,
    pub stats: InstanceStats,
}

#[derive(Debug, Serialize)]
pub struct CheckOutput {
    pub feasible: bool,
    pub makespan: Time,
    pub violations: Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_violations: Option<Vec<RowViolation>>,
}

#[derive(Debug, Serialize)]
struct StatsOutput {
    #[serde(flatten)]
    stats: InstanceStats,
    big_m: BigM,
}

/// Path of the manifest that accompanies an instance written to `out`.
pub fn manifest_path(out: &str) -> String {
    match out.strip_suffix(".json") {
        Some(stem) => format!("{stem}.manifest.json"),
        None => format!("{out}.manifest.json"),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serialization is infallible");
    s.push('\n');
    s
}

fn load_valid(path: &str) -> Result<Instance, CliError> {
    let inst = io::read_instance(path)?;
    let report = validate_instance(&inst);
    if let Some(v) = report.violations.first() {
        return Err(CliError::Format(format!("{path}: invalid instance: {}: {}", v.rule, v.detail)));
    }
    Ok(inst)
}

/// Rules that mean the schedule refers to something the instance lacks.
const REFERENCE_RULES: [&str; 2] = ["unknown operation", "unknown machine"];

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { class, k, seed, out } => {
            let params = params_for_class(class, k)
                .map_err(|e| CliError::Usage(e.to_string()))?
                .with_seed(seed);
            let inst = generate(&params).map_err(|e| CliError::Usage(e.to_string()))?;
            io::write_text(Some(&out), &inst.to_json_pretty(), stdout)?;
            if out != "-" {
                let manifest = Manifest {
                    class: class.to_string(),
                    k,
                    seed,
                    generator_version: GENERATOR_VERSION.to_string(),
                    n: params.n,
                    o_min: params.o_min,
                    o_max: params.o_max,
                    m_min: params.m_min,
                    m_max: params.m_max,
                    q: params.q,
                    stats: instance_stats(&inst),
                };
                io::write_text(Some(&manifest_path(&out)), &to_json(&manifest), stdout)?;
            }
            Ok(())
        }
        Command::Solve { instance, alg, time_limit, node_limit, out } => {
            let inst = load_valid(&instance)?;
            let result = match alg {
                Alg::Exact => {
                    let opts = ExactOptions {
                        time_limit: time_limit.map(Duration::from_secs),
                        node_limit,
                    };
                    solve_exact(&inst, &opts).map_err(|e| CliError::Format(e.to_string()))?
                }
                Alg::Greedy => greedy_result(&inst).map_err(|e| match e {
                    SolveError::InvalidInstance(e) => CliError::Format(e.to_string()),
                    e @ SolveError::Stuck { .. } => CliError::Domain(e.to_string()),
                })?,
                Alg::Brute => {
                    if inst.operations.len() > BRUTE_MAX_OPS {
                        return Err(CliError::Usage(format!(
                            "brute force is limited to {BRUTE_MAX_OPS} operations, instance has {}",
                            inst.operations.len()
                        )));
                    }
                    brute_force(&inst).map_err(|e| CliError::Format(e.to_string()))?
                }
            };
            io::write_text(out.as_deref(), &result.to_json_pretty(), stdout)?;
            if result.status == Status::Infeasible || result.schedule.is_none() {
                return Err(CliError::Domain(format!("no feasible schedule (status {:?})", result.status)));
            }
            Ok(())
        }
        Command::Check { instance, schedule, model, out } => {
            let inst = load_valid(&instance)?;
            let sched = io::read_schedule(&schedule)?;
            let report = check_schedule(&inst, &sched);
            if let Some(v) = report.iter().find(|v| REFERENCE_RULES.contains(&v.rule.as_str())) {
                return Err(CliError::Format(format!("{schedule}: {}: {}", v.rule, v.detail)));
            }
            let model_violations = if model {
                let ev = evaluate_schedule(&inst, &sched, &big_m_constants(&inst))
                    .map_err(|e| CliError::Format(e.to_string()))?;
                Some(ev.violations)
            } else {
                None
            };
            let feasible = report.is_empty() && model_violations.as_ref().is_none_or(Vec::is_empty);
            let output = CheckOutput {
                feasible,
                makespan: makespan(&sched),
                violations: report,
                model_violations,
            };
            io::write_text(out.as_deref(), &to_json(&output), stdout)?;
            if feasible {
                Ok(())
            } else {
                Err(CliError::Domain("schedule is infeasible".into()))
            }
        }
        Command::ExportLp { instance, out } => {
            let inst = load_valid(&instance)?;
            let model = build_model(&inst, &big_m_constants(&inst)).map_err(|e| CliError::Format(e.to_string()))?;
            io::write_text(out.as_deref(), &emit_lp(&model), stdout)
        }
        Command::Gantt { instance, schedule, out } => {
            let inst = load_valid(&instance)?;
            let sched = io::read_schedule(&schedule)?;
            let svg = gantt::render(&inst, &sched).map_err(|e| CliError::Format(format!("{schedule}: {e}")))?;
            io::write_text(out.as_deref(), &svg, stdout)
        }
        Command::Validate { instance, out } => {
            let inst = io::read_instance(&instance)?;
            let report = validate_instance(&inst);
            io::write_text(out.as_deref(), &to_json(&report), stdout)?;
            if report.is_empty() {
                Ok(())
            } else {
                Err(CliError::Domain(format!("{} violation(s)", report.len())))
            }
        }
        Command::Stats { instance, out } => {
            let inst = load_valid(&instance)?;
            let output = StatsOutput {
                stats: instance_stats(&inst),
                big_m: big_m_constants(&inst),
            };
            io::write_text(out.as_deref(), &to_json(&output), stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code. Errors go to `stderr`.
pub fn run_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
