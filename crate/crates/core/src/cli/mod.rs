//! Command-line front end. Every command reads a chain spec, writes a JSON
//! report (stdout, and `report.json` under `--out` when given) plus any data
//! files, and maps the outcome to a stable exit code.

mod commands;
mod output;

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::chain::SpiderParams;
use crate::error::Error;
use crate::oracle::DEFAULT_PATHS;
use crate::quadrature::{DEFAULT_NODES, DEFAULT_TOL};

pub use output::MatrixJson;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const DEFAULT_LEVELS: usize = 100;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_KM_GRID_LEVELS: usize = 3;
pub const DEFAULT_KM_STEPS: usize = 12;
pub const DEFAULT_GRAM_DEGREE: usize = 8;
pub const DEFAULT_SIM_STEPS: usize = 5;
/// Largest `|z|` tolerated per state before a simulation counts as failed.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Parser)]
#[command(name = "spiderchain", version, about = "Spectral analysis of birth-death chains on spider graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a chain spec and write its normalized form.
    Validate(RunConfig),
    /// Support, atoms, classification and thresholds (constant chains), or
    /// blocks, potentials and convergents (general chains).
    Analyze(RunConfig),
    /// Compare Karlin–McGregor blocks with exact matrix powers.
    KmCheck(RunConfig),
    /// Reflecting-absorbing factorization for a given beta.
    Factorize(RunConfig),
    /// Darboux transform and its spectral matrix.
    Darboux(RunConfig),
    /// Monte Carlo paths compared with the exact distribution.
    Simulate(RunConfig),
}

impl Command {
    fn parts(&self) -> (&'static str, &RunConfig) {
        match self {
            Command::Validate(c) => ("validate", c),
            Command::Analyze(c) => ("analyze", c),
            Command::KmCheck(c) => ("km-check", c),
            Command::Factorize(c) => ("factorize", c),
            Command::Darboux(c) => ("darboux", c),
            Command::Simulate(c) => ("simulate", c),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Chain spec (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for the report and data files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Free parameters beta_1..beta_N, comma separated, or `thresholds`.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Quadrature nodes.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Truncation level for analysis and factorization depth.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,
    /// Pass/fail tolerance; the default depends on the command.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest level `i, j` in the km-check grid.
    #[arg(long, default_value_t = DEFAULT_KM_GRID_LEVELS)]
    pub grid_levels: usize,
    /// Largest power in km-check, or path length in simulate.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Largest degree of the Gram check in darboux.
    #[arg(long, default_value_t = DEFAULT_GRAM_DEGREE)]
    pub gram_degree: usize,
    #[arg(long, default_value_t = DEFAULT_PATHS)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub start_level: usize,
    #[arg(long, default_value_t = 0)]
    pub start_phase: usize,
}

/// Default pass/fail tolerance per command.
pub fn default_tol(command: &str) -> Option<f64> {
    match command {
        "km-check" | "darboux" => Some(1e-8),
        "factorize" => Some(1e-12),
        "simulate" => Some(0.005),
        _ => None,
    }
}

fn defaults_block() -> Value {
    json!({
        "nodes": DEFAULT_NODES,
        "quadrature_tol": DEFAULT_TOL,
        "levels": DEFAULT_LEVELS,
        "km_check_truncation": "max(i, j) + n + 1",
        "km_check_grid_levels": DEFAULT_KM_GRID_LEVELS,
        "km_check_steps": DEFAULT_KM_STEPS,
        "gram_degree": DEFAULT_GRAM_DEGREE,
        "paths": DEFAULT_PATHS,
        "simulate_steps": DEFAULT_SIM_STEPS,
        "seed": DEFAULT_SEED,
        "z_limit": Z_LIMIT,
        "tol": {
            "km-check": default_tol("km-check"),
            "factorize": default_tol("factorize"),
            "darboux": default_tol("darboux"),
            "simulate": default_tol("simulate"),
        },
    })
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
    pub details: Value,
}

impl Failure {
    fn io(kind: &str, path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            kind: kind.into(),
            message: format!("{}: {e}", path.display()),
            details: json!({ "path": path.display().to_string() }),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotStochastic { .. }
            | Error::DegenerateDivision { .. }
            | Error::HypothesisViolated { .. }
            | Error::DepthExceeded { .. } => EXIT_CHECK_FAILED,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_INVALID,
        };
        let details = match &e {
            Error::Invalid(v) => json!({ "violations": v }),
            Error::NotStochastic { depth, leg, entry, value } => {
                json!({ "depth": depth, "leg": leg, "entry": entry, "value": value })
            }
            Error::DegenerateDivision { depth, leg } => json!({ "depth": depth, "leg": leg }),
            Error::HypothesisViolated { leg, depth } | Error::DepthExceeded { leg, depth } => {
                json!({ "depth": depth, "leg": leg })
            }
            _ => Value::Null,
        };
        Failure {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
            details,
        }
    }
}

/// What a command produced: a result object, whether its checks passed, and
/// data files keyed by name.
pub struct Outcome {
    pub passed: bool,
    pub result: Value,
    pub files: Vec<(String, String)>,
}

fn read_spec(path: &Path) -> Result<SpiderParams, Failure> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => Failure::io("InputNotFound", path, e),
        _ => Failure::io("InputUnreadable", path, e),
    })?;
    Ok(SpiderParams::from_json_str(&text)?)
}

fn write_outputs(dir: &Path, report: &str, files: &[(String, String)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io("OutputError", dir, e))?;
    let path = dir.join("report.json");
    fs::write(&path, report).map_err(|e| Failure::io("OutputError", &path, e))?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Failure::io("OutputError", &path, e))?;
    }
    Ok(())
}

/// Run one command. Returns the exit code and the JSON report.
pub fn execute(command: &Command) -> (i32, Value) {
    let (name, config) = command.parts();
    let tol = config.tol.or(default_tol(name));
    let outcome = read_spec(&config.input).and_then(|spec| match command {
        Command::Validate(c) => commands::validate(spec, c),
        Command::Analyze(c) => commands::analyze(spec, c),
        Command::KmCheck(c) => commands::km_check(spec, c, tol.unwrap_or(1e-8)),
        Command::Factorize(c) => commands::factorize(spec, c, tol.unwrap_or(1e-12)),
        Command::Darboux(c) => commands::darboux(spec, c, tol.unwrap_or(1e-8)),
        Command::Simulate(c) => commands::simulate(spec, c, tol.unwrap_or(0.005)),
    });
    let mut report = json!({
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "defaults": defaults_block(),
        "config": {
            "input": config.input.display().to_string(),
            "out": config.out.as_ref().map(|p| p.display().to_string()),
            "beta": config.beta,
            "seed": config.seed,
            "nodes": config.nodes,
            "levels": config.levels,
            "tol": tol,
            "grid_levels": config.grid_levels,
            "steps": config.steps,
            "gram_degree": config.gram_degree,
            "paths": config.paths,
            "start": [config.start_level, config.start_phase],
        },
    });
    let (code, files) = match outcome {
        Ok(o) => {
            report["status"] = json!(if o.passed { "ok" } else { "check_failed" });
            report["result"] = o.result;
            (if o.passed { EXIT_OK } else { EXIT_CHECK_FAILED }, o.files)
        }
        Err(f) => {
            report["status"] = json!("error");
            report["error"] = json!({ "kind": f.kind, "message": f.message, "details": f.details });
            (f.code, Vec::new())
        }
    };
    if let Some(dir) = &config.out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(f) = write_outputs(dir, &text, &files) {
            report["status"] = json!("error");
            report["error"] = json!({ "kind": f.kind, "message": f.message, "details": f.details });
            return (f.code, report);
        }
    }
    (code, report)
}

/// Parse `args`, run, print the report and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let (code, report) = execute(&cli.command);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if let Some(err) = report.get("error") {
        eprintln!("error: {}", err["message"].as_str().unwrap_or("unknown"));
    }
    code
}
