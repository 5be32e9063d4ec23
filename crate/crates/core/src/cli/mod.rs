//! Command-line driver: reads a JSON instance, runs one computation, writes a
//! JSON result with a reproducibility header and optionally an SVG overlay.

mod run;
pub mod svg;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub use run::Outcome;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-6;

/// Exit status for a run that completed and found no violations.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Euclidean Steiner trees of a point list, with all tied optima.
    Steiner,
    /// Shortest connected sets covering a finite set within distance r.
    Solve,
    /// Length lower bounds for a convex polygon.
    Bounds,
    /// Tube volume equality, nearest-point uniqueness and curvature checks.
    TubeCheck,
    /// The truncated corner example and its disk-chain reconstruction.
    CornerExample,
    /// Structural checks on a network.
    Validate,
    /// Average distance functional over the tube around a curve.
    AvgDistance,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "mdmkit",
    version,
    about = "Maximal distance minimizers, Steiner trees and tube volumes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file; standard input when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output JSON file; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Write an SVG overlay to this file.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Override the radius given in the input.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Angle tolerance in radians for structural checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub seed: u64,
    pub samples: usize,
    pub r: Option<f64>,
    pub tol: Option<f64>,
}

impl std::str::FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "steiner" => Command::Steiner,
            "solve" => Command::Solve,
            "bounds" => Command::Bounds,
            "tube-check" => Command::TubeCheck,
            "corner-example" => Command::CornerExample,
            "validate" => Command::Validate,
            "avg-distance" => Command::AvgDistance,
            _ => return Err(CliError::Usage(format!("unknown subcommand `{s}`"))),
        })
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input_path: None,
            output_path: None,
            svg_path: None,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            r: None,
            tol: None,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            command: c.command,
            input_path: c.input,
            output_path: c.output,
            svg_path: c.svg,
            seed: c.seed,
            samples: c.samples,
            r: c.r,
            tol: c.tol,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("invalid MDMKIT_WORKERS: {0}")]
    Workers(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "schema",
            CliError::Core(crate::Error::Schema(_)) => "schema",
            CliError::Core(_) => "computation",
            CliError::Workers(_) => "environment",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

/// Parses command-line arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into()),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            report(&CliError::Usage(
                e.render().to_string().trim_end().to_string(),
            ));
            EXIT_ERROR
        }
    }
}

/// Runs one configuration; errors are reported on standard error as JSON.
pub fn run(config: &RunConfig) -> i32 {
    match try_run(config) {
        Ok(outcome) if outcome.violations => EXIT_VIOLATIONS,
        Ok(_) => EXIT_OK,
        Err(e) => {
            report(&e);
            EXIT_ERROR
        }
    }
}

fn report(e: &CliError) {
    log::debug!("{e:?}");
    eprintln!("{}", e.to_json());
}

fn try_run(config: &RunConfig) -> Result<Outcome, CliError> {
    let text = match &config.input_path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| io_error(p, source))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
            s
        }
    };
    let (document, outcome) = run_text(config, &text)?;
    match &config.output_path {
        Some(p) => std::fs::write(p, &document).map_err(|source| io_error(p, source))?,
        None => std::io::stdout()
            .write_all(document.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    if let Some(p) = &config.svg_path {
        std::fs::write(p, outcome.scene.render()).map_err(|source| io_error(p, source))?;
    }
    Ok(outcome)
}

/// Runs on JSON text already in memory and returns the result document.
/// Path fields of `config` are ignored.
pub fn run_text(config: &RunConfig, text: &str) -> Result<(String, Outcome), CliError> {
    let input: Value = serde_json::from_str(text)?;
    let pool = worker_pool()?;
    let outcome = pool.install(|| run::execute(config, &input))?;
    let document = render_document(config, &input, &outcome.payload);
    Ok((document, outcome))
}

/// The result document: header fields followed by the payload under
/// `result`. Paths are not echoed so that output depends only on content.
pub fn render_document(config: &RunConfig, input: &Value, payload: &Value) -> String {
    let doc = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "seed": config.seed,
        "samples": config.samples,
        "config_echo": {
            "subcommand": config.command,
            "input": input,
            "r": config.r,
            "tol": config.tol(),
        },
        "result": payload,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn io_error(path: &std::path::Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Thread pool sized by `MDMKIT_WORKERS` (all cores when unset).
fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MDMKIT_WORKERS") {
        let n: usize = v.trim().parse().map_err(|_| CliError::Workers(v.clone()))?;
        if n == 0 {
            return Err(CliError::Workers(v));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Workers(e.to_string()))
}
