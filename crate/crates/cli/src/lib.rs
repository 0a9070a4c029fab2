//! Command-line front end: configuration parsing, command dispatch and
//! report emission.

pub mod config;
pub mod error;
mod report;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use config::{parse_config, Config, ConfigDocument};
pub use error::{exit, CliError};

/// Version of every emitted JSON document.
pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "QRL_SEED";

#[derive(Debug, Parser)]
#[command(name = "qrl", version, about = "Quiver local models for singular moduli of sheaves on K3 surfaces")]
pub struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random choice; overrides QRL_SEED and the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Quiver,
    Ample,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ext-quiver as DOT, with its Cartan matrix.
    Quiver { config: String },
    /// Positive roots below a bound (default: the multiplicities).
    Roots {
        config: String,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Walls on the quiver side, the ample side, or both.
    Walls {
        config: String,
        #[arg(long, value_enum, default_value = "both")]
        side: Side,
    },
    /// Chambers of the quiver arrangement in n⊥.
    Chambers { config: String },
    /// Character attached to a named polarization.
    Character {
        config: String,
        #[arg(long)]
        pol: String,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
    },
    /// Sampled check that the slice map carries ample walls to quiver walls.
    Correspondence {
        config: String,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Strata of the singular locus.
    Strata { config: String },
    /// Existence of simple representations in the zero fibre.
    CbCheck {
        config: String,
        #[arg(long)]
        n: Option<String>,
    },
    /// Numerical local-dimension check of the zero fibre.
    MomentVerify {
        config: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        n: Option<String>,
    },
    /// King stability search for a representation file.
    Stability {
        #[arg(long)]
        rep: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Everything above, bundled.
    Summary { config: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Quiver { .. } => "quiver",
            Self::Roots { .. } => "roots",
            Self::Walls { .. } => "walls",
            Self::Chambers { .. } => "chambers",
            Self::Character { .. } => "character",
            Self::Correspondence { .. } => "correspondence",
            Self::Strata { .. } => "strata",
            Self::CbCheck { .. } => "cb-check",
            Self::MomentVerify { .. } => "moment-verify",
            Self::Stability { .. } => "stability",
            Self::Summary { .. } => "summary",
        }
    }
}

/// Process context: standard streams and the seed environment variable.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub env_seed: Option<String>,
}

pub(crate) fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(|e| CliError::Schema(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("reading {path}: {e}")))?;
    }
    Ok(text)
}

/// Rendered command output: the JSON result and its human-readable form.
pub(crate) struct Output {
    pub result: Value,
    pub human: String,
}

pub fn envelope(command: &str, result: Value) -> Value {
    json!({ "schema_version": REPORT_SCHEMA_VERSION, "command": command, "result": result })
}

fn error_envelope(command: &str, e: &CliError) -> Value {
    let mut err = json!({ "kind": e.kind(), "exit_code": e.exit_code(), "message": e.to_string() });
    if let CliError::Invariant { name, .. } = e {
        err["invariant"] = Value::String(name.clone());
    }
    json!({ "schema_version": REPORT_SCHEMA_VERSION, "command": command, "error": err })
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, io: Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(io.stdout, "{e}");
                    return exit::OK;
                }
                _ => exit::SCHEMA,
            };
            let _ = write!(io.stderr, "{e}");
            return code;
        }
    };
    let name = cli.command.name();
    match report::dispatch(&cli, io.stdin, io.env_seed.as_deref()) {
        Ok(out) => {
            let written = if cli.json {
                let text = serde_json::to_string_pretty(&envelope(name, out.result)).expect("report serializes");
                writeln!(io.stdout, "{text}")
            } else {
                write!(io.stdout, "{}", out.human)
            };
            if written.is_err() {
                return exit::SCHEMA;
            }
            exit::OK
        }
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            if cli.json {
                let text = serde_json::to_string_pretty(&error_envelope(name, &e)).expect("report serializes");
                let _ = writeln!(io.stdout, "{text}");
            }
            e.exit_code()
        }
    }
}
