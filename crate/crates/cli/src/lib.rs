//! Command-line driver: spectra, inequality checks, torus sweeps, identity
//! verification and mesh utilities.
//!
//! Exit codes: 0 success, 1 a non-exploratory check is unsatisfied, 2 usage
//! or validation error, 3 numerical failure. Errors are printed to stderr as
//! one JSON object.

mod check;
mod commands;
pub mod config;
mod source;

use std::ffi::OsString;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSATISFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "specbound", version, about = "Eigenvalue bounds for Dirac and Laplace operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form or mesh spectrum.
    Spectrum(RunConfig),
    /// Evaluate inequalities and report margins.
    Check(RunConfig),
    /// Conjecture probe (and optional checks) over a torus family, as CSV.
    Sweep(RunConfig),
    /// Numerical verification of the identities behind the estimates.
    Prooflab(ProoflabArgs),
    /// Generate a mesh, or summarize the geometry of one.
    Mesh(RunConfig),
}

#[derive(Debug, Args)]
pub struct ProoflabArgs {
    #[arg(value_enum)]
    pub mode: ProoflabMode,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProoflabMode {
    Prop31,
    Anghel,
    Identities,
    Refinement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(kind: &str, message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, kind: kind.into(), message: message.into() }
    }

    pub fn missing(param: &str, ineq: &str) -> Self {
        Self::usage("missing_parameter", format!("{ineq} needs --{param}"))
    }
}

impl From<specbound_core::Error> for CliError {
    fn from(e: specbound_core::Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        Self { code, kind: e.kind().into(), message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage("io", e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Never panics.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            report_error(&CliError::usage("usage", e.to_string().trim_end()));
            return EXIT_USAGE;
        }
    };
    let previous = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| dispatch(cli)));
    panic::set_hook(previous);
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            report_error(&e);
            e.code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            let e = CliError { code: EXIT_NUMERICAL, kind: "internal".into(), message: msg };
            report_error(&e);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Spectrum(c) => with_config(c, commands::spectrum),
        Command::Check(c) => with_config(c, check::run),
        Command::Sweep(c) => with_config(c, commands::sweep),
        Command::Prooflab(p) => {
            let mode = p.mode;
            with_config(p.config, move |c| commands::prooflab(mode, c))
        }
        Command::Mesh(c) => with_config(c, commands::mesh),
    }
}

fn with_config(c: RunConfig, f: impl FnOnce(&RunConfig) -> Result<i32, CliError>) -> Result<i32, CliError> {
    let c = c.resolve()?;
    init_logging(c.verbose);
    f(&c)
}

fn init_logging(verbose: bool) {
    let level = if verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    let _ = env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).try_init();
}

fn report_error(e: &CliError) {
    let body = serde_json::json!({ "error": e });
    let _ = writeln!(std::io::stderr(), "{body}");
}

/// Writes to `path`, or stdout when absent.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage("io", format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let mut written = out.write_all(text.as_bytes());
            if written.is_ok() && !text.ends_with('\n') {
                written = out.write_all(b"\n");
            }
            match written {
                // A reader that stops early, such as `head`, is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::usage("serialize", e.to_string()))
}
