//! Command-line front end for `pobasis`.
//!
//! Every command reads matrix documents (see [`document`]) from files or from
//! standard input (`-`) and writes one canonical JSON document to standard
//! output. Errors go to standard error as `{"error": {"kind", "message"}}`.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success, or "yes" |
//! | 1 | negative answer: not transformable, not a product |
//! | 2 | usage, schema or I/O error |
//! | 3 | domain error (invalid state, degenerate spectrum, ...) |
//! | 4 | selftest failure |

pub mod canonical;
pub mod commands;
pub mod document;
pub mod selftest;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::{Outcome, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use document::MatrixDocument;
pub use selftest::Hooks;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Schema(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Domain(#[from] pobasis::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema",
            CliError::Io { .. } => "io",
            CliError::Domain(e) => commands::error_kind(e),
        }
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Domain(e) => commands::error_code(e),
        }
    }

    fn to_value(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "pobasis", version, about = "Pseudo-orthonormal bases and local filtering for two qubits")]
struct Cli {
    /// Tolerance for spectrum comparison and product-form detection.
    #[arg(long, global = true, default_value = "1e-8", value_parser = positive)]
    tol: f64,
    /// Seed for `selftest`.
    #[arg(long, global = true, env = "SEED")]
    seed: Option<u64>,
    /// Indent the output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spin-flip a state vector or operator.
    Flip { input: PathBuf },
    /// Pseudo-spectrum, basis vectors and concurrence of a density matrix.
    Analyze { input: PathBuf },
    /// Decide whether RHO can be filtered into SIGMA.
    Check { rho: PathBuf, sigma: PathBuf },
    /// Build local filters taking RHO to SIGMA.
    Synth { rho: PathBuf, sigma: PathBuf },
    /// Apply the filter pair (A, B) to RHO.
    Apply { rho: PathBuf, a: PathBuf, b: PathBuf },
    /// Matrix of A⊗B in the magic basis, after rescaling both to unit determinant.
    Repmat { a: PathBuf, b: PathBuf },
    /// Split a 4×4 operator into unimodular local factors.
    Factor { input: PathBuf },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        rounds: u64,
    },
}

/// Standard streams of one invocation.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

struct Inputs<'a> {
    stdin: &'a mut dyn Read,
}

impl Inputs<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<MatrixDocument, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| CliError::Io { path: "-".into(), message: e.to_string() })?;
            s
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?
        };
        MatrixDocument::parse(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }
}

impl Command {
    fn paths(&self) -> Vec<&PathBuf> {
        match self {
            Command::Flip { input } | Command::Analyze { input } | Command::Factor { input } => vec![input],
            Command::Check { rho, sigma } | Command::Synth { rho, sigma } => vec![rho, sigma],
            Command::Apply { rho, a, b } => vec![rho, a, b],
            Command::Repmat { a, b } => vec![a, b],
            Command::Selftest { .. } => vec![],
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, hooks: &Hooks) -> Result<Outcome, CliError> {
    if cli.command.paths().iter().filter(|p| p.as_os_str() == "-").count() > 1 {
        return Err(CliError::Usage("standard input can be read only once".into()));
    }
    let mut inputs = Inputs { stdin };
    match &cli.command {
        Command::Flip { input } => commands::flip(&inputs.read(input)?),
        Command::Analyze { input } => commands::analyze(&inputs.read(input)?),
        Command::Check { rho, sigma } => commands::check(&inputs.read(rho)?, &inputs.read(sigma)?, cli.tol),
        Command::Synth { rho, sigma } => commands::synth(&inputs.read(rho)?, &inputs.read(sigma)?, cli.tol),
        Command::Apply { rho, a, b } => commands::apply(&inputs.read(rho)?, &inputs.read(a)?, &inputs.read(b)?),
        Command::Repmat { a, b } => commands::repmat(&inputs.read(a)?, &inputs.read(b)?),
        Command::Factor { input } => commands::factor(&inputs.read(input)?, cli.tol),
        Command::Selftest { rounds } => Ok(commands::selftest(cli.seed.unwrap_or(42), *rounds as usize, hooks)),
    }
}

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, streams: Streams<'_>, hooks: &Hooks) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(streams.stdout, "{e}");
                return EXIT_OK;
            }
            let err = CliError::Usage(e.render().to_string().trim_end().to_string());
            let _ = streams.stderr.write_all(canonical::to_string(&err.to_value(), false).as_bytes());
            return EXIT_USAGE;
        }
    };
    let outcome = match dispatch(&cli, streams.stdin, hooks) {
        Ok(o) => o,
        Err(e) => {
            let _ = streams.stderr.write_all(canonical::to_string(&e.to_value(), false).as_bytes());
            return e.code();
        }
    };
    let written =
        streams.stdout.write_all(canonical::to_string(&outcome.value, cli.pretty).as_bytes()).and_then(|_| {
            match &outcome.error {
                Some(err) => streams.stderr.write_all(canonical::to_string(err, false).as_bytes()),
                None => Ok(()),
            }
        });
    if written.is_err() {
        return EXIT_DOMAIN;
    }
    outcome.code
}

/// Captured result of [`invoke`].
#[derive(Clone, Debug)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `pobasis <args>` in-process with the given standard input.
pub fn invoke(args: &[&str], stdin: &str, hooks: &Hooks) -> Invocation {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut input = stdin.as_bytes();
    let code = run(
        std::iter::once("pobasis").chain(args.iter().copied()),
        Streams { stdin: &mut input, stdout: &mut out, stderr: &mut err },
        hooks,
    );
    Invocation {
        code,
        stdout: String::from_utf8_lossy(&out).into_owned(),
        stderr: String::from_utf8_lossy(&err).into_owned(),
    }
}
