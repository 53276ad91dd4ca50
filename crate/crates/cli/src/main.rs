//! zgb: evaluation, coefficient extraction, zero scanning, and
//! verification for the continued zeta machinery.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse
//! error, 3 pole or domain violation, 4 parameter, capacity, annulus, or
//! I/O problem.

// Validation guards use `!(x > y)` so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod emit;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zgb_core::CoreError;

use commands::FunctionKind;
use config::ConfigLayer;
use verify::Suite;

#[derive(Debug)]
pub enum CliError {
    /// Malformed invocation, literal, or configuration.
    Usage(String),
    /// Error surfaced by the computation layer.
    Core(CoreError),
    /// Filesystem or serialization problem.
    Io(String),
    /// One or more verification checks failed.
    Verify,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify => 1,
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::Pole { .. }) | CliError::Core(CoreError::Domain { .. }) => 3,
            CliError::Core(_) | CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Core(e) => format!("error: {e}"),
            CliError::Io(m) => format!("error: {m}"),
            CliError::Verify => "verification failed".into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "zgb",
    version,
    about = "Continued-zeta laboratory: evaluation, Laurent coefficients, \
             critical-line scans, and invariant verification"
)]
struct Cli {
    /// Configuration file (.toml or .json); ZGB_CONFIG names a second
    /// file applied on top; flags win over both.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Absolute evaluation tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Largest even Bernoulli index tabulated (2..=1024).
    #[arg(long, global = true, value_name = "EVEN_INT")]
    bernoulli_depth: Option<u32>,

    /// Seed for randomized verification grids.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory output files are written into.
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,

    /// Cap on the quadrature grid size (multiple of 4, at least 64).
    #[arg(long, global = true)]
    k_max: Option<u32>,

    /// Arithmetic width: standard (binary64) or extended.
    #[arg(long, global = true)]
    precision: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate zeta at a complex point "X+Yi" and print a JSON record.
    Eval {
        /// Complex literal, e.g. "2+0i" or "0.5+14.134725i".
        s: String,
    },
    /// Extract Laurent coefficients on the circle |s - 1/2| = rho.
    Coeffs {
        /// Which function to expand.
        #[arg(long, value_enum)]
        function: FunctionKind,
        /// Circle radius (must stay away from 1/2).
        #[arg(long)]
        rho: f64,
        /// Symmetric coefficient window: degrees -window..=window.
        #[arg(long, default_value_t = 24)]
        window: u32,
        /// Fixed quadrature grid size; omit for the drift-checked
        /// doubling policy.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Extract coefficients and dump their even/odd parity split.
    Decompose {
        #[arg(long, value_enum)]
        function: FunctionKind,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 24)]
        window: u32,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Scan the critical line for zero candidates.
    Scan {
        rho_min: f64,
        rho_max: f64,
        /// Grid step of the sign-change walk.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Map null-condition residuals over probe angles at fixed radius.
    QuartetMap {
        #[arg(long)]
        rho: f64,
        /// Number of angles between the admissibility bound and pi/2.
        #[arg(long, default_value_t = 32)]
        alpha_count: u32,
    },
    /// Emit circle data comparing the truncated tail series with its
    /// closed form.
    Figures {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 256)]
        points: u32,
    },
    /// Run invariant suites and report pass/fail per check.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Corrupt the Bernoulli table first (fault-injection self-test).
        #[arg(long, hide = true)]
        poison_bernoulli: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = ConfigLayer {
        precision: cli.precision,
        tol: cli.tol,
        bernoulli_depth: cli.bernoulli_depth,
        seed: cli.seed,
        output_dir: cli.output_dir,
        k_max: cli.k_max,
    };
    let cfg = config::resolve(cli.config.as_deref(), flags)?;
    match cli.command {
        Command::Eval { s } => commands::cmd_eval(&cfg, &s),
        Command::Coeffs {
            function,
            rho,
            window,
            k,
        } => commands::cmd_coeffs(&cfg, function, rho, window, k),
        Command::Decompose {
            function,
            rho,
            window,
            k,
        } => commands::cmd_decompose(&cfg, function, rho, window, k),
        Command::Scan {
            rho_min,
            rho_max,
            step,
        } => commands::cmd_scan(&cfg, rho_min, rho_max, step),
        Command::QuartetMap { rho, alpha_count } => {
            commands::cmd_quartet_map(&cfg, rho, alpha_count)
        }
        Command::Figures { rho, points } => commands::cmd_figures(&cfg, rho, points),
        Command::Verify {
            suite,
            poison_bernoulli,
        } => verify::cmd_verify(&cfg, suite, poison_bernoulli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
