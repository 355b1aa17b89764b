//! `propertime` command-line front end.
//!
//! Exit codes: 0 success, 1 validation failed, 2 usage/config/unphysical
//! parameters, 3 numeric failure (truncation overflow, phase unwrapping).

mod config;
mod protocol;
mod shift;
mod sweep;
mod validate;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use propertime::dynamics::Species;

use config::{GridSpec, ParamSpec};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(propertime::Error),
    ValidationFailed,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numeric() => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(propertime::Error::TruncationOverflow {
                dim,
                tail,
                tol,
                required_dim,
            }) => write!(
                f,
                "truncation overflow at dim {dim} (tail {tail:.3e} >= {tol:.1e}); \
                 required dim {required_dim} (raise {} or set dim)",
                propertime::fock::DIM_CAP_ENV
            ),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::ValidationFailed => write!(f, "validation failed"),
        }
    }
}

impl From<propertime::Error> for CliError {
    fn from(e: propertime::Error) -> Self {
        CliError::Core(e)
    }
}

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(name = "propertime", version, about = "Proper-time effects on trapped-ion clocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form fractional frequency shift and phase
    Shift(shift::ShiftArgs),
    /// Ramsey free-evolution simulation from a config file
    Ramsey(protocol::RunArgs),
    /// Displacement-and-projection protocol simulation from a config file
    QsodsProtocol(protocol::RunArgs),
    /// Cartesian-product parameter sweep to long-format CSV
    Sweep(sweep::SweepArgs),
    /// Run the acceptance suite
    Validate(validate::ValidateArgs),
}

/// Parameter source shared by commands that take it on the command line.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Species preset (al+ or b+)
    #[arg(long, value_parser = parse_species)]
    pub preset: Option<Species>,
    /// Trap frequency of the preset, MHz [default: 20]
    #[arg(long)]
    pub trap_mhz: Option<f64>,
    /// Clock coupling ħω_c/mc²
    #[arg(long)]
    pub eps_c: Option<f64>,
    /// Motional coupling ħω/mc²
    #[arg(long)]
    pub eps_m: Option<f64>,
}

impl ParamArgs {
    pub fn spec(&self) -> ParamSpec {
        ParamSpec {
            preset: self.preset,
            trap_mhz: self.trap_mhz,
            eps_c: self.eps_c,
            eps_m: self.eps_m,
            omega_c_over_omega: None,
        }
    }
}

fn parse_species(s: &str) -> Result<Species, String> {
    Species::parse(s).ok_or_else(|| format!("unknown preset {s:?} (expected al+ or b+)"))
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    GridSpec::parse_flag(s)
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Shift(a) => shift::run(&a),
        Command::Ramsey(a) => protocol::run_ramsey_cmd(&a),
        Command::QsodsProtocol(a) => protocol::run_qsods_cmd(&a),
        Command::Sweep(a) => sweep::run(&a),
        Command::Validate(a) => validate::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
