//! Command-line driver for exact time-dependent Schrödinger solutions of
//! three-generator Lie-algebraic Hamiltonians.
//!
//! Subcommands: `run` solves a configured scenario and certifies it against
//! a brute-force time-ordered propagator; `verify` runs the property
//! suites; `berry` sweeps the drive period and reports the approach of the
//! geometric phase to its closed-loop value; `catalog` lists the model
//! vocabulary.  Exit code 0 means every check passed, 1 means a numerical
//! check failed, 2 means the configuration or invocation was invalid.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod berry;
mod catalog_cmd;
mod config;
mod output;
mod run;
mod scenario;
mod verify;

use config::{CliError, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "liedyn",
    version,
    about = "Exact Schrödinger dynamics from dynamical invariants of three-generator algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario description (TOML)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory for CSV and report files
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Worker threads for independent eigenvalue branches or sweep points
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
    /// Override the seed from the config file
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured scenario, write phase/state tables, and check
    /// the solution against a brute-force propagator
    Run(CommonArgs),
    /// Run the property suites (closure, invariant equation, contracts,
    /// conservation laws, convergence orders) for the configured model
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Corrupt the structure constants fed to the closure check by 10%
        /// (negative control: the report must FAIL)
        #[arg(long)]
        inject_structure_error: bool,
    },
    /// Sweep the drive period and report the geometric phase converging to
    /// its closed-loop solid-angle value
    Berry(CommonArgs),
    /// List runnable model presets and excluded families
    Catalog,
}

fn load(common: &CommonArgs) -> Result<ScenarioConfig, CliError> {
    if common.jobs == 0 {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let mut cfg = ScenarioConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run(c) => {
            let cfg = load(&c)?;
            run::execute(&cfg, &c.out, c.jobs)
        }
        Command::Verify {
            common,
            inject_structure_error,
        } => {
            let cfg = load(&common)?;
            verify::execute(&cfg, &common.out, common.jobs, inject_structure_error)
        }
        Command::Berry(c) => {
            let cfg = load(&c)?;
            berry::execute(&cfg, &c.out, c.jobs)
        }
        Command::Catalog => {
            catalog_cmd::execute()?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe closes (`liedyn ... | head`)
    // instead of panicking on the failed write, matching Unix convention.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successful exits; anything else is a
            // usage error and shares the configuration-error exit code.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 2u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
