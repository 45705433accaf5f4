//! Command line for reproducing the published tables and exploring the
//! induced potentials, spectra and wavefunctions.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod selftest;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

use trarep_core::repro::Target;

use commands::ComputeKind;
use config::RunConfig;
use error::{CliError, EXIT_CONFIG, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(name = "trarep", version, about = "Co-recursive spectral polynomials: reproduction and exploration")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproTarget {
    Table1,
    Table2,
    Table3,
    Bound34,
    Chebweights,
}

impl From<ReproTarget> for Target {
    fn from(t: ReproTarget) -> Self {
        match t {
            ReproTarget::Table1 => Target::Table1,
            ReproTarget::Table2 => Target::Table2,
            ReproTarget::Table3 => Target::Table3,
            ReproTarget::Bound34 => Target::Bound34,
            ReproTarget::Chebweights => Target::Chebweights,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce a published table and compare it with the published values.
    Repro {
        target: ReproTarget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a quantity on a grid or a matrix truncation.
    Compute {
        kind: ComputeKind,
        #[command(flatten)]
        flags: RunConfig,
        /// JSON file with the same keys as the flags; its values take precedence.
        #[arg(long = "config")]
        config_file: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

fn selftest(json: bool) -> Result<i32, CliError> {
    let results = selftest::default_suite();
    if json {
        let passed = selftest::first_failure(&results).is_none();
        let doc = serde_json::json!({ "passed": passed, "results": results });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for r in &results {
            println!("{} {} [{}]: {}", if r.passed { "PASS" } else { "FAIL" }, r.invariant, r.subject, r.detail);
        }
        if let Some(f) = selftest::first_failure(&results) {
            eprintln!("first failing invariant: {} [{}]", f.invariant, f.subject);
        }
    }
    Ok(selftest::exit_code(&results))
}

pub fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Repro { target, out } => commands::repro(target.into(), out.as_deref()),
        Command::Compute { kind, flags, config_file } => {
            let cfg = match config_file {
                Some(p) => flags.overlaid_with(RunConfig::from_json_file(&p)?),
                None => flags,
            };
            commands::compute(kind, &cfg)
        }
        Command::Selftest { json } => selftest(json),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_CONFIG,
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
