use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blochnh_cli::{bundled_dir, execute, list_scenarios, load_scenario, resolve_scenario, Failure, ListingStatus};
use clap::{Parser, Subcommand};

/// Bloch oscillations in non-Hermitian tight-binding lattices.
#[derive(Parser)]
#[command(name = "blochnh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write CSV output (and report.txt for two or more methods).
    Run {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Run a scenario and check every declared tolerance.
    Verify {
        scenario: String,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// List the bundled scenarios.
    ListScenarios {
        /// Directory holding the scenario files.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// `BLOCHNH_THREADS`: worker count, 0 or unset for one per core.
fn threads() -> Result<usize, Failure> {
    match std::env::var("BLOCHNH_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| Failure::Validation {
            key: "BLOCHNH_THREADS".into(),
            message: format!("expected a nonnegative integer, got {v:?}"),
        }),
    }
}

fn run(scenario: &str, out_dir: &Path, verify: bool) -> Result<(), Failure> {
    let path = resolve_scenario(scenario, &bundled_dir())?;
    let scenario = load_scenario(&path)?;
    if verify && scenario.tolerances.is_empty() {
        return Err(Failure::Validation {
            key: "tolerance".into(),
            message: "verify needs declared tolerances".into(),
        });
    }
    let outcome = execute(&scenario, out_dir, threads()?)?;
    if verify {
        for r in &outcome.tolerances {
            println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.label, r.detail);
        }
    } else {
        for f in &outcome.files {
            println!("wrote {}", f.display());
        }
        for r in outcome.tolerances.iter().filter(|r| !r.pass) {
            println!("FAIL {}: {}", r.label, r.detail);
        }
    }
    match outcome.failed_tolerances() {
        0 => Ok(()),
        failed => Err(Failure::Tolerance { failed, total: outcome.tolerances.len() }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenario, out_dir } => run(scenario, out_dir, false),
        Command::Verify { scenario, out_dir } => run(scenario, out_dir, true),
        Command::ListScenarios { dir } => {
            let dir = dir.clone().unwrap_or_else(bundled_dir);
            for e in list_scenarios(&dir) {
                match e.status {
                    ListingStatus::Valid { description } => println!("{:<22} {description}", e.name),
                    ListingStatus::Invalid { error } => println!("{:<22} INVALID: {error}", e.name),
                    ListingStatus::Missing => println!("{:<22} MISSING: {}", e.name, e.path.display()),
                }
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("blochnh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
