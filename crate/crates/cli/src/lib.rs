//! Scenario-driven front end for the lattice simulator: runs any subset of
//! the propagation methods, writes CSV time series and density maps, and
//! compares the methods against declared tolerances.

pub mod error;
pub mod methods;
pub mod output;
pub mod report;
pub mod scenario;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use error::Failure;
use methods::{run_method, MethodRun};
use report::{check_tolerances, render_report, ToleranceResult};
pub use scenario::{load_scenario, parse_scenario, Scenario};

/// The bundled figure scenarios, in listing order.
pub const BUNDLED_SCENARIOS: [&str; 9] = [
    "hn_broad",
    "hn_broad_cov_caption",
    "hn_broad_cov_text",
    "hn_norm_pm_mu",
    "hn_p_deviation",
    "hn_delta",
    "hn_intermediate",
    "ic_broad_three_betas",
    "ic_delta",
];

/// `$BLOCHNH_SCENARIO_DIR`, or the `scenarios` directory shipped with the crate.
pub fn bundled_dir() -> PathBuf {
    std::env::var_os("BLOCHNH_SCENARIO_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios"))
}

/// A path to an existing file, or the name of a bundled scenario.
pub fn resolve_scenario(arg: &str, dir: &Path) -> Result<PathBuf, Failure> {
    let direct = PathBuf::from(arg);
    if direct.is_file() {
        return Ok(direct);
    }
    let bundled = dir.join(format!("{}.toml", arg.trim_end_matches(".toml")));
    if bundled.is_file() {
        return Ok(bundled);
    }
    Err(Failure::Io(format!("no scenario file {arg:?} (and no bundled scenario of that name in {})", dir.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ListingStatus {
    Valid { description: String },
    Invalid { error: String },
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListingEntry {
    pub name: String,
    pub path: PathBuf,
    pub status: ListingStatus,
}

/// Every bundled scenario with its description, or why it cannot be used.
pub fn list_scenarios(dir: &Path) -> Vec<ListingEntry> {
    BUNDLED_SCENARIOS
        .iter()
        .map(|&name| {
            let path = dir.join(format!("{name}.toml"));
            let status = if !path.is_file() {
                ListingStatus::Missing
            } else {
                match load_scenario(&path) {
                    Ok(s) => ListingStatus::Valid { description: s.description },
                    Err(e) => ListingStatus::Invalid { error: e.to_string() },
                }
            };
            ListingEntry { name: name.to_string(), path, status }
        })
        .collect()
}

#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub report: String,
    pub tolerances: Vec<ToleranceResult>,
}

impl Outcome {
    pub fn failed_tolerances(&self) -> usize {
        self.tolerances.iter().filter(|r| !r.pass).count()
    }
}

/// Runs every (variant, method) pair on `threads` workers (0: one per core)
/// and writes the outputs. Variant outputs go to `out_dir/<variant>/` when the
/// scenario has named variants. Nothing is written if any method fails.
pub fn execute(scenario: &Scenario, out_dir: &Path, threads: usize) -> Result<Outcome, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
    let jobs: Vec<_> = scenario.variants.iter().flat_map(|v| scenario.methods.iter().map(move |&m| (v, m))).collect();
    let results: Vec<Result<MethodRun, Failure>> =
        pool.install(|| jobs.par_iter().map(|&(v, m)| run_method(scenario, v, m)).collect());
    let mut runs: Vec<(String, Vec<MethodRun>)> = Vec::new();
    for ((variant, _), result) in jobs.iter().zip(results) {
        let run = result?;
        match runs.last_mut() {
            Some((name, list)) if *name == variant.name => list.push(run),
            _ => runs.push((variant.name.clone(), vec![run])),
        }
    }

    let mut files = Vec::new();
    for (name, variant_runs) in &runs {
        let dir = if name.is_empty() { out_dir.to_path_buf() } else { out_dir.join(name) };
        for run in variant_runs {
            files.extend(output::write_method(&dir, scenario.window, run)?);
        }
    }
    let tolerances = check_tolerances(scenario, &runs);
    let report = render_report(scenario, &runs, &tolerances);
    if scenario.methods.len() >= 2 || !scenario.tolerances.is_empty() {
        let path = out_dir.join("report.txt");
        output::write_text(&path, &report)?;
        files.push(path);
    }
    Ok(Outcome { files, report, tolerances })
}
