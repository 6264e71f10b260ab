//! Plain-text CSV output. Numbers are written as `{:.16e}` (17 significant
//! digits); undefined values are empty fields.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use blochnh::quantum::SiteWindow;
use blochnh::record::ObservableRecord;

use crate::error::Failure;
use crate::methods::MethodRun;

pub const OBSERVABLES_HEADER: &str = "t,P,logP,n_mean,p_circular,n_var,sigma_pp,sigma_pq,sigma_qq";
pub const DENSITY_HEADER: &str = "t,n,prob_renorm";

fn field(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.16e}"))
}

fn observables_row(r: &ObservableRecord) -> String {
    let fields = [r.norm, r.log_norm, r.n_mean, r.p_circular, r.n_var, r.sigma_pp, r.sigma_pq, r.sigma_qq];
    let mut line = format!("{:.16e}", r.t);
    for v in fields {
        line.push(',');
        line.push_str(&field(v));
    }
    line
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path).map_err(io(path))?);
    body(&mut w).and_then(|_| w.flush()).map_err(io(path))
}

/// Writes `observables_<method>.csv` and, where defined, `density_<method>.csv`
/// into `dir`; returns the written paths.
pub fn write_method(dir: &Path, window: SiteWindow, run: &MethodRun) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let obs = dir.join(format!("observables_{}.csv", run.method));
    write_file(&obs, |w| {
        writeln!(w, "{OBSERVABLES_HEADER}")?;
        for r in &run.records {
            writeln!(w, "{}", observables_row(r))?;
        }
        Ok(())
    })?;
    let mut written = vec![obs];
    if let Some(density) = &run.density {
        let path = dir.join(format!("density_{}.csv", run.method));
        write_file(&path, |w| {
            writeln!(w, "{DENSITY_HEADER}")?;
            for (r, row) in run.records.iter().zip(density) {
                for (n, p) in window.sites().zip(row) {
                    writeln!(w, "{:.16e},{n},{p:.16e}", r.t)?;
                }
            }
            Ok(())
        })?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io(parent))?;
    }
    fs::write(path, text).map_err(io(path))
}
