//! Cross-method deviations and declared-tolerance checks.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use blochnh::record::ObservableRecord;

use crate::methods::MethodRun;
use crate::scenario::{Observable, Reference, Scenario, Tolerance};

pub fn series_value(r: &ObservableRecord, o: Observable) -> Option<f64> {
    match o {
        Observable::P => r.norm,
        Observable::LogP => r.log_norm,
        Observable::NMean => r.n_mean,
        Observable::PCircular => r.p_circular,
        Observable::NVar => r.n_var,
        Observable::SigmaPp => r.sigma_pp,
        Observable::SigmaPq => r.sigma_pq,
        Observable::SigmaQq => r.sigma_qq,
        Observable::Density | Observable::Amplitude => None,
    }
}

/// Phases are compared modulo `2π`.
fn difference(o: Observable, a: f64, b: f64) -> f64 {
    let d = a - b;
    if o == Observable::PCircular {
        let w = (d + PI).rem_euclid(TAU) - PI;
        w.abs()
    } else {
        d.abs()
    }
}

/// Per-sample `(t, |a - b|, |b|)` where both sides are defined.
fn samples(o: Observable, a: &MethodRun, b: &Reference, runs: &[MethodRun]) -> Vec<(f64, f64, f64)> {
    let other = |m| runs.iter().find(|r| r.method == m).expect("tolerance methods were run");
    match (o.is_series(), b) {
        (true, Reference::Value(v)) => {
            a.records.iter().filter_map(|r| series_value(r, o).map(|x| (r.t, difference(o, x, *v), v.abs()))).collect()
        }
        (true, Reference::Method(m)) => a
            .records
            .iter()
            .zip(&other(*m).records)
            .filter_map(|(ra, rb)| {
                let (x, y) = (series_value(ra, o)?, series_value(rb, o)?);
                Some((ra.t, difference(o, x, y), y.abs()))
            })
            .collect(),
        (false, Reference::Method(m)) => {
            let rb = other(*m);
            let t = a.records.iter().map(|r| r.t);
            match o {
                Observable::Amplitude => t
                    .zip(a.states.iter().zip(&rb.states))
                    .map(|(t, (x, y))| (t, x.max_amplitude_deviation(y), 1.0))
                    .collect(),
                _ => t
                    .zip(a.density.iter().flatten().zip(rb.density.iter().flatten()))
                    .map(|(t, (x, y))| {
                        let d = x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                        (t, d, 1.0)
                    })
                    .collect(),
            }
        }
        (false, Reference::Value(_)) => Vec::new(),
    }
}

#[derive(Debug, Clone)]
pub struct ToleranceResult {
    pub index: usize,
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

fn describe_bound(t: &Tolerance) -> String {
    match (t.abs, t.rel) {
        (Some(a), Some(r)) => format!("abs {a:.1e} | rel {r:.1e}"),
        (Some(a), None) => format!("abs {a:.1e}"),
        (None, Some(r)) => format!("rel {r:.1e}"),
        (None, None) => unreachable!("validated: a bound is given"),
    }
}

/// Evaluates every declared tolerance against the runs of every variant it applies to.
pub fn check_tolerances(scenario: &Scenario, runs: &[(String, Vec<MethodRun>)]) -> Vec<ToleranceResult> {
    scenario
        .tolerances
        .iter()
        .enumerate()
        .map(|(index, tol)| {
            let label = format!(
                "tolerance[{index}] {} {} vs {}{}",
                tol.observable.name(),
                tol.a,
                tol.b,
                tol.variant.as_ref().map_or(String::new(), |v| format!(" (variant {v})"))
            );
            let mut worst: Option<(f64, f64, String)> = None; // (excess ratio, |Δ|, where)
            let mut count = 0usize;
            for (name, variant_runs) in runs {
                if tol.variant.as_ref().is_some_and(|v| v != name) {
                    continue;
                }
                let a = variant_runs.iter().find(|r| r.method == tol.a).expect("tolerance methods were run");
                for (t, d, scale) in samples(tol.observable, a, &tol.b, variant_runs) {
                    if tol.t_range.is_some_and(|(lo, hi)| t < lo || t > hi) {
                        continue;
                    }
                    count += 1;
                    let limit = tol.abs.unwrap_or(0.0).max(tol.rel.map_or(0.0, |r| r * scale));
                    // NaN deviations count as failures.
                    let ratio = if d.is_nan() {
                        f64::INFINITY
                    } else if limit > 0.0 {
                        d / limit
                    } else if d == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    let better = worst.as_ref().is_none_or(|w| ratio > w.0 || (ratio == w.0 && d > w.1));
                    if better {
                        let at =
                            if name.is_empty() { format!("t = {t:.6}") } else { format!("t = {t:.6}, variant {name}") };
                        worst = Some((ratio, d, at));
                    }
                }
            }
            match worst {
                None => ToleranceResult { index, label, pass: false, detail: "no comparable samples".into() },
                Some((ratio, d, at)) => ToleranceResult {
                    index,
                    label,
                    pass: ratio <= 1.0,
                    detail: format!(
                        "worst |delta| {d:.3e} at {at} over {count} samples (limit {})",
                        describe_bound(tol)
                    ),
                },
            }
        })
        .collect()
}

/// Maximum absolute and relative deviation of `o` between two runs.
fn pair_deviation(o: Observable, a: &MethodRun, b: &MethodRun) -> Option<(f64, f64, usize)> {
    let s: Vec<_> = if o.is_series() {
        a.records
            .iter()
            .zip(&b.records)
            .filter_map(|(ra, rb)| {
                let (x, y) = (series_value(ra, o)?, series_value(rb, o)?);
                let d = difference(o, x, y);
                let scale = x.abs().max(y.abs());
                Some((d, if d == 0.0 { 0.0 } else { d / scale }))
            })
            .collect()
    } else {
        if !(a.method.is_wavefunction() && b.method.is_wavefunction()) {
            return None;
        }
        samples(o, a, &Reference::Method(b.method), std::slice::from_ref(b))
            .into_iter()
            .map(|(_, d, _)| (d, d))
            .collect()
    };
    if s.is_empty() {
        return None;
    }
    let max_abs = s.iter().map(|x| x.0).fold(0.0, f64::max);
    let max_rel = s.iter().map(|x| x.1).fold(0.0, f64::max);
    Some((max_abs, max_rel, s.len()))
}

pub fn render_report(scenario: &Scenario, runs: &[(String, Vec<MethodRun>)], results: &[ToleranceResult]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}", scenario.name);
    if !scenario.description.is_empty() {
        let _ = writeln!(out, "{}", scenario.description);
    }
    let _ = writeln!(
        out,
        "window [{}, {}], {} output times in [0, {}]",
        scenario.window.n_min(),
        scenario.window.n_max(),
        scenario.times.len(),
        scenario.times.last().copied().unwrap_or(0.0)
    );
    for (name, variant_runs) in runs {
        let _ = writeln!(out);
        let _ = writeln!(out, "== variant {} ==", if name.is_empty() { "(single)" } else { name });
        for r in variant_runs {
            for note in &r.notes {
                let _ = writeln!(out, "note: {}: {note}", r.method);
            }
        }
        let _ = writeln!(
            out,
            "{:<12} {:<26} {:>12} {:>12} {:>8}",
            "observable", "methods", "max_abs", "max_rel", "samples"
        );
        for o in Observable::ALL {
            for (i, a) in variant_runs.iter().enumerate() {
                for b in &variant_runs[i + 1..] {
                    if let Some((abs, rel, n)) = pair_deviation(o, a, b) {
                        let pair = format!("{} vs {}", a.method, b.method);
                        let _ = writeln!(out, "{:<12} {:<26} {:>12.3e} {:>12.3e} {:>8}", o.name(), pair, abs, rel, n);
                    }
                }
            }
        }
    }
    if !results.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "== declared tolerances ==");
        for r in results {
            let _ = writeln!(out, "{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.label, r.detail);
        }
        let failed = results.iter().filter(|r| !r.pass).count();
        let _ = writeln!(out, "{} of {} tolerances passed", results.len() - failed, results.len());
    }
    out
}
