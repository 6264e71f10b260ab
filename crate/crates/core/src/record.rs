//! Method-independent observable rows for time series output and comparison.

use std::f64::consts::{PI, TAU};

use crate::classical::{GaussianTrajectory, NarrowSolution};
use crate::ensemble::EnsembleAverages;
use crate::quantum::QuantumObservables;

/// One sample of a time series. Fields a method does not define are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObservableRecord {
    pub t: f64,
    pub norm: Option<f64>,
    pub log_norm: Option<f64>,
    pub n_mean: Option<f64>,
    pub p_circular: Option<f64>,
    pub n_var: Option<f64>,
    pub sigma_pp: Option<f64>,
    pub sigma_pq: Option<f64>,
    pub sigma_qq: Option<f64>,
}

impl ObservableRecord {
    pub fn from_quantum(t: f64, o: &QuantumObservables) -> Self {
        Self {
            t,
            norm: Some(o.norm),
            log_norm: Some(o.log_norm),
            n_mean: Some(o.n_mean),
            p_circular: o.p_circular,
            n_var: Some(o.n_var),
            ..Self::default()
        }
    }

    /// The Gaussian `Σ_qq/2` is reported as the position variance.
    pub fn from_trajectory(t: f64, g: &GaussianTrajectory) -> Self {
        Self {
            t,
            norm: Some(g.log_p.exp()),
            log_norm: Some(g.log_p),
            n_mean: Some(g.q),
            p_circular: Some(g.p),
            n_var: Some(0.5 * g.sigma_qq),
            sigma_pp: Some(g.sigma_pp),
            sigma_pq: Some(g.sigma_pq),
            sigma_qq: Some(g.sigma_qq),
        }
    }

    pub fn from_narrow(t: f64, s: &NarrowSolution, log_p0: f64, sigma_pq: f64) -> Self {
        let log_p = log_p0 + s.log_p;
        Self {
            t,
            norm: Some(log_p.exp()),
            log_norm: Some(log_p),
            n_mean: Some(s.q),
            p_circular: Some(s.p),
            sigma_pp: Some(0.0),
            sigma_pq: Some(sigma_pq),
            ..Self::default()
        }
    }

    pub fn from_ensemble(t: f64, a: &EnsembleAverages) -> Self {
        Self {
            t,
            norm: Some(a.p_total),
            log_norm: Some(a.log_p_total),
            n_mean: Some(a.q_mean),
            p_circular: a.p_circular,
            n_var: Some(a.q_var),
            ..Self::default()
        }
    }
}

/// Removes `2π` jumps between consecutive defined phases so that every step
/// is smaller than `π` in magnitude. Undefined samples are kept and skipped.
pub fn unwrap_phases(phases: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut prev: Option<f64> = None;
    phases
        .iter()
        .map(|&v| {
            let v = v?;
            let out = match prev {
                None => v,
                Some(p) => {
                    let mut d = (v - p).rem_euclid(TAU);
                    if d >= PI {
                        d -= TAU;
                    }
                    p + d
                }
            };
            prev = Some(out);
            Some(out)
        })
        .collect()
}

/// Unwraps the `p_circular` column of a series in place.
pub fn unwrap_records(records: &mut [ObservableRecord]) {
    let phases: Vec<_> = records.iter().map(|r| r.p_circular).collect();
    for (r, p) in records.iter_mut().zip(unwrap_phases(&phases)) {
        r.p_circular = p;
    }
}
