//! Weighted ensembles of zero-width trajectories. For a state localised on
//! one site the ensemble averages of `1`, `N` and `K` are exact.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::classical::{narrow_limit_closed_form, GaussianTrajectory};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quantum::{observables, LatticeState, CIRCULAR_MEAN_FLOOR};

pub const MIN_MEMBERS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub members: Vec<GaussianTrajectory>,
    /// Quadrature weights; they sum to one and do not change in time. The
    /// effective weight of member `j` is `weights[j] · e^{log_p_j}`.
    pub weights: Vec<f64>,
    pub p0: Vec<f64>,
}

fn check_count(member_count: usize) -> Result<()> {
    if member_count < MIN_MEMBERS {
        return Err(Error::InvalidArgument(format!(
            "ensemble needs at least {MIN_MEMBERS} members, got {member_count}"
        )));
    }
    Ok(())
}

fn uniform_momenta(member_count: usize) -> Vec<f64> {
    (0..member_count).map(|j| TAU * j as f64 / member_count as f64).collect()
}

/// Plane waves on `p0_j = 2πj/M` with equal weights, all starting at `site`.
pub fn ensemble_from_site(site: i64, member_count: usize) -> Result<Ensemble> {
    check_count(member_count)?;
    let p0 = uniform_momenta(member_count);
    Ok(Ensemble {
        members: p0.iter().map(|&p| GaussianTrajectory::plane_wave(site as f64, p, 0.0, 0.0)).collect(),
        weights: vec![1.0 / member_count as f64; member_count],
        p0,
    })
}

/// Weights `∝ |φ(p0_j)|²` with `φ(κ) = Σ c_n e^{-inκ}`; members start at `⟨N⟩`
/// with the state's `ln P`.
pub fn ensemble_from_gaussian(state: &LatticeState, member_count: usize) -> Result<Ensemble> {
    check_count(member_count)?;
    let phi = state.momentum_samples(member_count);
    let raw: Vec<f64> = phi.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let obs = observables(state);
    let p0 = uniform_momenta(member_count);
    Ok(Ensemble {
        members: p0.iter().map(|&p| GaussianTrajectory::plane_wave(obs.n_mean, p, 0.0, obs.log_norm)).collect(),
        weights: raw.iter().map(|w| w / total).collect(),
        p0,
    })
}

/// Advances every member with the narrow-limit closed forms.
pub fn evolve_ensemble(ensemble: &Ensemble, params: &ModelParams, times: &[f64]) -> Result<Vec<Ensemble>> {
    crate::quantum::check_times(times)?;
    times
        .iter()
        .map(|&t| {
            let members = ensemble
                .members
                .iter()
                .map(|m| {
                    let s = narrow_limit_closed_form(params, m.q, m.p, m.sigma_pq, t)?;
                    Ok(GaussianTrajectory::plane_wave(s.q, s.p, m.sigma_pq, m.log_p + s.log_p))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Ensemble { members, weights: ensemble.weights.clone(), p0: ensemble.p0.clone() })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleAverages {
    pub log_p_total: f64,
    pub p_total: f64,
    pub q_mean: f64,
    /// Weighted spread of member positions (not an exact observable).
    pub q_var: f64,
    pub k_mean: C64,
    pub p_circular: Option<f64>,
}

/// Norm-weighted averages, accumulated relative to the largest log-weight.
pub fn ensemble_averages(snapshot: &Ensemble) -> Result<EnsembleAverages> {
    let logs: Vec<f64> = snapshot
        .weights
        .iter()
        .zip(&snapshot.members)
        .map(|(&w, m)| if w > 0.0 { w.ln() + m.log_p } else { f64::NEG_INFINITY })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let (mut sum, mut q, mut q2, mut k) = (0.0, 0.0, 0.0, C64::new(0.0, 0.0));
    for (l, m) in logs.iter().zip(&snapshot.members) {
        let w = (l - top).exp();
        sum += w;
        q += w * m.q;
        q2 += w * m.q * m.q;
        k += C64::from_polar(w, m.p);
    }
    let q_mean = q / sum;
    let k_mean = k / sum;
    let log_p_total = top + sum.ln();
    Ok(EnsembleAverages {
        log_p_total,
        p_total: log_p_total.exp(),
        q_mean,
        q_var: (q2 / sum - q_mean * q_mean).max(0.0),
        k_mean,
        p_circular: (k_mean.norm() > CIRCULAR_MEAN_FLOOR).then(|| k_mean.arg()),
    })
}
