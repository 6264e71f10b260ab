use num_complex::Complex64 as C64;

use super::observables::observables;
use super::state::{LatticeState, SiteWindow};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Default tolerated `max(|c_edge|) / max|c|`.
pub const DEFAULT_LEAK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    /// Largest RK4 step; each output interval is split into equal steps no longer than this.
    pub dt: f64,
    pub leak_threshold: f64,
    /// Rerun at `dt/2` and require the final observables to agree to `convergence_tol`.
    pub check_convergence: bool,
    pub convergence_tol: f64,
}

impl DirectOptions {
    /// `dt = min(1e-3, 0.05 / ‖H‖_∞)` for the truncated Hamiltonian.
    pub fn for_system(params: &ModelParams, window: SiteWindow) -> Self {
        let edge = window.n_min().unsigned_abs().max(window.n_max().unsigned_abs()) as f64;
        let row = params.g1().norm() + params.g2().norm() + 2.0 * params.force().abs() * edge;
        Self {
            dt: 1e-3f64.min(0.05 / row),
            leak_threshold: DEFAULT_LEAK_THRESHOLD,
            check_convergence: false,
            convergence_tol: 1e-8,
        }
    }
}

/// Integrates `i ċ_n = g1 c_{n+1} + g2 c_{n-1} + 2F n c_n` with hard walls
/// and returns the state at every time of `times` (ascending, starting at or after 0).
pub fn propagate_direct(
    initial: &LatticeState,
    params: &ModelParams,
    times: &[f64],
    opts: &DirectOptions,
) -> Result<Vec<LatticeState>> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {}", opts.dt)));
    }
    check_times(times)?;
    let out = run(initial, params, times, opts.dt, opts.leak_threshold)?;
    if opts.check_convergence && !times.is_empty() {
        let fine = run(initial, params, &times[times.len() - 1..], opts.dt / 2.0, opts.leak_threshold)?;
        let change = observable_change(&out[out.len() - 1], &fine[0]);
        if !(change <= opts.convergence_tol) {
            return Err(Error::NotConverged { change, limit: opts.convergence_tol });
        }
    }
    Ok(out)
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in times {
        if !(t.is_finite() && t >= prev) {
            return Err(Error::InvalidArgument(format!(
                "output times must be finite, non-negative and ascending (got {t} after {prev})"
            )));
        }
        prev = t;
    }
    Ok(())
}

/// Largest change in `ln P`, `⟨n⟩`, `var n` and `⟨K⟩` between two states.
pub(crate) fn observable_change(a: &LatticeState, b: &LatticeState) -> f64 {
    let (oa, ob) = (observables(a), observables(b));
    [
        (oa.log_norm - ob.log_norm).abs(),
        (oa.n_mean - ob.n_mean).abs(),
        (oa.n_var - ob.n_var).abs(),
        (oa.k_mean - ob.k_mean).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn run(
    initial: &LatticeState,
    params: &ModelParams,
    times: &[f64],
    dt: f64,
    leak_threshold: f64,
) -> Result<Vec<LatticeState>> {
    let mut rk = Rk4::new(params, initial.window());
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt - 1e-9).ceil().max(1.0) as u64;
            let h = span / steps as f64;
            for k in 0..steps {
                rk.step(state.amps_mut(), h);
                if k % 256 == 255 {
                    state.renormalize();
                    check_state(&state, t + (k + 1) as f64 * h, leak_threshold)?;
                }
            }
            state.renormalize();
        }
        t = target;
        check_state(&state, t, leak_threshold)?;
        out.push(state.clone());
    }
    Ok(out)
}

fn check_state(state: &LatticeState, t: f64, threshold: f64) -> Result<()> {
    if !state.is_finite() {
        return Err(Error::NonFinite { t });
    }
    let leak = state.boundary_leak();
    if leak > threshold {
        return Err(Error::BoundaryLeak { t, leak, threshold });
    }
    Ok(())
}

struct Rk4 {
    g1: C64,
    g2: C64,
    diag: Vec<f64>,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl Rk4 {
    fn new(params: &ModelParams, window: SiteWindow) -> Self {
        let len = window.len();
        let diag = window.sites().map(|n| 2.0 * params.force() * n as f64).collect();
        let zeros = vec![C64::new(0.0, 0.0); len];
        Self {
            g1: params.g1(),
            g2: params.g2(),
            diag,
            k: [zeros.clone(), zeros.clone(), zeros.clone(), zeros.clone()],
            tmp: zeros,
        }
    }

    /// `out = -i H c`.
    fn rhs(g1: C64, g2: C64, diag: &[f64], c: &[C64], out: &mut [C64]) {
        let len = c.len();
        let zero = C64::new(0.0, 0.0);
        for i in 0..len {
            let up = if i + 1 < len { c[i + 1] } else { zero };
            let down = if i > 0 { c[i - 1] } else { zero };
            let hc = g1 * up + g2 * down + c[i] * diag[i];
            out[i] = C64::new(hc.im, -hc.re);
        }
    }

    fn step(&mut self, c: &mut [C64], h: f64) {
        let (g1, g2) = (self.g1, self.g2);
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        Self::rhs(g1, g2, &self.diag, c, k1);
        for i in 0..c.len() {
            tmp[i] = c[i] + k1[i] * (0.5 * h);
        }
        Self::rhs(g1, g2, &self.diag, tmp, k2);
        for i in 0..c.len() {
            tmp[i] = c[i] + k2[i] * (0.5 * h);
        }
        Self::rhs(g1, g2, &self.diag, tmp, k3);
        for i in 0..c.len() {
            tmp[i] = c[i] + k3[i] * h;
        }
        Self::rhs(g1, g2, &self.diag, tmp, k4);
        let w = h / 6.0;
        for i in 0..c.len() {
            c[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::{gaussian_state, site_state};
    use approx::assert_relative_eq;

    #[test]
    fn hermitian_flow_conserves_norm() {
        let p = ModelParams::hatano_nelson(1.0, 0.0, 0.5).unwrap();
        let w = SiteWindow::symmetric(60).unwrap();
        let s = gaussian_state(w, C64::new(0.1, 0.0), 0.0, 1.0).unwrap();
        let out = propagate_direct(&s, &p, &[0.0, 1.0, 3.0], &DirectOptions::for_system(&p, w)).unwrap();
        assert_eq!(out[0], s);
        for st in &out {
            assert_relative_eq!(st.log_norm_sqr(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_force_hopping_free_is_phase() {
        // g1 = g2 = 0: c_n(t) = e^{-2iFnt} c_n(0).
        let p = ModelParams::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.3).unwrap();
        let w = SiteWindow::symmetric(5).unwrap();
        let s = site_state(w, 2).unwrap();
        let out = propagate_direct(&s, &p, &[1.7], &DirectOptions::for_system(&p, w)).unwrap();
        let expect = C64::from_polar(1.0, -2.0 * 0.3 * 2.0 * 1.7);
        assert!((out[0].amplitude(2) - expect).norm() < 1e-12);
    }

    #[test]
    fn leak_is_detected() {
        let p = ModelParams::hatano_nelson(1.0, 0.0, 0.0).unwrap();
        let w = SiteWindow::symmetric(10).unwrap();
        let s = site_state(w, 0).unwrap();
        let err = propagate_direct(&s, &p, &[20.0], &DirectOptions::for_system(&p, w)).unwrap_err();
        assert!(matches!(err, Error::BoundaryLeak { .. }));
    }

    #[test]
    fn rejects_descending_times() {
        let p = ModelParams::hatano_nelson(1.0, 0.0, 0.5).unwrap();
        let w = SiteWindow::symmetric(10).unwrap();
        let s = site_state(w, 0).unwrap();
        assert!(propagate_direct(&s, &p, &[1.0, 0.5], &DirectOptions::for_system(&p, w)).is_err());
    }
}
