//! Quasiclassical Gaussian dynamics: phase-space centre `(q, p)`, the scaled
//! covariance `Σ` (det Σ = 1 for a minimal-uncertainty packet) and `ln P`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{HamiltonianSplit, ModelParams};

/// Integration halts once `Σ_pp` exceeds this.
pub const SIGMA_PP_BLOW_UP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTrajectory {
    pub q: f64,
    /// Quasimomentum, not reduced modulo 2π.
    pub p: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
    pub sigma_qq: f64,
    pub log_p: f64,
}

impl GaussianTrajectory {
    /// Packet `exp(-β(n-q0)² + i p0 (n-q0))` with `ln P = 0`.
    pub fn from_beta(beta: C64, q0: f64, p0: f64) -> Result<Self> {
        let (sigma_pp, sigma_pq, sigma_qq) = beta_to_sigma(beta)?;
        Ok(Self { q: q0, p: p0, sigma_pp, sigma_pq, sigma_qq, log_p: 0.0 })
    }

    /// Zero momentum width (`Σ_pp = 0`, `Σ_qq = ∞`); evolved by
    /// [`narrow_limit_closed_form`]. The determinant is not defined.
    pub fn plane_wave(q0: f64, p0: f64, sigma_pq: f64, log_p: f64) -> Self {
        Self { q: q0, p: p0, sigma_pp: 0.0, sigma_pq, sigma_qq: f64::INFINITY, log_p }
    }

    pub fn det_sigma(&self) -> f64 {
        self.sigma_pp * self.sigma_qq - self.sigma_pq * self.sigma_pq
    }

    fn to_array(self) -> [f64; 6] {
        [self.p, self.q, self.sigma_pp, self.sigma_pq, self.sigma_qq, self.log_p]
    }

    fn from_array(y: [f64; 6]) -> Self {
        let [p, q, sigma_pp, sigma_pq, sigma_qq, log_p] = y;
        Self { q, p, sigma_pp, sigma_pq, sigma_qq, log_p }
    }
}

/// Width parameter of `exp(-β(n-q0)² + ...)`, `Re β > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParameter(C64);

impl BetaParameter {
    pub fn new(beta: C64) -> Result<Self> {
        if !(beta.re > 0.0 && beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta needs a positive real part, got {beta}")));
        }
        Ok(Self(beta))
    }

    /// Inverse of [`beta_to_sigma`]: `β = (1 - iΣ_pq) / (2Σ_qq)`.
    pub fn from_sigma(sigma_qq: f64, sigma_pq: f64) -> Result<Self> {
        if !(sigma_qq > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma_qq must be positive, got {sigma_qq}")));
        }
        Self::new(C64::new(1.0, -sigma_pq) / (2.0 * sigma_qq))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn to_sigma(&self) -> (f64, f64, f64) {
        let b = self.0;
        let sigma_qq = 0.5 / b.re;
        let sigma_pq = -b.im / b.re;
        ((1.0 + sigma_pq * sigma_pq) / sigma_qq, sigma_pq, sigma_qq)
    }
}

/// `(Σ_pp, Σ_pq, Σ_qq)` with `Σ_qq = 1/(2 Re β)`, `Σ_pq = -Im β / Re β` and
/// `det Σ = 1`.
pub fn beta_to_sigma(beta: C64) -> Result<(f64, f64, f64)> {
    Ok(BetaParameter::new(beta)?.to_sigma())
}

/// Right-hand side of the six Gaussian equations of motion.
pub fn rhs_full(params: &ModelParams, traj: &GaussianTrajectory) -> GaussianTrajectory {
    let (gp, gm) = (params.g_plus(), params.g_minus());
    let (s, c) = traj.p.sin_cos();
    let a = gp.im * s - gm.re * c; // ∂H_I/∂p
    let b = gp.im * c + gm.re * s; // ∂²H_I/∂p²
    let (spp, spq) = (traj.sigma_pp, traj.sigma_pq);
    GaussianTrajectory {
        p: -2.0 * params.force() - a * spp,
        q: -gp.re * s - gm.im * c - a * spq,
        sigma_pp: -b * spp * spp,
        sigma_pq: (-gp.re * c + gm.im * s - b * spq) * spp,
        sigma_qq: -2.0 * (gp.re * c - gm.im * s) * spq + b * (1.0 - spq * spq),
        log_p: b * (2.0 - 0.5 * spp),
    }
}

/// The same equations assembled from gradients and Hessians of `H_R`, `H_I`:
/// `ż = Ω∇H_R - Σ∇H_I`, `Σ̇ = ΩH_R''Σ - ΣH_R''Ω - ΩH_I''Ω - ΣH_I''Σ`,
/// `d ln P/dt = -2H_I + ½ Tr(ΩH_I''ΩΣ⁻¹)`.
pub fn rhs_from_split(split: &HamiltonianSplit, traj: &GaussianTrajectory) -> Result<GaussianTrajectory> {
    type M2 = [[f64; 2]; 2];
    fn mul(a: &M2, b: &M2) -> M2 {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }
    let det = traj.det_sigma();
    if !(det > 0.0) {
        return Err(Error::SingularCovariance { det });
    }
    let (p, q) = (traj.p, traj.q);
    let omega: M2 = [[0.0, -1.0], [1.0, 0.0]];
    let sigma: M2 = [[traj.sigma_pp, traj.sigma_pq], [traj.sigma_pq, traj.sigma_qq]];
    let sigma_inv: M2 = [[traj.sigma_qq / det, -traj.sigma_pq / det], [-traj.sigma_pq / det, traj.sigma_pp / det]];
    let (gr, gi) = (split.grad_r(p, q), split.grad_i(p));
    let (hr, hi) = (split.hess_r(p, q), split.hess_i(p));

    let zdot =
        [-gr[1] - (sigma[0][0] * gi[0] + sigma[0][1] * gi[1]), gr[0] - (sigma[1][0] * gi[0] + sigma[1][1] * gi[1])];
    let t1 = mul(&mul(&omega, &hr), &sigma);
    let t2 = mul(&mul(&sigma, &hr), &omega);
    let t3 = mul(&mul(&omega, &hi), &omega);
    let t4 = mul(&mul(&sigma, &hi), &sigma);
    let sd = |i: usize, j: usize| t1[i][j] - t2[i][j] - t3[i][j] - t4[i][j];
    let tr = mul(&mul(&mul(&omega, &hi), &omega), &sigma_inv);
    Ok(GaussianTrajectory {
        p: zdot[0],
        q: zdot[1],
        sigma_pp: sd(0, 0),
        sigma_pq: sd(0, 1),
        sigma_qq: sd(1, 1),
        log_p: -2.0 * split.h_i(p) + 0.5 * (tr[0][0] + tr[1][1]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOptions {
    pub dt: f64,
    /// Rerun at `dt/2` and require the final state to agree to `convergence_tol`.
    pub check_convergence: bool,
    pub convergence_tol: f64,
}

impl Default for ClassicalOptions {
    fn default() -> Self {
        Self { dt: 2e-4, check_convergence: false, convergence_tol: 1e-8 }
    }
}

/// RK4 integration of [`rhs_full`], sampled at each of `times` (ascending, ≥ 0).
pub fn integrate_classical(
    params: &ModelParams,
    traj0: &GaussianTrajectory,
    times: &[f64],
    opts: &ClassicalOptions,
) -> Result<Vec<GaussianTrajectory>> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {}", opts.dt)));
    }
    crate::quantum::check_times(times)?;
    let out = run(params, traj0, times, opts.dt)?;
    if opts.check_convergence && !times.is_empty() {
        let fine = run(params, traj0, &times[times.len() - 1..], opts.dt / 2.0)?;
        let (a, b) = (out[out.len() - 1].to_array(), fine[0].to_array());
        let change = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if !(change <= opts.convergence_tol) {
            return Err(Error::NotConverged { change, limit: opts.convergence_tol });
        }
    }
    Ok(out)
}

fn run(params: &ModelParams, traj0: &GaussianTrajectory, times: &[f64], dt: f64) -> Result<Vec<GaussianTrajectory>> {
    let f = |y: [f64; 6]| rhs_full(params, &GaussianTrajectory::from_array(y)).to_array();
    let axpy = |y: &[f64; 6], k: &[f64; 6], h: f64| std::array::from_fn::<f64, 6, _>(|i| y[i] + h * k[i]);
    let mut y = traj0.to_array();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt - 1e-9).ceil().max(1.0) as u64;
            let h = span / steps as f64;
            for k in 0..steps {
                let k1 = f(y);
                let k2 = f(axpy(&y, &k1, 0.5 * h));
                let k3 = f(axpy(&y, &k2, 0.5 * h));
                let k4 = f(axpy(&y, &k3, h));
                for i in 0..6 {
                    y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
                }
                let sigma_pp = y[2];
                if !(sigma_pp.abs() <= SIGMA_PP_BLOW_UP) || y.iter().any(|v| !v.is_finite()) {
                    return Err(Error::SigmaBlowUp { t: t + (k + 1) as f64 * h, sigma_pp });
                }
            }
        }
        t = target;
        out.push(GaussianTrajectory::from_array(y));
    }
    Ok(out)
}

/// Centre and norm at `Σ_pp = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NarrowSolution {
    pub p: f64,
    pub q: f64,
    /// `ln P(t) - ln P(0)`.
    pub log_p: f64,
}

/// Closed-form zero-width dynamics with constant `Σ_pq`: `p = p0 - 2Ft`,
/// `q = q0 - ((Re g+ + Im g+ Σ_pq)/2F)(cos p - cos p0) + ((Im g- - Re g- Σ_pq)/2F)(sin p - sin p0)`,
/// `ln P = -(Im g+/F)(sin p - sin p0) + (Re g-/F)(cos p - cos p0)`.
pub fn narrow_limit_closed_form(
    params: &ModelParams,
    q0: f64,
    p0: f64,
    sigma_pq: f64,
    t: f64,
) -> Result<NarrowSolution> {
    let f = params.force();
    if f == 0.0 {
        return Err(Error::NoLadder);
    }
    let (gp, gm) = (params.g_plus(), params.g_minus());
    let p = p0 - 2.0 * f * t;
    // Differences via product formulas: exact zero at t = 0 and no cancellation for small t.
    let (sf, mid) = ((f * t).sin(), p0 - f * t);
    let dcos = 2.0 * sf * mid.sin(); // cos p - cos p0
    let dsin = -2.0 * sf * mid.cos(); // sin p - sin p0
    Ok(NarrowSolution {
        p,
        q: q0 - (gp.re + gp.im * sigma_pq) / (2.0 * f) * dcos + (gm.im - gm.re * sigma_pq) / (2.0 * f) * dsin,
        log_p: -gp.im / f * dsin + gm.re / f * dcos,
    })
}

/// First-order (in `Σ_pp(0)`) momentum and width for the Hatano-Nelson and
/// imaginary-coupling lattices. Returns `(p, Σ_pp)`.
pub fn perturbative_p(params: &ModelParams, p0: f64, sigma_pp0: f64, t: f64) -> Result<(f64, f64)> {
    let f = params.force();
    if f == 0.0 {
        return Err(Error::NoLadder);
    }
    let drift = p0 - 2.0 * f * t;
    let (denominator, correction): (f64, Box<dyn Fn(f64) -> f64>) = if let Some((g, mu)) = params.hatano_nelson_parts()
    {
        let a = g * mu.sinh() / f;
        (
            1.0 + a * ((2.0 * f * t - p0).cos() - p0.cos()) * sigma_pp0,
            Box::new(move |s: f64| a * (s * (p0 - 2.0 * f * t).sin() - sigma_pp0 * p0.sin())),
        )
    } else if let Some(g) = params.imaginary_coupling_part() {
        let a = g / f;
        (
            1.0 - a * ((p0 - 2.0 * f * t).sin() - p0.sin()) * sigma_pp0,
            Box::new(move |s: f64| a * s * ((2.0 * f * t - p0).cos() - p0.cos())),
        )
    } else {
        return Err(Error::InvalidArgument(
            "perturbative approximant needs Hatano-Nelson or imaginary-coupling hoppings".into(),
        ));
    };
    if !(denominator > 0.0) {
        return Err(Error::ApproximationInvalid { t });
    }
    let sigma = sigma_pp0 / denominator;
    Ok((drift - correction(sigma), sigma))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;
    use crate::model::hamiltonian_split;

    #[test]
    fn beta_examples() {
        let (pp, pq, qq) = beta_to_sigma(C64::new(0.02, 0.0)).unwrap();
        assert_relative_eq!(pp, 0.04, epsilon = 1e-15);
        assert_eq!(pq, 0.0);
        assert_relative_eq!(qq, 25.0, epsilon = 1e-12);
        let (pp, _, qq) = beta_to_sigma(C64::new(0.15, 0.0)).unwrap();
        assert_relative_eq!(pp, 0.3, epsilon = 1e-15);
        assert_relative_eq!(qq, 10.0 / 3.0, epsilon = 1e-14);
        let (pp, pq, qq) = beta_to_sigma(C64::new(0.05, 0.05)).unwrap();
        assert_relative_eq!(pp, 0.2, epsilon = 1e-15);
        assert_relative_eq!(pq, -1.0, epsilon = 1e-15);
        assert_relative_eq!(qq, 10.0, epsilon = 1e-14);
        assert!(beta_to_sigma(C64::new(0.0, 1.0)).is_err());
        assert!(beta_to_sigma(C64::new(-0.1, 0.0)).is_err());
    }

    #[test]
    fn beta_round_trip() {
        let b = C64::new(0.004, -0.008);
        let (_, pq, qq) = beta_to_sigma(b).unwrap();
        let back = BetaParameter::from_sigma(qq, pq).unwrap().value();
        assert_relative_eq!(back.re, b.re, epsilon = 1e-16);
        assert_relative_eq!(back.im, b.im, epsilon = 1e-16);
    }

    #[test]
    fn hermitian_rhs() {
        let p = ModelParams::hatano_nelson(1.0, 0.0, 0.1).unwrap();
        let traj = GaussianTrajectory::from_beta(C64::new(0.1, 0.03), 2.0, 0.4).unwrap();
        let d = rhs_full(&p, &traj);
        assert_eq!(d.p, -0.2);
        assert_eq!(d.log_p, 0.0);
        assert_eq!(d.sigma_pp, 0.0);
    }

    #[test]
    fn hatano_nelson_rhs_terms() {
        // g+ = 2g cosh μ, g- = 2g sinh μ (both real).
        let (g, mu, f) = (0.7, 0.3, 0.2);
        let p = ModelParams::hatano_nelson(g, mu, f).unwrap();
        let traj = GaussianTrajectory { q: 1.0, p: 0.8, sigma_pp: 0.5, sigma_pq: 0.3, sigma_qq: 2.18, log_p: 0.0 };
        let d = rhs_full(&p, &traj);
        let (c, s) = (2.0 * g * mu.cosh(), 2.0 * g * mu.sinh());
        let (sp, cp) = traj.p.sin_cos();
        assert_relative_eq!(d.p, -2.0 * f + s * cp * 0.5, epsilon = 1e-15);
        assert_relative_eq!(d.q, -c * sp + s * cp * 0.3, epsilon = 1e-15);
        assert_relative_eq!(d.sigma_pp, -s * sp * 0.25, epsilon = 1e-15);
        assert_relative_eq!(d.log_p, s * sp * (2.0 - 0.25), epsilon = 1e-15);
    }

    #[test]
    fn split_form_matches_full_form() {
        let p = ModelParams::new(C64::new(0.8, -0.4), C64::new(0.3, 0.9), 0.15).unwrap();
        let traj = GaussianTrajectory::from_beta(C64::new(0.07, -0.02), -3.0, 2.2).unwrap();
        let a = rhs_full(&p, &traj);
        let b = rhs_from_split(&hamiltonian_split(&p), &traj).unwrap();
        for (x, y) in a.to_array().iter().zip(b.to_array()) {
            assert_relative_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn split_form_needs_invertible_sigma() {
        let p = ModelParams::imaginary_coupling(1.0, 0.1).unwrap();
        let traj = GaussianTrajectory::plane_wave(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(rhs_from_split(&hamiltonian_split(&p), &traj), Err(Error::SingularCovariance { .. })));
    }

    #[test]
    fn hermitian_bloch_oscillation() {
        let (g, f) = (1.0, 0.1);
        let p = ModelParams::hatano_nelson(g, 0.0, f).unwrap();
        let traj = GaussianTrajectory::from_beta(C64::new(0.05, 0.0), 0.0, 0.0).unwrap();
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 3.0).collect();
        let out = integrate_classical(&p, &traj, &times, &ClassicalOptions::default()).unwrap();
        for (t, s) in times.iter().zip(&out) {
            let q = -(2.0 * g / f) * (f * t).sin() * (0.0 - f * t).sin();
            assert_relative_eq!(s.q, q, epsilon = 1e-9);
            assert_relative_eq!(s.p, -2.0 * f * t, epsilon = 1e-11);
        }
    }

    #[test]
    fn imaginary_coupling_keeps_position() {
        let p = ModelParams::imaginary_coupling(1.0, 0.1).unwrap();
        let traj = GaussianTrajectory::from_beta(C64::new(0.05, 0.0), 3.0, 0.5).unwrap();
        let out = integrate_classical(&p, &traj, &[10.0, 40.0], &ClassicalOptions::default()).unwrap();
        for s in &out {
            assert!((s.q - 3.0).abs() < 1e-10);
            assert!(s.sigma_pq.abs() < 1e-12);
        }
    }

    #[test]
    fn blow_up_is_reported() {
        // At the loss maximum p = π of the IC lattice Σ̇_pp = 2g Σ_pp², Σ_pp(0) = 0.02.
        let p = ModelParams::imaginary_coupling(5.0, 0.0).unwrap();
        let traj = GaussianTrajectory::from_beta(C64::new(0.01, 0.0), 0.0, PI).unwrap();
        let err = integrate_classical(&p, &traj, &[10.0], &ClassicalOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SigmaBlowUp { .. }));
    }

    #[test]
    fn narrow_examples() {
        let (g, mu, f) = (1.0, 0.2, 0.1);
        let hn = ModelParams::hatano_nelson(g, mu, f).unwrap();
        let z = narrow_limit_closed_form(&hn, 1.5, 0.3, 0.0, 0.0).unwrap();
        assert_eq!((z.p, z.q, z.log_p), (0.3, 1.5, 0.0));
        for &t in &[1.0, 7.3, 25.0] {
            let s = narrow_limit_closed_form(&hn, 0.0, 0.3, 0.0, t).unwrap();
            let (sf, sm) = ((f * t).sin(), (0.3 - f * t).sin());
            assert_relative_eq!(s.q, -(2.0 * g * mu.cosh() / f) * sf * sm, epsilon = 1e-12);
            assert_relative_eq!(s.log_p, (4.0 * g * mu.sinh() / f) * sf * sm, epsilon = 1e-12);
        }
        let ic = ModelParams::imaginary_coupling(g, f).unwrap();
        let s = narrow_limit_closed_form(&ic, 2.0, 0.3, 0.0, 4.0).unwrap();
        assert_eq!(s.q, 2.0);
        assert_relative_eq!(s.log_p, (4.0 * g / f) * (0.4f64).sin() * (0.4f64 - 0.3).cos(), epsilon = 1e-12);
        assert!(narrow_limit_closed_form(&ic.with_force(0.0).unwrap(), 0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn narrow_limit_is_bloch_periodic() {
        let p = ModelParams::new(C64::new(0.4, 0.3), C64::new(1.1, -0.2), 0.25).unwrap();
        let a = narrow_limit_closed_form(&p, 0.5, 1.0, 0.4, 1.3).unwrap();
        let b = narrow_limit_closed_form(&p, 0.5, 1.0, 0.4, 1.3 + PI / 0.25).unwrap();
        assert_relative_eq!(a.q, b.q, epsilon = 1e-12);
        assert_relative_eq!(a.log_p, b.log_p, epsilon = 1e-12);
        assert_relative_eq!(a.p - b.p, 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn perturbative_exact_in_decoupled_limits() {
        let hn = ModelParams::hatano_nelson(1.0, 0.0, 0.1).unwrap();
        let ic = ModelParams::imaginary_coupling(0.0, 0.1).unwrap();
        for p in [hn, ic] {
            let (pa, s) = perturbative_p(&p, 0.4, 0.04, 3.0).unwrap();
            assert_relative_eq!(pa, 0.4 - 0.6, epsilon = 1e-15);
            assert_relative_eq!(s, 0.04, epsilon = 1e-15);
        }
        let other = ModelParams::new(C64::new(1.0, 0.1), C64::new(1.0, 0.0), 0.1).unwrap();
        assert!(perturbative_p(&other, 0.0, 0.04, 1.0).is_err());
    }

    #[test]
    fn perturbative_breakdown_is_reported() {
        let p = ModelParams::hatano_nelson(1.0, 2.0, 0.1).unwrap();
        let err = perturbative_p(&p, 0.0, 1.0, 15.0).unwrap_err();
        assert!(matches!(err, Error::ApproximationInvalid { .. }));
    }
}
