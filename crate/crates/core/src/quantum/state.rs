use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Inclusive site interval `[n_min, n_max]` of a truncated lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteWindow {
    n_min: i64,
    n_max: i64,
}

impl SiteWindow {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_max < n_min || n_max - n_min + 1 < 3 {
            return Err(Error::InvalidArgument(format!("window [{n_min}, {n_max}] must contain at least 3 sites")));
        }
        Ok(Self { n_min, n_max })
    }

    /// `[-half_width, half_width]`.
    pub fn symmetric(half_width: i64) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + Clone {
        self.n_min..=self.n_max
    }

    pub fn index_of(&self, n: i64) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }
}

/// Amplitudes `c_n` in the site basis on a truncated window.
///
/// The physical amplitudes are `e^{log_scale} · c_n`; the stored `c_n` are kept
/// with `max |c_n| = 1` by [`LatticeState::renormalize`], so squared norms far
/// outside the `f64` range stay representable through [`LatticeState::log_norm_sqr`].
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    window: SiteWindow,
    amps: Vec<C64>,
    log_scale: f64,
}

impl LatticeState {
    pub fn from_amplitudes(window: SiteWindow, amps: Vec<C64>) -> Result<Self> {
        Self::with_log_scale(window, amps, 0.0)
    }

    pub fn with_log_scale(window: SiteWindow, amps: Vec<C64>, log_scale: f64) -> Result<Self> {
        if amps.len() != window.len() {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for a window of {} sites",
                amps.len(),
                window.len()
            )));
        }
        if !log_scale.is_finite() || amps.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite { t: 0.0 });
        }
        let mut s = Self { window, amps, log_scale };
        s.renormalize();
        Ok(s)
    }

    pub fn window(&self) -> SiteWindow {
        self.window
    }

    /// Stored amplitudes, without the `e^{log_scale}` prefactor.
    pub fn scaled_amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Physical amplitudes (may overflow for extreme norms).
    pub fn amplitudes(&self) -> Vec<C64> {
        let f = self.log_scale.exp();
        self.amps.iter().map(|a| a * f).collect()
    }

    /// Physical amplitude at site `n` (zero outside the window).
    pub fn amplitude(&self, n: i64) -> C64 {
        self.window.index_of(n).map_or(C64::new(0.0, 0.0), |i| self.amps[i] * self.log_scale.exp())
    }

    /// `ln P` with `P = Σ |c_n|²`.
    pub fn log_norm_sqr(&self) -> f64 {
        2.0 * self.log_scale + self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().ln()
    }

    /// Moves the magnitude of the amplitudes into `log_scale` so that
    /// `max |c_n| = 1`. The zero state is left untouched.
    pub fn renormalize(&mut self) {
        let max = self.max_abs();
        if max > 0.0 && max.is_finite() && max != 1.0 {
            let inv = max.recip();
            self.amps.iter_mut().for_each(|a| *a *= inv);
            self.log_scale += max.ln();
        }
    }

    /// Copy rescaled to `P = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let sum: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        if sum == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut out = self.clone();
        out.log_scale = -0.5 * sum.ln();
        Ok(out)
    }

    /// `max(|c_{n_min}|, |c_{n_max}|) / max_n |c_n|`.
    pub fn boundary_leak(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let edge = self.amps[0].norm().max(self.amps[self.amps.len() - 1].norm());
        edge / max
    }

    /// Renormalised density `|c_n|² / P`.
    pub fn density(&self) -> Vec<f64> {
        let sum: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        self.amps.iter().map(|a| a.norm_sqr() / sum).collect()
    }

    /// `max_n |a_n - b_n| / √P_b` over the union of both windows, measured in
    /// physical amplitudes.
    pub fn max_amplitude_deviation(&self, reference: &LatticeState) -> f64 {
        let log_p_ref = reference.log_norm_sqr();
        let fa = (self.log_scale - 0.5 * log_p_ref).exp();
        let fb = (reference.log_scale - 0.5 * log_p_ref).exp();
        let lo = self.window.n_min.min(reference.window.n_min);
        let hi = self.window.n_max.max(reference.window.n_max);
        let zero = C64::new(0.0, 0.0);
        (lo..=hi)
            .map(|n| {
                let a = self.window.index_of(n).map_or(zero, |i| self.amps[i]) * fa;
                let b = reference.window.index_of(n).map_or(zero, |i| reference.amps[i]) * fb;
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `φ(κ_j) = Σ_n c_n e^{-inκ_j}` on `κ_j = 2πj/M` (stored amplitudes, no
    /// `e^{log_scale}`). Sites are folded modulo `M`, which is exact on the grid.
    pub fn momentum_samples(&self, points: usize) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); points];
        let m = points as i64;
        for (n, a) in self.window.sites().zip(&self.amps) {
            buf[n.rem_euclid(m) as usize] += a;
        }
        FftPlanner::new().plan_fft_forward(points).process(&mut buf);
        buf
    }

    pub(crate) fn max_abs(&self) -> f64 {
        self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub(crate) fn add_log_scale(&mut self, delta: f64) {
        self.log_scale += delta;
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.log_scale.is_finite() && self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

/// `c_n = exp(-β(n - q0)² + i p0 (n - q0))`, normalised to `P = 1`.
///
/// The phase convention makes the circular mean `arg⟨K⟩` equal to `p0`.
pub fn gaussian_state(window: SiteWindow, beta: C64, q0: f64, p0: f64) -> Result<LatticeState> {
    if !(beta.re > 0.0) || !beta.im.is_finite() {
        return Err(Error::InvalidArgument(format!("gaussian needs Re(beta) > 0, got {beta}")));
    }
    if !(q0.is_finite() && p0.is_finite()) {
        return Err(Error::InvalidArgument("q0 and p0 must be finite".into()));
    }
    let sigma = 0.5 / beta.re.sqrt();
    let (lo, hi) = (window.n_min() as f64, window.n_max() as f64);
    if q0 - 5.0 * sigma < lo || q0 + 5.0 * sigma > hi {
        return Err(Error::InvalidArgument(format!(
            "gaussian at q0 = {q0} with width {sigma:.3} does not fit [{lo}, {hi}] with a 5-sigma margin"
        )));
    }
    // Tail level at the nearest edge relative to the peak.
    let edge = (q0 - lo).min(hi - q0);
    let peak_offset = (q0 - q0.round()).abs();
    let tail = -beta.re * (edge * edge - peak_offset * peak_offset);
    if tail > (1e-12f64).ln() {
        return Err(Error::InvalidArgument(format!(
            "gaussian tail {:.2e} at the window edge exceeds 1e-12",
            tail.exp()
        )));
    }
    let amps = window
        .sites()
        .map(|n| {
            let x = n as f64 - q0;
            (-beta * x * x + C64::new(0.0, p0 * x)).exp()
        })
        .collect();
    LatticeState::from_amplitudes(window, amps)?.normalized()
}

/// `c_site = 1`, all other amplitudes zero.
pub fn site_state(window: SiteWindow, site: i64) -> Result<LatticeState> {
    if site <= window.n_min() || site >= window.n_max() {
        return Err(Error::InvalidArgument(format!(
            "site {site} is not strictly inside [{}, {}]",
            window.n_min(),
            window.n_max()
        )));
    }
    let mut amps = vec![C64::new(0.0, 0.0); window.len()];
    amps[(site - window.n_min()) as usize] = C64::new(1.0, 0.0);
    LatticeState::from_amplitudes(window, amps)
}

/// Uniform quasimomentum grid `κ_j = 2πj/M`.
pub fn kappa_grid(points: usize) -> Vec<f64> {
    (0..points).map(|j| TAU * j as f64 / points as f64).collect()
}
