//! Wei-Norman product form `U(t) = e^{-iηN} e^{-iχ1 K} e^{-iχ2 K†}`, applied
//! in quasimomentum space on a zero-padded FFT grid.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Relative kernel tail tolerated at the wrap-around distance.
pub const ALIASING_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeiNormanCoefficients {
    pub eta: f64,
    pub chi1: C64,
    pub chi2: C64,
}

impl WeiNormanCoefficients {
    /// `η = 2Ft`, `χ1 = g1 (1 - e^{-2iFt}) / (2iF)`, `χ2 = g2 (e^{2iFt} - 1) / (2iF)`;
    /// `χ_j = g_j t` at `F = 0`.
    pub fn at(params: &ModelParams, t: f64) -> Self {
        let theta = 2.0 * params.force() * t;
        let avg = phase_average(theta);
        Self { eta: theta, chi1: params.g1() * avg.conj() * t, chi2: params.g2() * avg * t }
    }
}

/// `(e^{iθ} - 1) / (iθ) = e^{iθ/2} sin(θ/2) / (θ/2)`, the mean of `e^{iθs}` over `s ∈ [0, 1]`.
fn phase_average(theta: f64) -> C64 {
    let h = 0.5 * theta;
    let sinc = if h == 0.0 { 1.0 } else { h.sin() / h };
    C64::from_polar(sinc, h)
}

/// Propagates `state` to time `t` with `kappa_points ≥ window length` FFT
/// points. Fails with [`Error::Aliasing`] if the convolution kernel wraps
/// around the padded grid.
pub fn propagate_wei_norman(
    state: &LatticeState,
    params: &ModelParams,
    t: f64,
    kappa_points: usize,
) -> Result<LatticeState> {
    let window = state.window();
    let len = window.len();
    if kappa_points < len {
        return Err(Error::InvalidArgument(format!("{kappa_points} quasimomentum points for a window of {len} sites")));
    }
    let m = kappa_points;
    let co = WeiNormanCoefficients::at(params, t);
    // Exponent of the multiplier e^{-iχ1 e^{iκ} - iχ2 e^{-iκ}}, shifted to max real part 0.
    let exponents: Vec<C64> = (0..m)
        .map(|k| {
            let e = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64);
            C64::new(0.0, -1.0) * (co.chi1 * e + co.chi2 * e.conj())
        })
        .collect();
    let top = exponents.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let multiplier: Vec<C64> = exponents.iter().map(|z| (z - top).exp()).collect();

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);

    check_aliasing(&multiplier, len, inverse.as_ref())?;

    // The site offset n_min cancels between the forward and inverse transforms.
    let mut buf = vec![C64::new(0.0, 0.0); m];
    buf[..len].copy_from_slice(state.scaled_amplitudes());
    forward.process(&mut buf);
    buf.iter_mut().zip(&multiplier).for_each(|(b, w)| *b *= w);
    inverse.process(&mut buf);
    let inv_m = 1.0 / m as f64;
    let amps: Vec<C64> =
        window.sites().zip(&buf).map(|(n, c)| c * inv_m * C64::from_polar(1.0, -co.eta * n as f64)).collect();
    let mut next = LatticeState::with_log_scale(window, amps, state.log_scale())?;
    next.add_log_scale(top);
    if !next.is_finite() {
        return Err(Error::NonFinite { t });
    }
    Ok(next)
}

fn check_aliasing(multiplier: &[C64], len: usize, inverse: &dyn rustfft::Fft<f64>) -> Result<()> {
    let m = multiplier.len();
    let mut kernel = multiplier.to_vec();
    inverse.process(&mut kernel);
    let mags: Vec<f64> = kernel.iter().map(|k| k.norm()).collect();
    let max = mags.iter().copied().fold(0.0, f64::max);
    let cut = (m - len + 1).min(m / 2);
    // Cyclic index i stands for the signed shift i or i - m.
    let tail = mags.iter().enumerate().filter(|&(i, _)| i.min(m - i) >= cut).map(|(_, &v)| v).fold(0.0, f64::max) / max;
    if tail > ALIASING_TOLERANCE {
        return Err(Error::Aliasing { tail, points: m });
    }
    Ok(())
}
