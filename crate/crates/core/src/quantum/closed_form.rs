//! Bessel-function propagators of the Hatano-Nelson (`g1 = g e^{μ}`,
//! `g2 = g e^{-μ}`) and imaginary-coupling (`g1 = g2 = i g`) lattices.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::special::{bessel_i, bessel_i_log_orders, bessel_j, bessel_j_orders};

/// `U_{n n'}(t) = J_{n-n'}(-(2g/F) sin Ft) e^{-μ(n-n')} e^{i(n-n')(π/2 - Ft) - 2iFt n'}`.
pub fn propagator_hn(n: i64, n2: i64, t: f64, g: f64, mu: f64, force: f64) -> Result<C64> {
    if force == 0.0 {
        return Err(Error::NoLadder);
    }
    let d = n - n2;
    let x = -2.0 * g / force * (force * t).sin();
    let j = bessel_j(d, x)?;
    let phase = d as f64 * (FRAC_PI_2 - force * t) - 2.0 * force * t * n2 as f64;
    Ok(C64::from_polar(signed_exp(j, -mu * d as f64), phase) * j.signum())
}

/// `U_{n n'}(t) = I_{n-n'}(-(2g/F) sin Ft) e^{i(n-n')(π - Ft) - 2iFt n'}`.
pub fn propagator_ic(n: i64, n2: i64, t: f64, g: f64, force: f64) -> Result<C64> {
    if force == 0.0 {
        return Err(Error::NoLadder);
    }
    let d = n - n2;
    let x = -2.0 * g / force * (force * t).sin();
    let i = bessel_i(d, x)?;
    let phase = d as f64 * (PI - force * t) - 2.0 * force * t * n2 as f64;
    Ok(C64::from_polar(i, phase))
}

/// `|v| e^{s}` without intermediate overflow.
fn signed_exp(v: f64, s: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        (v.abs().ln() + s).exp()
    }
}

/// Applies the closed-form propagator to `state` on its own window.
///
/// Amplitude that would leave the window is discarded; check
/// [`LatticeState::boundary_leak`] on the result.
pub fn propagate_closed_form(state: &LatticeState, params: &ModelParams, t: f64) -> Result<LatticeState> {
    let force = params.force();
    if force == 0.0 {
        return Err(Error::NoLadder);
    }
    let len = state.window().len();
    let reach = len - 1;
    let x = -2.0 / force * (force * t).sin();
    // Kernel k_d, d = n - n', as (log modulus, sign-and-phase) for |d| ≤ reach.
    let (log_mod, phase): (Vec<f64>, Vec<C64>) = if let Some(g) = params.imaginary_coupling_part() {
        let x = g * x;
        let logs = bessel_i_log_orders(reach, x.abs())?;
        let parity = if x < 0.0 { -1.0 } else { 1.0 };
        (-(reach as i64)..=reach as i64)
            .map(|d| {
                let k = d.unsigned_abs() as usize;
                let sign = if k % 2 == 1 { parity } else { 1.0 };
                (logs[k], C64::from_polar(sign, d as f64 * (PI - force * t)))
            })
            .unzip()
    } else if let Some((g, mu)) = params.hatano_nelson_parts() {
        let x = g * x;
        let js = bessel_j_orders(reach, x)?;
        (-(reach as i64)..=reach as i64)
            .map(|d| {
                let k = d.unsigned_abs() as usize;
                // J_{-k} = (-1)^k J_k
                let j = if d < 0 && k % 2 == 1 { -js[k] } else { js[k] };
                let lm = if j == 0.0 { f64::NEG_INFINITY } else { j.abs().ln() - mu * d as f64 };
                (lm, C64::from_polar(j.signum(), d as f64 * (FRAC_PI_2 - force * t)))
            })
            .unzip()
    } else {
        return Err(Error::InvalidArgument(
            "closed-form propagator needs Hatano-Nelson or imaginary-coupling hoppings".into(),
        ));
    };
    let top = log_mod.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let kernel: Vec<C64> = log_mod
        .iter()
        .zip(&phase)
        .map(|(&l, &ph)| if l == f64::NEG_INFINITY { C64::new(0.0, 0.0) } else { ph * (l - top).exp() })
        .collect();

    let n_min = state.window().n_min();
    let src: Vec<C64> = state
        .scaled_amplitudes()
        .iter()
        .enumerate()
        .map(|(j, c)| c * C64::from_polar(1.0, -2.0 * force * t * (n_min + j as i64) as f64))
        .collect();
    let out: Vec<C64> = (0..len)
        .map(|i| {
            // d = i - j ranges over the kernel, offset by `reach`.
            src.iter().enumerate().map(|(j, c)| kernel[i + reach - j] * c).sum()
        })
        .collect();
    let mut next = LatticeState::with_log_scale(state.window(), out, state.log_scale())?;
    next.add_log_scale(top);
    if !next.is_finite() {
        return Err(Error::NonFinite { t });
    }
    Ok(next)
}
