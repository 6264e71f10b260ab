//! The tilted single-band lattice `H = g1 K + g2 K† + 2F N`, its split into
//! Hermitian and anti-Hermitian phase-space functions, and the Wannier-Stark
//! ladder.
//!
//! Units have ħ = 1. The quasimomentum `κ` is defined through `K = e^{iκ}`, so a
//! plane wave with amplitudes `c_n = e^{iκn}` has `⟨K⟩ = e^{iκ}`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hopping amplitudes `g1`, `g2` and the real force parameter `F` (the on-site
/// gradient is `2F`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    g1: C64,
    g2: C64,
    force: f64,
}

impl ModelParams {
    pub fn new(g1: C64, g2: C64, force: f64) -> Result<Self> {
        if !force.is_finite() {
            return Err(Error::InvalidArgument(format!("force must be finite, got {force}")));
        }
        if !(g1.re.is_finite() && g1.im.is_finite() && g2.re.is_finite() && g2.im.is_finite()) {
            return Err(Error::InvalidArgument("hoppings must be finite".into()));
        }
        Ok(Self { g1, g2, force })
    }

    /// Asymmetric real hoppings `g1 = g e^{μ}`, `g2 = g e^{-μ}`.
    pub fn hatano_nelson(g: f64, mu: f64, force: f64) -> Result<Self> {
        if !(g.is_finite() && mu.is_finite()) {
            return Err(Error::InvalidArgument("g and mu must be finite".into()));
        }
        Self::new(C64::new(g * mu.exp(), 0.0), C64::new(g * (-mu).exp(), 0.0), force)
    }

    /// Purely imaginary hoppings `g1 = g2 = i g`.
    pub fn imaginary_coupling(g: f64, force: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidArgument("g must be finite".into()));
        }
        Self::new(C64::new(0.0, g), C64::new(0.0, g), force)
    }

    pub fn g1(&self) -> C64 {
        self.g1
    }

    pub fn g2(&self) -> C64 {
        self.g2
    }

    pub fn force(&self) -> f64 {
        self.force
    }

    pub fn g_plus(&self) -> C64 {
        self.g1 + self.g2
    }

    pub fn g_minus(&self) -> C64 {
        self.g1 - self.g2
    }

    pub fn with_force(&self, force: f64) -> Result<Self> {
        Self::new(self.g1, self.g2, force)
    }

    /// `g2 = conj(g1)`.
    pub fn is_hermitian(&self) -> bool {
        self.g2 == self.g1.conj()
    }

    /// `(g, μ)` if the hoppings are real with a common sign.
    pub fn hatano_nelson_parts(&self) -> Option<(f64, f64)> {
        if self.g1.im != 0.0 || self.g2.im != 0.0 {
            return None;
        }
        let (a, b) = (self.g1.re, self.g2.re);
        if a == 0.0 && b == 0.0 {
            return Some((0.0, 0.0));
        }
        if a * b <= 0.0 {
            return None;
        }
        let g = a.signum() * (a * b).sqrt();
        Some((g, 0.5 * (a / b).ln()))
    }

    /// `g` if `g1 = g2 = i g`.
    pub fn imaginary_coupling_part(&self) -> Option<f64> {
        (self.g1 == self.g2 && self.g1.re == 0.0).then_some(self.g1.im)
    }

    /// `max(|g1|, |g2|)`.
    pub fn max_hopping(&self) -> f64 {
        self.g1.norm().max(self.g2.norm())
    }
}

/// A point `(q, p)` of the lattice phase space. `p` is kept unwrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    pub q: f64,
    pub p: f64,
}

/// Reduces a quasimomentum to `[0, 2π)`.
pub fn wrap_momentum(p: f64) -> f64 {
    let r = p.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Field-free dispersion `E(κ) = g1 e^{iκ} + g2 e^{-iκ}`.
pub fn dispersion(params: &ModelParams, kappa: f64) -> C64 {
    let e = C64::from_polar(1.0, kappa);
    params.g1 * e + params.g2 * e.conj()
}

/// Whether `conj(E(-κ)) = E(κ)` holds identically, i.e. both hoppings are real.
pub fn has_real_dispersion_symmetry(params: &ModelParams) -> bool {
    params.g1.im == 0.0 && params.g2.im == 0.0
}

/// Wannier-Stark level `E_m = 2 F m`.
pub fn wannier_stark_eigenvalue(m: i64, force: f64) -> Result<f64> {
    if force == 0.0 {
        return Err(Error::NoLadder);
    }
    Ok(2.0 * force * m as f64)
}

/// A function sampled on the uniform grid `κ_j = 2πj/M`, `j = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub kappa: Vec<f64>,
    pub values: Vec<C64>,
}

/// Quasimomentum-space eigenfunction
/// `Ψ_m(κ) ∝ exp(-imκ + (g1/2F) e^{iκ} - (g2/2F) e^{-iκ})` on a uniform grid,
/// scaled so that the grid mean of `|Ψ_m|²` is one.
pub fn wannier_stark_eigenstate(params: &ModelParams, m: i64, points: usize) -> Result<SampledFunction> {
    let f = params.force;
    if f == 0.0 {
        return Err(Error::NoLadder);
    }
    if points < 8 {
        return Err(Error::InvalidArgument(format!("grid needs at least 8 points, got {points}")));
    }
    let kappa: Vec<f64> = (0..points).map(|j| TAU * j as f64 / points as f64).collect();
    let exponents: Vec<C64> = kappa
        .iter()
        .map(|&k| {
            let e = C64::from_polar(1.0, k);
            C64::new(0.0, -(m as f64) * k) + params.g1 / (2.0 * f) * e - params.g2 / (2.0 * f) * e.conj()
        })
        .collect();
    // Shift by the largest real part so the exponentials cannot overflow.
    let shift = exponents.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let mut values: Vec<C64> = exponents.iter().map(|z| (z - shift).exp()).collect();
    let mean_sq = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / points as f64;
    let scale = mean_sq.sqrt().recip();
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(SampledFunction { kappa, values })
}

/// `H = H_R - i H_I` as real functions of `(p, q)`:
///
/// `H_R = Re g+ cos p - Im g- sin p + 2Fq`, `H_I = -Im g+ cos p - Re g- sin p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSplit {
    re_gp: f64,
    im_gp: f64,
    re_gm: f64,
    im_gm: f64,
    force: f64,
}

pub fn hamiltonian_split(params: &ModelParams) -> HamiltonianSplit {
    let gp = params.g_plus();
    let gm = params.g_minus();
    HamiltonianSplit { re_gp: gp.re, im_gp: gp.im, re_gm: gm.re, im_gm: gm.im, force: params.force }
}

impl HamiltonianSplit {
    pub fn force(&self) -> f64 {
        self.force
    }

    pub fn h_r(&self, p: f64, q: f64) -> f64 {
        let (s, c) = p.sin_cos();
        self.re_gp * c - self.im_gm * s + 2.0 * self.force * q
    }

    pub fn h_i(&self, p: f64) -> f64 {
        let (s, c) = p.sin_cos();
        -self.im_gp * c - self.re_gm * s
    }

    /// Full complex phase-space Hamiltonian `H_R - i H_I`.
    pub fn h(&self, p: f64, q: f64) -> C64 {
        C64::new(self.h_r(p, q), -self.h_i(p))
    }

    /// `(∂H_R/∂p, ∂H_R/∂q)`.
    pub fn grad_r(&self, p: f64, _q: f64) -> [f64; 2] {
        let (s, c) = p.sin_cos();
        [-self.re_gp * s - self.im_gm * c, 2.0 * self.force]
    }

    /// `(∂H_I/∂p, ∂H_I/∂q)`.
    pub fn grad_i(&self, p: f64) -> [f64; 2] {
        let (s, c) = p.sin_cos();
        [self.im_gp * s - self.re_gm * c, 0.0]
    }

    /// Hessian of `H_R` in `(p, q)` ordering; only the `pp` entry is nonzero.
    pub fn hess_r(&self, p: f64, _q: f64) -> [[f64; 2]; 2] {
        let (s, c) = p.sin_cos();
        [[-self.re_gp * c + self.im_gm * s, 0.0], [0.0, 0.0]]
    }

    pub fn hess_i(&self, p: f64) -> [[f64; 2]; 2] {
        let (s, c) = p.sin_cos();
        [[self.im_gp * c + self.re_gm * s, 0.0], [0.0, 0.0]]
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use approx::assert_relative_eq;

    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dispersion_examples() {
        let p = ModelParams::new(c(1.0, 0.0), c(1.0, 0.0), 0.1).unwrap();
        let e = dispersion(&p, 0.0);
        assert_eq!(e, c(2.0, 0.0));

        let hn = ModelParams::hatano_nelson(1.0, 0.2, 0.1).unwrap();
        let e = dispersion(&hn, FRAC_PI_2);
        assert!(e.re.abs() < 1e-15);
        assert_relative_eq!(e.im, 2.0 * 0.2f64.sinh(), max_relative = 1e-14);
        assert_relative_eq!(e.im, 0.402672, epsilon = 1e-6);

        let ic = ModelParams::imaginary_coupling(1.0, 0.1).unwrap();
        assert_eq!(dispersion(&ic, 0.0), c(0.0, 2.0));
    }

    #[test]
    fn dispersion_is_periodic() {
        let p = ModelParams::new(c(0.3, -0.7), c(1.1, 0.2), 0.05).unwrap();
        for k in [-3.0, -0.4, 0.0, 1.3, 5.9] {
            let d = dispersion(&p, k) - dispersion(&p, k + TAU);
            assert!(d.norm() < 1e-14);
        }
    }

    #[test]
    fn ladder_values() {
        assert_eq!(wannier_stark_eigenvalue(0, 0.1).unwrap(), 0.0);
        assert_relative_eq!(wannier_stark_eigenvalue(3, 0.1).unwrap(), 0.6, max_relative = 1e-15);
        assert_eq!(wannier_stark_eigenvalue(-2, 0.25).unwrap(), -1.0);
        assert_eq!(wannier_stark_eigenvalue(1, 0.0), Err(Error::NoLadder));
    }

    #[test]
    fn presets() {
        let hn = ModelParams::hatano_nelson(1.5, 0.3, 0.1).unwrap();
        assert_relative_eq!(hn.g1().re, 1.5 * 0.3f64.exp());
        assert_relative_eq!(hn.g2().re, 1.5 * (-0.3f64).exp());
        let (g, mu) = hn.hatano_nelson_parts().unwrap();
        assert_relative_eq!(g, 1.5, max_relative = 1e-14);
        assert_relative_eq!(mu, 0.3, max_relative = 1e-14);
        assert!(!hn.is_hermitian());
        assert!(ModelParams::hatano_nelson(1.0, 0.0, 0.1).unwrap().is_hermitian());

        let ic = ModelParams::imaginary_coupling(0.7, 0.1).unwrap();
        assert_eq!(ic.g1(), c(0.0, 0.7));
        assert_eq!(ic.imaginary_coupling_part(), Some(0.7));
        assert_eq!(ic.hatano_nelson_parts(), None);
        assert!(ModelParams::new(c(1.0, 0.0), c(1.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn split_reproduces_dispersion() {
        let params = [
            ModelParams::hatano_nelson(1.0, 0.2, 0.1).unwrap(),
            ModelParams::imaginary_coupling(1.0, 0.1).unwrap(),
            ModelParams::new(c(0.3, -0.7), c(1.1, 0.2), -0.05).unwrap(),
        ];
        for par in &params {
            let s = hamiltonian_split(par);
            for (p, q) in [(0.0, 0.0), (1.2, -3.0), (-2.5, 11.0), (4.0, 0.5)] {
                let lhs = s.h(p, q);
                let rhs = dispersion(par, p) + 2.0 * par.force() * q;
                assert!((lhs - rhs).norm() < 1e-14, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn split_presets() {
        let (g, mu) = (1.3, 0.4);
        let s = hamiltonian_split(&ModelParams::hatano_nelson(g, mu, 0.1).unwrap());
        for p in [0.0, 0.7, 2.0, -1.1] {
            assert_relative_eq!(s.h_r(p, 2.0), 2.0 * g * mu.cosh() * p.cos() + 0.4, epsilon = 1e-13);
            assert_relative_eq!(s.h_i(p), -2.0 * g * mu.sinh() * p.sin(), epsilon = 1e-13);
        }
        let s = hamiltonian_split(&ModelParams::imaginary_coupling(g, 0.1).unwrap());
        for p in [0.0, 0.7, 2.0, -1.1] {
            assert_relative_eq!(s.h_r(p, 2.0), 0.4, epsilon = 1e-13);
            assert_relative_eq!(s.h_i(p), -2.0 * g * p.cos(), epsilon = 1e-13);
        }
        let herm = ModelParams::new(c(0.8, 0.3), c(0.8, -0.3), 0.1).unwrap();
        assert!(herm.is_hermitian());
        let s = hamiltonian_split(&herm);
        for j in 0..64 {
            assert!(s.h_i(TAU * j as f64 / 64.0).abs() < 1e-15);
        }
    }

    #[test]
    fn real_dispersion_symmetry() {
        let hn = ModelParams::hatano_nelson(1.0, 0.2, 0.1).unwrap();
        assert!(has_real_dispersion_symmetry(&hn));
        for p in [0.3, 1.7, -2.2] {
            assert!((dispersion(&hn, -p).conj() - dispersion(&hn, p)).norm() < 1e-15);
        }
        // Imaginary couplings are symmetric under κ -> π - κ combined with conjugation.
        let ic = ModelParams::imaginary_coupling(1.0, 0.1).unwrap();
        assert!(!has_real_dispersion_symmetry(&ic));
        for p in [0.3, 1.7, -2.2] {
            assert!((dispersion(&ic, PI - p).conj() - dispersion(&ic, p)).norm() < 1e-15);
        }
    }

    #[test]
    fn hopping_free_eigenstate_is_a_phase() {
        let p = ModelParams::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.1).unwrap();
        let psi = wannier_stark_eigenstate(&p, 1, 32).unwrap();
        for (k, v) in psi.kappa.iter().zip(&psi.values) {
            assert!((v - C64::from_polar(1.0, -k)).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_eigenstate_has_flat_modulus() {
        let p = ModelParams::new(c(0.8, 0.3), c(0.8, -0.3), 0.1).unwrap();
        let psi = wannier_stark_eigenstate(&p, 2, 64).unwrap();
        for v in &psi.values {
            assert_relative_eq!(v.norm(), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn eigenstate_rejects_bad_input() {
        let p = ModelParams::hatano_nelson(1.0, 0.2, 0.0).unwrap();
        assert_eq!(wannier_stark_eigenstate(&p, 0, 64), Err(Error::NoLadder));
        let p = p.with_force(0.1).unwrap();
        assert!(wannier_stark_eigenstate(&p, 0, 4).is_err());
    }

    #[test]
    fn wrap_momentum_range() {
        assert_eq!(wrap_momentum(0.0), 0.0);
        assert_relative_eq!(wrap_momentum(-FRAC_PI_2), 1.5 * PI);
        assert_relative_eq!(wrap_momentum(7.0), 7.0 - TAU);
    }
}
