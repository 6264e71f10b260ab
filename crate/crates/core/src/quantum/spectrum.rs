use nalgebra::{DMatrix, Schur};
use num_complex::Complex64 as C64;

use super::state::SiteWindow;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Eigenvalues of the Hamiltonian truncated to `window`, sorted by real then
/// imaginary part.
///
/// The tridiagonal matrix is first brought to symmetric form by the diagonal
/// similarity that replaces both hoppings by `√(g1 g2)`. This leaves the
/// spectrum unchanged but avoids the exponentially ill-conditioned
/// eigenvectors of the raw non-normal matrix (for real `g1 g2 > 0` the problem
/// becomes real symmetric).
pub fn spectrum_truncated(params: &ModelParams, window: SiteWindow) -> Result<Vec<C64>> {
    let len = window.len();
    if len < 21 {
        return Err(Error::InvalidArgument(format!("spectrum needs at least 21 sites, got {len}")));
    }
    let diag: Vec<f64> = window.sites().map(|n| 2.0 * params.force() * n as f64).collect();
    let prod = params.g1() * params.g2();
    let mut values: Vec<C64> = if prod == C64::new(0.0, 0.0) {
        // Triangular: the diagonal is the spectrum.
        diag.iter().map(|&d| C64::new(d, 0.0)).collect()
    } else if prod.im == 0.0 {
        let s = prod.re.abs().sqrt();
        let lower = if prod.re > 0.0 { s } else { -s };
        let m = DMatrix::from_fn(len, len, |i, j| match () {
            _ if i == j => diag[i],
            _ if j == i + 1 => s,
            _ if i == j + 1 => lower,
            _ => 0.0,
        });
        if prod.re > 0.0 {
            m.symmetric_eigenvalues().iter().map(|&v| C64::new(v, 0.0)).collect()
        } else {
            Schur::try_new(m, f64::EPSILON, 100_000)
                .ok_or_else(|| Error::Eigensolver("real Schur iteration did not converge".into()))?
                .complex_eigenvalues()
                .iter()
                .copied()
                .collect()
        }
    } else {
        let s = prod.sqrt();
        let m = DMatrix::from_fn(len, len, |i, j| match () {
            _ if i == j => C64::new(diag[i], 0.0),
            _ if j == i + 1 || i == j + 1 => s,
            _ => C64::new(0.0, 0.0),
        });
        let (_, t) = Schur::try_new(m, f64::EPSILON, 100_000)
            .ok_or_else(|| Error::Eigensolver("complex Schur iteration did not converge".into()))?
            .unpack();
        t.diagonal().iter().copied().collect()
    };
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(values)
}
