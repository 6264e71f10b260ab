use num_complex::Complex64 as C64;

use super::state::LatticeState;

/// Below this `|⟨K⟩|` the circular mean momentum is reported as undefined.
pub const CIRCULAR_MEAN_FLOOR: f64 = 1e-9;

/// Moments of a lattice state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumObservables {
    pub norm: f64,
    pub log_norm: f64,
    pub n_mean: f64,
    pub n_var: f64,
    /// `⟨K⟩ = Σ conj(c_n) c_{n+1} / P`.
    pub k_mean: C64,
    /// `arg⟨K⟩`, `None` when `|⟨K⟩|` is below [`CIRCULAR_MEAN_FLOOR`].
    pub p_circular: Option<f64>,
}

pub fn observables(state: &LatticeState) -> QuantumObservables {
    let amps = state.scaled_amplitudes();
    let n0 = state.window().n_min() as f64;
    let mut sum = 0.0;
    let mut first = 0.0;
    for (j, a) in amps.iter().enumerate() {
        let w = a.norm_sqr();
        sum += w;
        first += w * j as f64;
    }
    let mean_j = first / sum;
    // Central second moment to limit cancellation far from the origin.
    let var = amps
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let d = j as f64 - mean_j;
            a.norm_sqr() * d * d
        })
        .sum::<f64>()
        / sum;
    let k_mean = amps.windows(2).map(|w| w[0].conj() * w[1]).sum::<C64>() / sum;
    let log_norm = 2.0 * state.log_scale() + sum.ln();
    QuantumObservables {
        norm: log_norm.exp(),
        log_norm,
        n_mean: n0 + mean_j,
        n_var: var,
        k_mean,
        p_circular: (k_mean.norm() > CIRCULAR_MEAN_FLOOR).then(|| k_mean.arg()),
    }
}
