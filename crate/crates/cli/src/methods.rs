//! Runs one method on one variant and collects its observable series.

use std::f64::consts::FRAC_PI_2;

use blochnh::classical::{
    beta_to_sigma, integrate_classical, narrow_limit_closed_form, perturbative_p, ClassicalOptions, GaussianTrajectory,
};
use blochnh::ensemble::{ensemble_averages, ensemble_from_gaussian, ensemble_from_site, evolve_ensemble, Ensemble};
use blochnh::quantum::{
    observables, propagate_closed_form, propagate_direct, propagate_wei_norman, DirectOptions, LatticeState,
    SiteWindow, CIRCULAR_MEAN_FLOOR,
};
use blochnh::record::{unwrap_records, ObservableRecord};
use blochnh::special::bessel_i_log;
use blochnh::{Error, C64};
use rayon::prelude::*;

use crate::error::Failure;
use crate::scenario::{Initial, Method, Preset, Scenario, Variant};

/// Result of one method: the time series, the lattice states of wavefunction
/// methods and a renormalised site density where the method defines one.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    pub records: Vec<ObservableRecord>,
    pub states: Vec<LatticeState>,
    pub density: Option<Vec<Vec<f64>>>,
    pub notes: Vec<String>,
}

impl MethodRun {
    fn new(method: Method, records: Vec<ObservableRecord>) -> Self {
        Self { method, records, states: Vec::new(), density: None, notes: Vec::new() }
    }
}

pub fn run_method(scenario: &Scenario, variant: &Variant, method: Method) -> Result<MethodRun, Failure> {
    let fail = |e: Error| Failure::from_engine(method.name(), &variant.name, e);
    let mut run = match method {
        Method::Direct => direct(scenario, variant).map_err(fail)?,
        Method::ClosedForm | Method::WeiNorman => exact(scenario, variant, method).map_err(fail)?,
        Method::Classical => classical(scenario, variant).map_err(fail)?,
        Method::Narrow => narrow(scenario, variant).map_err(fail)?,
        Method::Ensemble => ensemble(scenario, variant).map_err(fail)?,
        Method::Perturbative => perturbative(scenario, variant).map_err(fail)?,
        Method::Analytic => analytic(scenario, variant).map_err(fail)?,
    };
    unwrap_records(&mut run.records);
    Ok(run)
}

fn wavefunction_run(method: Method, times: &[f64], states: Vec<LatticeState>) -> MethodRun {
    let records = times.iter().zip(&states).map(|(&t, s)| ObservableRecord::from_quantum(t, &observables(s))).collect();
    let mut run = MethodRun::new(method, records);
    run.density = Some(states.iter().map(LatticeState::density).collect());
    run.states = states;
    run
}

fn direct(scenario: &Scenario, variant: &Variant) -> blochnh::Result<MethodRun> {
    let mut opts = DirectOptions::for_system(&variant.params, scenario.window);
    opts.dt = opts.dt.min(scenario.dt);
    opts.leak_threshold = scenario.leak_threshold;
    opts.check_convergence = scenario.check_convergence;
    let states = propagate_direct(&variant.state, &variant.params, &scenario.times, &opts)?;
    let mut run = wavefunction_run(Method::Direct, &scenario.times, states);
    if opts.dt < scenario.dt {
        run.notes.push(format!("step reduced to {:.3e} for stability", opts.dt));
    }
    Ok(run)
}

/// Closed-form and Wei-Norman propagation restart from the initial state at
/// every output time, so the times are independent.
fn exact(scenario: &Scenario, variant: &Variant, method: Method) -> blochnh::Result<MethodRun> {
    let states = scenario
        .times
        .par_iter()
        .map(|&t| {
            let s = match method {
                Method::ClosedForm => propagate_closed_form(&variant.state, &variant.params, t)?,
                _ => propagate_wei_norman(&variant.state, &variant.params, t, scenario.kappa_points)?,
            };
            let leak = s.boundary_leak();
            if leak > scenario.leak_threshold {
                return Err(Error::BoundaryLeak { t, leak, threshold: scenario.leak_threshold });
            }
            Ok(s)
        })
        .collect::<blochnh::Result<Vec<_>>>()?;
    Ok(wavefunction_run(method, &scenario.times, states))
}

fn gaussian(variant: &Variant) -> (C64, f64, f64) {
    match variant.initial {
        Initial::Gaussian { beta, q0, p0 } => (beta, q0, p0),
        Initial::Site { .. } => unreachable!("validated: gaussian initial state"),
    }
}

/// `exp(-(n - q)²/Σ_qq)` (variance `Σ_qq/2`) renormalised over the window.
fn gaussian_profile(window: SiteWindow, q: f64, sigma_qq: f64) -> Vec<f64> {
    let raw: Vec<f64> = window.sites().map(|n| -(n as f64 - q).powi(2) / sigma_qq).collect();
    let top = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = raw.iter().map(|x| (x - top).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.iter().map(|x| x / sum).collect()
}

fn classical(scenario: &Scenario, variant: &Variant) -> blochnh::Result<MethodRun> {
    let (beta, q0, p0) = gaussian(variant);
    let traj = GaussianTrajectory::from_beta(beta, q0, p0)?;
    let opts = ClassicalOptions {
        dt: scenario.classical_dt,
        check_convergence: scenario.check_convergence,
        ..ClassicalOptions::default()
    };
    let out = integrate_classical(&variant.params, &traj, &scenario.times, &opts)?;
    let records = scenario.times.iter().zip(&out).map(|(&t, g)| ObservableRecord::from_trajectory(t, g)).collect();
    let mut run = MethodRun::new(Method::Classical, records);
    run.density = Some(out.iter().map(|g| gaussian_profile(scenario.window, g.q, g.sigma_qq)).collect());
    Ok(run)
}

fn narrow(scenario: &Scenario, variant: &Variant) -> blochnh::Result<MethodRun> {
    let (beta, q0, p0) = gaussian(variant);
    let (_, sigma_pq, _) = beta_to_sigma(beta)?;
    let records = scenario
        .times
        .iter()
        .map(|&t| {
            let s = narrow_limit_closed_form(&variant.params, q0, p0, sigma_pq, t)?;
            Ok(ObservableRecord::from_narrow(t, &s, 0.0, sigma_pq))
        })
        .collect::<blochnh::Result<Vec<_>>>()?;
    Ok(MethodRun::new(Method::Narrow, records))
}

/// Histogram of member positions on the nearest site, weighted by
/// `weight · P_j`; members outside the window are dropped.
fn ensemble_histogram(window: SiteWindow, snapshot: &Ensemble) -> Vec<f64> {
    let top = snapshot.members.iter().map(|m| m.log_p).fold(f64::NEG_INFINITY, f64::max);
    let mut hist = vec![0.0; window.len()];
    for (w, m) in snapshot.weights.iter().zip(&snapshot.members) {
        if let Some(i) = window.index_of(m.q.round() as i64) {
            hist[i] += w * (m.log_p - top).exp();
        }
    }
    let sum: f64 = hist.iter().sum();
    if sum > 0.0 {
        hist.iter_mut().for_each(|h| *h /= sum);
    }
    hist
}

fn ensemble(scenario: &Scenario, variant: &Variant) -> blochnh::Result<MethodRun> {
    let start = match variant.initial {
        Initial::Site { site } => ensemble_from_site(site, scenario.ensemble_size)?,
        Initial::Gaussian { .. } => ensemble_from_gaussian(&variant.state, scenario.ensemble_size)?,
    };
    let snapshots = evolve_ensemble(&start, &variant.params, &scenario.times)?;
    let records = scenario
        .times
        .iter()
        .zip(&snapshots)
        .map(|(&t, s)| Ok(ObservableRecord::from_ensemble(t, &ensemble_averages(s)?)))
        .collect::<blochnh::Result<Vec<_>>>()?;
    let mut run = MethodRun::new(Method::Ensemble, records);
    run.density = Some(snapshots.iter().map(|s| ensemble_histogram(scenario.window, s)).collect());
    Ok(run)
}

fn perturbative(scenario: &Scenario, variant: &Variant) -> blochnh::Result<MethodRun> {
    let (beta, _, p0) = gaussian(variant);
    let (sigma_pp0, _, _) = beta_to_sigma(beta)?;
    let mut invalid = Vec::new();
    let mut records = Vec::with_capacity(scenario.times.len());
    for &t in &scenario.times {
        let mut r = ObservableRecord { t, ..ObservableRecord::default() };
        match perturbative_p(&variant.params, p0, sigma_pp0, t) {
            Ok((p, s)) => {
                r.p_circular = Some(p);
                r.sigma_pp = Some(s);
            }
            Err(Error::ApproximationInvalid { t }) => invalid.push(t),
            Err(e) => return Err(e),
        }
        records.push(r);
    }
    let mut run = MethodRun::new(Method::Perturbative, records);
    if let (Some(first), Some(last)) = (invalid.first(), invalid.last()) {
        run.notes.push(format!(
            "approximant invalid (denominator <= 0) at {} samples in t = [{first}, {last}]; left undefined",
            invalid.len()
        ));
    }
    Ok(run)
}

/// `sign(x) I_1(|x|)/I_0(|x|)` and `ln I_0(|x|)`.
fn bessel_ratio(x: f64) -> blochnh::Result<(f64, f64)> {
    let l0 = bessel_i_log(0, x.abs())?;
    if x == 0.0 {
        return Ok((0.0, l0));
    }
    Ok(((bessel_i_log(1, x.abs())? - l0).exp() * x.signum(), l0))
}

/// Single-site closed forms: Hatano-Nelson `ξ = (4g sinh μ/F) sin Ft`,
/// `⟨K⟩ = (I_1/I_0)(ξ) e^{i(π/2 - Ft)}`, `⟨N⟩ = n0 - (2g cosh μ/F) sin Ft (I_1/I_0)(ξ)`;
/// imaginary coupling `x = (4g/F) sin Ft`, `⟨K⟩ = (I_1/I_0)(x) e^{-iFt}`, `⟨N⟩ = n0`.
fn analytic(scenario: &Scenario, variant: &Variant) -> blochnh::Result<MethodRun> {
    let Initial::Site { site } = variant.initial else { unreachable!("validated: site initial state") };
    let f = variant.params.force();
    let n0 = site as f64;
    let records = scenario
        .times
        .iter()
        .map(|&t| {
            let s = (f * t).sin();
            let (log_p, n_mean, k, n_var) = match variant.preset {
                Preset::HatanoNelson { g, mu } => {
                    let (r, l0) = bessel_ratio(4.0 * g * mu.sinh() / f * s)?;
                    let n_var = (mu == 0.0).then(|| 2.0 * (g / f).powi(2) * s * s);
                    (l0, n0 - 2.0 * g * mu.cosh() / f * s * r, C64::from_polar(r, FRAC_PI_2 - f * t), n_var)
                }
                Preset::ImaginaryCoupling { g } => {
                    let (r, l0) = bessel_ratio(4.0 * g / f * s)?;
                    (l0, n0, C64::from_polar(r, -f * t), None)
                }
                Preset::Custom => unreachable!("validated: preset hoppings"),
            };
            Ok(ObservableRecord {
                t,
                norm: Some(log_p.exp()),
                log_norm: Some(log_p),
                n_mean: Some(n_mean),
                p_circular: (k.norm() > CIRCULAR_MEAN_FLOOR).then(|| k.arg()),
                n_var,
                ..ObservableRecord::default()
            })
        })
        .collect::<blochnh::Result<Vec<_>>>()?;
    Ok(MethodRun::new(Method::Analytic, records))
}
