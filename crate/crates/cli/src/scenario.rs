//! Scenario files: TOML parsing and validation against the engine preconditions.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use blochnh::classical::beta_to_sigma;
use blochnh::ensemble::MIN_MEMBERS;
use blochnh::quantum::{gaussian_state, site_state, LatticeState, SiteWindow, DEFAULT_LEAK_THRESHOLD};
use blochnh::{ModelParams, C64};
use serde::Deserialize;

use crate::error::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Direct,
    ClosedForm,
    WeiNorman,
    Classical,
    Narrow,
    Ensemble,
    Perturbative,
    Analytic,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Direct,
        Method::ClosedForm,
        Method::WeiNorman,
        Method::Classical,
        Method::Narrow,
        Method::Ensemble,
        Method::Perturbative,
        Method::Analytic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::ClosedForm => "closed_form",
            Method::WeiNorman => "wei_norman",
            Method::Classical => "classical",
            Method::Narrow => "narrow",
            Method::Ensemble => "ensemble",
            Method::Perturbative => "perturbative",
            Method::Analytic => "analytic",
        }
    }

    pub fn parse(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }

    /// Methods that produce lattice amplitudes.
    pub fn is_wavefunction(self) -> bool {
        matches!(self, Method::Direct | Method::ClosedForm | Method::WeiNorman)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    P,
    LogP,
    NMean,
    PCircular,
    NVar,
    SigmaPp,
    SigmaPq,
    SigmaQq,
    /// Renormalised site density, maximum over sites.
    Density,
    /// Amplitudes relative to the second method's norm, maximum over sites.
    Amplitude,
}

impl Observable {
    pub const ALL: [Observable; 10] = [
        Observable::P,
        Observable::LogP,
        Observable::NMean,
        Observable::PCircular,
        Observable::NVar,
        Observable::SigmaPp,
        Observable::SigmaPq,
        Observable::SigmaQq,
        Observable::Density,
        Observable::Amplitude,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::P => "P",
            Observable::LogP => "logP",
            Observable::NMean => "n_mean",
            Observable::PCircular => "p_circular",
            Observable::NVar => "n_var",
            Observable::SigmaPp => "sigma_pp",
            Observable::SigmaPq => "sigma_pq",
            Observable::SigmaQq => "sigma_qq",
            Observable::Density => "density",
            Observable::Amplitude => "amplitude",
        }
    }

    pub fn parse(name: &str) -> Option<Observable> {
        Observable::ALL.into_iter().find(|o| o.name() == name)
    }

    pub fn is_series(self) -> bool {
        !matches!(self, Observable::Density | Observable::Amplitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    HatanoNelson { g: f64, mu: f64 },
    ImaginaryCoupling { g: f64 },
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Gaussian { beta: C64, q0: f64, p0: f64 },
    Site { site: i64 },
}

#[derive(Debug, Clone)]
pub struct Variant {
    pub name: String,
    pub params: ModelParams,
    pub preset: Preset,
    pub initial: Initial,
    pub state: LatticeState,
}

#[derive(Debug, Clone)]
pub enum Reference {
    Method(Method),
    Value(f64),
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reference::Method(m) => write!(f, "{m}"),
            Reference::Value(v) => write!(f, "{v}"),
        }
    }
}

/// `|a - b| ≤ max(abs, rel·|b|)` at every sample; an absent bound is not used.
#[derive(Debug, Clone)]
pub struct Tolerance {
    pub observable: Observable,
    pub a: Method,
    pub b: Reference,
    pub abs: Option<f64>,
    pub rel: Option<f64>,
    /// Restricts the check to one variant; all variants otherwise.
    pub variant: Option<String>,
    /// Samples with `t` in this closed interval only.
    pub t_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub variants: Vec<Variant>,
    pub window: SiteWindow,
    pub kappa_points: usize,
    pub times: Vec<f64>,
    pub dt: f64,
    pub classical_dt: f64,
    pub methods: Vec<Method>,
    pub ensemble_size: usize,
    pub check_convergence: bool,
    pub leak_threshold: f64,
    pub tolerances: Vec<Tolerance>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum BetaValue {
    Real(f64),
    Complex([f64; 2]),
}

impl BetaValue {
    fn value(self) -> C64 {
        match self {
            BetaValue::Real(re) => C64::new(re, 0.0),
            BetaValue::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum BetaSpec {
    One(BetaValue),
    Many(Vec<BetaValue>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    description: String,
    model: RawModel,
    initial: RawInitial,
    #[serde(default)]
    grid: RawGrid,
    time: RawTime,
    run: RawRun,
    #[serde(default)]
    variant: Vec<RawVariant>,
    #[serde(default)]
    tolerance: Vec<RawTolerance>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    preset: String,
    g: Option<f64>,
    mu: Option<f64>,
    #[serde(rename = "F")]
    force: f64,
    g1: Option<[f64; 2]>,
    g2: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    kind: String,
    beta: Option<BetaSpec>,
    q0: Option<f64>,
    p0: Option<f64>,
    site: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n_min: i64,
    n_max: i64,
    kappa_points: usize,
}

impl Default for RawGrid {
    fn default() -> Self {
        Self { n_min: -200, n_max: 200, kappa_points: 1024 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_max: Option<f64>,
    bloch_periods: Option<f64>,
    dt: Option<f64>,
    output_every: Option<u64>,
    classical_dt: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    methods: Vec<String>,
    ensemble_size: Option<usize>,
    check_convergence: Option<bool>,
    leak_threshold: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariant {
    name: String,
    g: Option<f64>,
    mu: Option<f64>,
    beta: Option<BetaValue>,
    q0: Option<f64>,
    p0: Option<f64>,
    site: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerance {
    observable: String,
    a: String,
    b: Option<String>,
    value: Option<f64>,
    abs: Option<f64>,
    rel: Option<f64>,
    variant: Option<String>,
    t_range: Option<[f64; 2]>,
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> Failure {
    Failure::Validation { key: key.into(), message: message.into() }
}

fn finite(key: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be finite, got {v}")))
    }
}

fn positive(key: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be positive, got {v}")))
    }
}

const DEFAULT_DT: f64 = 1e-3;
const DEFAULT_CLASSICAL_DT: f64 = 2e-4;
const DEFAULT_OUTPUT_EVERY: u64 = 100;
const DEFAULT_ENSEMBLE_SIZE: usize = 1024;

/// Output times `k·dt·output_every`, closed by `t_max` itself when it is not on the grid.
fn time_grid(t_max: f64, spacing: f64) -> Vec<f64> {
    let ratio = t_max / spacing;
    let count = (ratio + 1e-9).floor() as u64;
    let mut times: Vec<f64> = (0..=count).map(|k| k as f64 * spacing).collect();
    if (ratio - count as f64).abs() > 1e-9 {
        times.push(t_max);
    } else if let Some(last) = times.last_mut() {
        *last = t_max;
    }
    times
}

struct VariantInput {
    name: String,
    g: Option<f64>,
    mu: Option<f64>,
    beta: Option<C64>,
    q0: Option<f64>,
    p0: Option<f64>,
    site: Option<i64>,
}

fn build_model(model: &RawModel, g: Option<f64>, mu: Option<f64>) -> Result<(ModelParams, Preset), Failure> {
    let force = finite("model.F", model.force)?;
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| invalid(key, "required for this preset"));
    match model.preset.as_str() {
        "hatano_nelson" => {
            let g = finite("model.g", need(g, "model.g")?)?;
            let mu = finite("model.mu", need(mu, "model.mu")?)?;
            let params = ModelParams::hatano_nelson(g, mu, force).map_err(|e| invalid("model", e.to_string()))?;
            Ok((params, Preset::HatanoNelson { g, mu }))
        }
        "imaginary_coupling" => {
            if mu.is_some() {
                return Err(invalid("model.mu", "not used by the imaginary_coupling preset"));
            }
            let g = finite("model.g", need(g, "model.g")?)?;
            let params = ModelParams::imaginary_coupling(g, force).map_err(|e| invalid("model", e.to_string()))?;
            Ok((params, Preset::ImaginaryCoupling { g }))
        }
        "custom" => {
            let g1 = model.g1.ok_or_else(|| invalid("model.g1", "required for the custom preset"))?;
            let g2 = model.g2.ok_or_else(|| invalid("model.g2", "required for the custom preset"))?;
            if g.is_some() || mu.is_some() {
                return Err(invalid("model.g", "custom hoppings are given as g1/g2"));
            }
            let params = ModelParams::new(C64::new(g1[0], g1[1]), C64::new(g2[0], g2[1]), force)
                .map_err(|e| invalid("model.g1", e.to_string()))?;
            Ok((params, Preset::Custom))
        }
        other => Err(invalid(
            "model.preset",
            format!("unknown preset {other:?} (hatano_nelson, imaginary_coupling, custom)"),
        )),
    }
}

fn build_variant(model: &RawModel, kind: &str, input: VariantInput, window: SiteWindow) -> Result<Variant, Failure> {
    let (params, preset) = build_model(model, input.g, input.mu)?;
    if params.force() == 0.0 {
        return Err(invalid("model.F", "a nonzero force is required"));
    }
    let (initial, state) = match kind {
        "gaussian" => {
            let beta = input.beta.ok_or_else(|| invalid("initial.beta", "required for a gaussian"))?;
            beta_to_sigma(beta).map_err(|e| invalid("initial.beta", e.to_string()))?;
            let q0 = finite("initial.q0", input.q0.unwrap_or(0.0))?;
            let p0 = finite("initial.p0", input.p0.unwrap_or(0.0))?;
            let state = gaussian_state(window, beta, q0, p0).map_err(|e| invalid("initial.beta", e.to_string()))?;
            (Initial::Gaussian { beta, q0, p0 }, state)
        }
        "site" => {
            if input.beta.is_some() {
                return Err(invalid("initial.beta", "not used by a site initial state"));
            }
            let site = input.site.unwrap_or(0);
            let state = site_state(window, site).map_err(|e| invalid("initial.site", e.to_string()))?;
            (Initial::Site { site }, state)
        }
        other => return Err(invalid("initial.kind", format!("unknown kind {other:?} (gaussian, site)"))),
    };
    Ok(Variant { name: input.name, params, preset, initial, state })
}

fn check_method(
    method: Method,
    variant: &Variant,
    scenario_window: SiteWindow,
    kappa_points: usize,
) -> Result<(), Failure> {
    let key = "run.methods";
    let gaussian = matches!(variant.initial, Initial::Gaussian { .. });
    let preset = !matches!(variant.preset, Preset::Custom);
    match method {
        Method::Classical | Method::Narrow | Method::Perturbative if !gaussian => {
            Err(invalid(key, format!("{method} needs a gaussian initial state")))
        }
        Method::ClosedForm | Method::Perturbative if !preset => {
            Err(invalid(key, format!("{method} needs the hatano_nelson or imaginary_coupling preset")))
        }
        Method::Analytic if gaussian || !preset => Err(invalid(
            key,
            "analytic references need a site initial state and the hatano_nelson or imaginary_coupling preset",
        )),
        Method::WeiNorman if kappa_points < scenario_window.len() => Err(invalid(
            "grid.kappa_points",
            format!("{kappa_points} points for a window of {} sites", scenario_window.len()),
        )),
        _ => Ok(()),
    }
}

pub fn parse_scenario(name: &str, text: &str) -> Result<Scenario, Failure> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| Failure::Parse(e.to_string()))?;

    let window = SiteWindow::new(raw.grid.n_min, raw.grid.n_max).map_err(|e| invalid("grid", e.to_string()))?;
    let kappa_points = raw.grid.kappa_points;
    if kappa_points == 0 {
        return Err(invalid("grid.kappa_points", "must be positive"));
    }

    let kind = raw.initial.kind.as_str();
    let base = |name: String, beta: Option<C64>| VariantInput {
        name,
        g: raw.model.g,
        mu: raw.model.mu,
        beta,
        q0: raw.initial.q0,
        p0: raw.initial.p0,
        site: raw.initial.site,
    };
    let mut inputs = Vec::new();
    match &raw.initial.beta {
        Some(BetaSpec::Many(list)) => {
            if list.is_empty() {
                return Err(invalid("initial.beta", "empty list"));
            }
            if !raw.variant.is_empty() {
                return Err(invalid("variant", "cannot be combined with a list of initial.beta values"));
            }
            for (i, b) in list.iter().enumerate() {
                inputs.push(base(format!("beta_{i}"), Some(b.value())));
            }
        }
        single => {
            let beta = match single {
                Some(BetaSpec::One(b)) => Some(b.value()),
                _ => None,
            };
            if raw.variant.is_empty() {
                inputs.push(base(String::new(), beta));
            }
            for (i, v) in raw.variant.iter().enumerate() {
                if v.name.is_empty()
                    || v.name.contains(['/', '\\'])
                    || inputs.iter().any(|x: &VariantInput| x.name == v.name)
                {
                    return Err(invalid(
                        format!("variant[{i}].name"),
                        format!("{:?} is empty, repeated or not a plain name", v.name),
                    ));
                }
                let mut input = base(v.name.clone(), beta);
                input.g = v.g.or(input.g);
                input.mu = v.mu.or(input.mu);
                input.beta = v.beta.map(BetaValue::value).or(input.beta);
                input.q0 = v.q0.or(input.q0);
                input.p0 = v.p0.or(input.p0);
                input.site = v.site.or(input.site);
                inputs.push(input);
            }
        }
    }
    let variants = inputs
        .into_iter()
        .map(|input| build_variant(&raw.model, kind, input, window))
        .collect::<Result<Vec<_>, _>>()?;

    let dt = positive("time.dt", raw.time.dt.unwrap_or(DEFAULT_DT))?;
    let classical_dt = positive("time.classical_dt", raw.time.classical_dt.unwrap_or(DEFAULT_CLASSICAL_DT))?;
    let output_every = raw.time.output_every.unwrap_or(DEFAULT_OUTPUT_EVERY);
    if output_every == 0 {
        return Err(invalid("time.output_every", "must be at least 1"));
    }
    let force = variants[0].params.force();
    let t_max = match (raw.time.t_max, raw.time.bloch_periods) {
        (Some(t), None) => positive("time.t_max", t)?,
        (None, Some(n)) => positive("time.bloch_periods", n)? * PI / force.abs(),
        _ => return Err(invalid("time.t_max", "give exactly one of t_max and bloch_periods")),
    };
    let times = time_grid(t_max, dt * output_every as f64);

    if raw.run.methods.is_empty() {
        return Err(invalid("run.methods", "no methods requested"));
    }
    let mut methods = Vec::new();
    for (i, name) in raw.run.methods.iter().enumerate() {
        let m = Method::parse(name).ok_or_else(|| {
            invalid(
                format!("run.methods[{i}]"),
                format!("unknown method {name:?} ({})", Method::ALL.map(Method::name).join(", ")),
            )
        })?;
        if methods.contains(&m) {
            return Err(invalid(format!("run.methods[{i}]"), format!("{name} listed twice")));
        }
        methods.push(m);
    }
    for v in &variants {
        for &m in &methods {
            check_method(m, v, window, kappa_points)?;
        }
    }
    let ensemble_size = raw.run.ensemble_size.unwrap_or(DEFAULT_ENSEMBLE_SIZE);
    if ensemble_size < MIN_MEMBERS {
        return Err(invalid("run.ensemble_size", format!("needs at least {MIN_MEMBERS} members")));
    }
    let leak_threshold = positive("run.leak_threshold", raw.run.leak_threshold.unwrap_or(DEFAULT_LEAK_THRESHOLD))?;

    let mut tolerances = Vec::new();
    for (i, t) in raw.tolerance.iter().enumerate() {
        let key = |field: &str| format!("tolerance[{i}].{field}");
        let observable = Observable::parse(&t.observable).ok_or_else(|| {
            invalid(
                key("observable"),
                format!("unknown observable {:?} ({})", t.observable, Observable::ALL.map(Observable::name).join(", ")),
            )
        })?;
        let lookup = |name: &str, field: &str| -> Result<Method, Failure> {
            let m = Method::parse(name).ok_or_else(|| invalid(key(field), format!("unknown method {name:?}")))?;
            if !methods.contains(&m) {
                return Err(invalid(key(field), format!("{name} is not in run.methods")));
            }
            Ok(m)
        };
        let a = lookup(&t.a, "a")?;
        let b = match (&t.b, t.value) {
            (Some(b), None) => Reference::Method(lookup(b, "b")?),
            (None, Some(v)) => Reference::Value(finite(&key("value"), v)?),
            _ => return Err(invalid(key("b"), "give exactly one of b and value")),
        };
        if !observable.is_series() {
            let wave = |m: Method| m.is_wavefunction();
            if !wave(a) || !matches!(b, Reference::Method(m) if wave(m)) {
                return Err(invalid(
                    key("observable"),
                    format!("{} compares two of direct, closed_form, wei_norman", observable.name()),
                ));
            }
            if t.abs.is_none() || t.rel.is_some() {
                return Err(invalid(key("abs"), format!("{} takes an abs bound only", observable.name())));
            }
        }
        if t.abs.is_none() && t.rel.is_none() {
            return Err(invalid(key("abs"), "give abs, rel or both"));
        }
        for (field, v) in [("abs", t.abs), ("rel", t.rel)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(invalid(key(field), format!("must be a nonnegative number, got {v}")));
                }
            }
        }
        if let Some(name) = &t.variant {
            if !variants.iter().any(|v| &v.name == name) {
                return Err(invalid(key("variant"), format!("no variant named {name:?}")));
            }
        }
        let t_range = match t.t_range {
            Some([lo, hi]) if lo <= hi && lo.is_finite() && hi.is_finite() => Some((lo, hi)),
            Some(_) => return Err(invalid(key("t_range"), "needs finite [lo, hi] with lo <= hi")),
            None => None,
        };
        tolerances.push(Tolerance { observable, a, b, abs: t.abs, rel: t.rel, variant: t.variant.clone(), t_range });
    }

    Ok(Scenario {
        name: name.to_string(),
        description: raw.description,
        variants,
        window,
        kappa_points,
        times,
        dt,
        classical_dt,
        methods,
        ensemble_size,
        check_convergence: raw.run.check_convergence.unwrap_or(false),
        leak_threshold,
        tolerances,
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(name, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HN: &str = r#"
        [model]
        preset = "hatano_nelson"
        g = 1.0
        mu = 0.2
        F = 0.1
        [initial]
        kind = "gaussian"
        beta = 0.02
        [time]
        bloch_periods = 1
        output_every = 1000
        [run]
        methods = ["direct", "classical"]
    "#;

    fn key_of(text: &str) -> String {
        match parse_scenario("t", text).unwrap_err() {
            Failure::Validation { key, .. } => key,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimal_scenario() {
        let s = parse_scenario("t", HN).unwrap();
        assert_eq!(s.variants.len(), 1);
        assert_eq!(s.window.len(), 401);
        assert_eq!(s.times[0], 0.0);
        assert_eq!(*s.times.last().unwrap(), PI / 0.1);
        assert!(s.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(s.methods, vec![Method::Direct, Method::Classical]);
    }

    #[test]
    fn grid_on_and_off_spacing() {
        assert_eq!(time_grid(1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(time_grid(0.6, 0.25), vec![0.0, 0.25, 0.5, 0.6]);
    }

    #[test]
    fn errors_name_the_key() {
        assert_eq!(key_of(&HN.replace("mu = 0.2", "")), "model.mu");
        assert_eq!(key_of(&HN.replace("\"hatano_nelson\"", "\"hn\"")), "model.preset");
        assert_eq!(key_of(&HN.replace("beta = 0.02", "beta = -0.02")), "initial.beta");
        assert_eq!(key_of(&HN.replace("beta = 0.02", "beta = 0.00001")), "initial.beta");
        assert_eq!(key_of(&HN.replace("\"classical\"", "\"magic\"")), "run.methods[1]");
        assert_eq!(key_of(&HN.replace("bloch_periods = 1", "")), "time.t_max");
        assert_eq!(key_of(&HN.replace("output_every = 1000", "output_every = 0")), "time.output_every");
        assert_eq!(key_of(&HN.replace("kind = \"gaussian\"\n        beta = 0.02", "kind = \"site\"")), "run.methods");
        let tol = format!("{HN}\n[[tolerance]]\nobservable = \"n_mean\"\na = \"direct\"\nb = \"narrow\"\nabs = 1.0\n");
        assert_eq!(key_of(&tol), "tolerance[0].b");
        let tol =
            format!("{HN}\n[[tolerance]]\nobservable = \"density\"\na = \"direct\"\nb = \"classical\"\nabs = 1.0\n");
        assert_eq!(key_of(&tol), "tolerance[0].observable");
    }

    #[test]
    fn unknown_keys_are_parse_errors() {
        let text = HN.replace("mu = 0.2", "mu = 0.2\nnu = 1");
        assert!(matches!(parse_scenario("t", &text), Err(Failure::Parse(_))));
    }

    #[test]
    fn beta_list_expands_to_variants() {
        let text = HN.replace("beta = 0.02", "beta = [[0.05, 0.0], [0.05, 0.025], 0.05]");
        let s = parse_scenario("t", &text).unwrap();
        let names: Vec<_> = s.variants.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["beta_0", "beta_1", "beta_2"]);
        assert!(matches!(s.variants[1].initial, Initial::Gaussian { beta, .. } if beta == C64::new(0.05, 0.025)));
    }

    #[test]
    fn variants_override_model_and_initial() {
        let text = format!("{HN}\n[[variant]]\nname = \"plus\"\n[[variant]]\nname = \"minus\"\nmu = -0.2\n");
        let s = parse_scenario("t", &text).unwrap();
        assert_eq!(s.variants[0].preset, Preset::HatanoNelson { g: 1.0, mu: 0.2 });
        assert_eq!(s.variants[1].preset, Preset::HatanoNelson { g: 1.0, mu: -0.2 });
    }
}
