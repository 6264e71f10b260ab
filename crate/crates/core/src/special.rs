//! Integer-order Bessel functions `J_n` and `I_n` of real argument.
//!
//! Small arguments (`|x| < 2`) use the ascending series. Otherwise `J_n` comes
//! from Miller's backward recurrence normalised with `J_0² + 2ΣJ_k² = 1` (sign
//! fixed by `J_0 + 2ΣJ_{2k} = 1`), and `I_n` from the backward recurrence of the
//! ratios `I_k/I_{k-1}` normalised with `e^{-x}(I_0 + 2ΣI_k) = 1`. The ratio form
//! never overflows, so it also yields `ln I_n(x)` for arguments where `I_n`
//! itself is not representable.

use crate::error::{Error, Result};

/// Largest `|x|` accepted by [`bessel_j`].
pub const J_ARG_LIMIT: f64 = 1e4;
/// Largest `|x|` accepted by [`bessel_i`]; beyond it use [`bessel_i_log`].
pub const I_ARG_LIMIT: f64 = 700.0;
/// Largest `x` accepted by [`bessel_i_log`].
pub const I_LOG_ARG_LIMIT: f64 = 1e5;

const SERIES_LIMIT: f64 = 2.0;
const RESCALE: f64 = 1e100;

/// A Bessel value tagged with the order and argument it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselResult {
    pub value: f64,
    pub order: i64,
    pub argument: f64,
}

impl BesselResult {
    pub fn j(order: i64, argument: f64) -> Result<Self> {
        Ok(Self { value: bessel_j(order, argument)?, order, argument })
    }

    pub fn i(order: i64, argument: f64) -> Result<Self> {
        Ok(Self { value: bessel_i(order, argument)?, order, argument })
    }
}

fn parity(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `J_n(x)`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    check_range(x, J_ARG_LIMIT)?;
    let order = n.unsigned_abs() as usize;
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
    let mut sign = if n < 0 { parity(n) } else { 1.0 };
    if x < 0.0 {
        sign *= parity(n);
    }
    let v = j_orders_nonneg(order, x.abs());
    Ok(sign * v[order])
}

/// `J_0(x), …, J_{n_max}(x)`.
pub fn bessel_j_orders(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_range(x, J_ARG_LIMIT)?;
    let mut v = j_orders_nonneg(n_max, x.abs());
    if x < 0.0 {
        v.iter_mut().skip(1).step_by(2).for_each(|j| *j = -*j);
    }
    Ok(v)
}

/// `I_n(x)` for `|x| <= 700`.
pub fn bessel_i(n: i64, x: f64) -> Result<f64> {
    check_range(x, I_ARG_LIMIT)?;
    let order = n.unsigned_abs() as usize;
    let sign = if x < 0.0 { parity(n) } else { 1.0 };
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    if ax < SERIES_LIMIT {
        return Ok(sign * i_series(order, ax));
    }
    let ratios = i_ratios(order, ax);
    let s = i_normaliser(&ratios);
    let prod: f64 = ratios[1..=order].iter().product();
    Ok(sign * ax.exp() * prod / s)
}

/// `ln I_n(x)` for `x >= 0`. Use parity for negative arguments.
pub fn bessel_i_log(n: i64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::InvalidArgument(format!("bessel_i_log needs x >= 0, got {x}")));
    }
    check_range(x, I_LOG_ARG_LIMIT)?;
    let order = n.unsigned_abs() as usize;
    Ok(bessel_i_log_orders(order, x)?[order])
}

/// `ln I_0(x), …, ln I_{n_max}(x)` for `x >= 0`; orders with `I_k(0) = 0` give
/// `-inf`.
pub fn bessel_i_log_orders(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if x < 0.0 {
        return Err(Error::InvalidArgument(format!("bessel_i_log needs x >= 0, got {x}")));
    }
    check_range(x, I_LOG_ARG_LIMIT)?;
    if x == 0.0 {
        let mut v = vec![f64::NEG_INFINITY; n_max + 1];
        v[0] = 0.0;
        return Ok(v);
    }
    if x < SERIES_LIMIT {
        return Ok((0..=n_max).map(|k| i_series_log(k, x)).collect());
    }
    let ratios = i_ratios(n_max, x);
    let log_i0 = x - i_normaliser(&ratios).ln();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = log_i0;
    out.push(acc);
    for r in &ratios[1..=n_max] {
        acc += r.ln();
        out.push(acc);
    }
    Ok(out)
}

fn check_range(x: f64, limit: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= limit {
        Ok(())
    } else {
        Err(Error::BesselRange { argument: x, limit })
    }
}

/// `J_0..J_{n_max}` at `x >= 0`.
fn j_orders_nonneg(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < SERIES_LIMIT {
        for (k, v) in out.iter_mut().enumerate() {
            *v = j_series(k, x);
        }
        return out;
    }
    let m = (n_max as f64).max(x);
    let start = (m + 30.0 + 2.0 * (160.0 * m).sqrt()).ceil() as usize;
    let start = start + start % 2;

    let two_over_x = 2.0 / x;
    let mut next = 0.0; // j_{k+1}
    let mut cur = 1.0; // j_k
    let mut sum_sq = 0.0; // Σ_{k>=1} j_k²
    let mut sum_even = 0.0; // Σ_{k>=2, even} j_k
    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = cur;
        }
        sum_sq += cur * cur;
        if k % 2 == 0 {
            sum_even += cur;
        }
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE {
            let s = 1.0 / RESCALE;
            cur *= s;
            next *= s;
            sum_sq *= s * s;
            sum_even *= s;
            out.iter_mut().skip(k).for_each(|v| *v *= s);
        }
    }
    out[0] = cur;
    let norm = (cur * cur + 2.0 * sum_sq).sqrt();
    let sign = (cur + 2.0 * sum_even).signum();
    let scale = sign / norm;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

fn j_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn i_series(n: usize, x: f64) -> f64 {
    i_series_log(n, x).exp()
}

/// `ln I_n(x)` from the ascending series, factoring out the leading term so
/// high orders do not underflow.
fn i_series_log(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut log_lead = 0.0;
    for k in 1..=n {
        log_lead += (half / k as f64).ln();
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    log_lead + sum.ln()
}

/// `r_k = I_k/I_{k-1}` for `k = 1..=N` (index 0 unused), with `N` far enough
/// beyond both `n_max` and the decay scale `√x` for the backward recurrence to
/// have converged.
fn i_ratios(n_max: usize, x: f64) -> Vec<f64> {
    let start = n_max + 40 + (10.0 * x.sqrt()).ceil() as usize;
    let mut r = vec![0.0; start + 1];
    let mut next = 0.0;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        let v = 1.0 / (k as f64 * two_over_x + next);
        r[k] = v;
        next = v;
    }
    r
}

/// `S = e^{x} / I_0(x) = 1 + 2 Σ_{k>=1} Π_{j<=k} r_j`.
fn i_normaliser(ratios: &[f64]) -> f64 {
    let mut prod = 1.0;
    let mut s = 1.0;
    for r in &ratios[1..] {
        prod *= r;
        s += 2.0 * prod;
        if prod < 1e-18 * s {
            break;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    /// Σ_k (-1)^k (x/2)^{2k+n} / (k!(k+n)!) summed until the terms vanish.
    fn j_power_series(n: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..300 {
            term *= -(x * x / 4.0) / (k as f64 * (k + n as usize) as f64);
            sum += term;
            if term == 0.0 {
                break;
            }
        }
        sum
    }

    /// Σ_k (x/2)^{2k+n} / (k!(k+n)!); all terms positive, so accurate for any x.
    fn i_power_series(n: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..2000 {
            term *= (x * x / 4.0) / (k as f64 * (k + n as usize) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    }

    #[test]
    fn j_trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(bessel_j(1, 1.0).unwrap(), j_power_series(1, 1.0), max_relative = 1e-15);
        assert_relative_eq!(bessel_j(1, 1.0).unwrap(), 0.4400505857449335, max_relative = 1e-15);
    }

    #[test]
    fn j_matches_series_oracle_at_moderate_argument() {
        for &x in &[0.3, 1.9, 2.0, 3.7, 6.0] {
            for n in 0..12u32 {
                let got = bessel_j(n as i64, x).unwrap();
                let want = j_power_series(n, x);
                assert!((got - want).abs() <= 1e-14 * want.abs().max(1e-3), "n={n} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn j_matches_libm_over_figure_range() {
        for i in 0..400 {
            let x = -50.0 + 0.25 * i as f64 + 0.0123;
            for n in [0i32, 1, 2, 5, 13, 30, 47, 60, 90] {
                let got = bessel_j(n as i64, x).unwrap();
                let want = libm::jn(n, x);
                let err = (got - want).abs();
                if want.abs() >= 1e-3 {
                    assert!(err <= 1e-12 * want.abs(), "n={n} x={x}: {got} vs {want}");
                } else {
                    assert!(err <= 1e-15, "n={n} x={x}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn j_symmetries() {
        for &x in &[0.5, 3.0, 17.5, -8.2] {
            for n in 1..10 {
                let pos = bessel_j(n, x).unwrap();
                assert_relative_eq!(bessel_j(-n, x).unwrap(), parity(n) * pos);
                assert_relative_eq!(bessel_j(n, -x).unwrap(), parity(n) * pos);
            }
        }
    }

    #[test]
    fn j_orders_agree_with_single() {
        let v = bessel_j_orders(40, -13.3).unwrap();
        for (n, j) in v.iter().enumerate() {
            assert_relative_eq!(*j, bessel_j(n as i64, -13.3).unwrap(), epsilon = 1e-15);
        }
    }

    #[test]
    fn j_range_error() {
        assert!(matches!(bessel_j(0, 2e4), Err(Error::BesselRange { .. })));
        assert!(bessel_j(0, f64::NAN).is_err());
        assert!(bessel_j(2, 9999.0).unwrap().abs() < 0.01);
    }

    #[test]
    fn j_large_argument_against_libm() {
        for &x in &[200.0, 1234.5, 9999.0] {
            for n in [0i32, 1, 7, 50] {
                let got = bessel_j(n as i64, x).unwrap();
                assert!((got - libm::jn(n, x)).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn i_trivial_values() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        let x = 4.0 * 0.1f64.sinh() / 0.1;
        assert_relative_eq!(x, 4.006671, epsilon = 1e-6);
        assert_relative_eq!(bessel_i(0, x).unwrap(), i_power_series(0, x), max_relative = 1e-14);
    }

    #[test]
    fn i_matches_series_oracle() {
        for &x in &[0.01, 0.7, 1.99, 2.0, 4.5, 10.0, 20.0, 35.5, 50.0] {
            for n in [0u32, 1, 2, 3, 8, 20, 45] {
                let got = bessel_i(n as i64, x).unwrap();
                let want = i_power_series(n, x);
                assert_relative_eq!(got, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn i_symmetries() {
        for &x in &[0.5, 3.0, 17.5] {
            for n in 1..8 {
                let pos = bessel_i(n, x).unwrap();
                assert_eq!(bessel_i(-n, x).unwrap(), pos);
                assert_relative_eq!(bessel_i(n, -x).unwrap(), parity(n) * pos);
            }
        }
    }

    #[test]
    fn i_range_error() {
        assert!(matches!(bessel_i(0, 701.0), Err(Error::BesselRange { .. })));
        assert!(bessel_i(0, 699.0).unwrap().is_finite());
        assert!(bessel_i_log(0, -1.0).is_err());
    }

    #[test]
    fn i_log_values() {
        assert_eq!(bessel_i_log(0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i_log(3, 0.0).unwrap(), f64::NEG_INFINITY);
        assert_relative_eq!(bessel_i_log(2, 10.0).unwrap(), bessel_i(2, 10.0).unwrap().ln(), epsilon = 1e-13);
        assert_relative_eq!(bessel_i_log(0, 50.0).unwrap(), i_power_series(0, 50.0).ln(), epsilon = 1e-12);
    }

    /// Hankel expansion: ln I_n(x) ~ x - ½ ln(2πx) + ln Σ_k (-1)^k a_k(n)/x^k.
    fn i_log_asymptotic(n: i64, x: f64) -> f64 {
        let mu = 4.0 * (n * n) as f64;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..12 {
            let odd = (2 * k - 1) as f64;
            term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
            sum += term;
        }
        x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln()
    }

    #[test]
    fn i_log_large_argument() {
        for &x in &[50.0, 300.0, 700.0, 2500.0, 1e4] {
            for n in [0i64, 1, 4] {
                let got = bessel_i_log(n, x).unwrap();
                let want = i_log_asymptotic(n, x);
                assert!((got - want).abs() < 1e-10, "n={n} x={x}: {got} vs {want}");
            }
        }
        // Overlap with the direct evaluation.
        for &x in &[300.0, 650.0] {
            assert_relative_eq!(bessel_i_log(1, x).unwrap(), bessel_i(1, x).unwrap().ln(), epsilon = 1e-12);
        }
    }

    #[test]
    fn i_log_high_order_does_not_underflow() {
        let v = bessel_i_log(500, 1.0).unwrap();
        assert!(v.is_finite() && v < -2000.0);
        let v2 = bessel_i_log(500, 3.0).unwrap();
        assert!(v2.is_finite());
        assert_relative_eq!(bessel_i_log(30, 3.0).unwrap(), i_power_series(30, 3.0).ln(), epsilon = 1e-12);
    }

    #[test]
    fn result_wrapper() {
        let r = BesselResult::j(2, 3.0).unwrap();
        assert_eq!((r.order, r.argument), (2, 3.0));
        assert_eq!(r.value, bessel_j(2, 3.0).unwrap());
        assert_eq!(BesselResult::i(1, 2.5).unwrap().value, bessel_i(1, 2.5).unwrap());
    }
}
