//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// `Σ |K₁₅ − G₇|` over the final partition.
    pub error_estimate: f64,
    pub evaluations: u64,
}

impl QuadratureResult {
    fn combine(self, other: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

// Kronrod abscissae on [0, 1) in decreasing order; odd indices are the
// Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

pub const DEFAULT_ABS_TOL: f64 = 1e-13;
pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const MAX_INTERVALS: usize = 2000;

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|I|)`, bisecting the panel with the
/// largest error estimate until the total estimate meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadratureResult> {
    let mut panels = vec![gk15(&f, a, b)];
    let mut evaluations = 15u64;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature(format!(
                "non-finite partial result on [{a}, {b}] after {evaluations} evaluations"
            )));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadratureResult { value, error_estimate: error, evaluations });
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "[{a}, {b}]: error estimate {error:e} above tolerance after {} panels, value {value}",
                panels.len()
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
        evaluations += 30;
    }
}

/// `∫_a^∞ g` through `u = a + s/(1 − s)`, `s ∈ [0, 1)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(g: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate(
        |s| {
            let w = 1.0 - s;
            let v = g(a + s / w);
            if v == 0.0 { 0.0 } else { v / (w * w) }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Where the logarithmic end pieces are split off.
pub const SPLIT: f64 = 1e-3;

/// `∫_a^b f(t, 1 − t) dt` on a subinterval of `[0, 1]` for integrands with
/// logarithmic behaviour at the marked ends. A singular left end must be
/// `a = 0` and is handled with `t = e^{−u}` on `[0, SPLIT]`; a singular right
/// end must be `b = 1` and is handled with `1 − t = e^{−u}` on
/// `[1 − SPLIT, 1]`. The integrand receives both `t` and `1 − t` so neither
/// is formed by cancellation.
pub fn integrate_log_ends<F>(f: F, a: f64, b: f64, left_singular: bool, right_singular: bool) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> f64,
{
    assert!(!left_singular || a == 0.0, "a singular left end must be 0");
    assert!(!right_singular || b == 1.0, "a singular right end must be 1");
    let (abs_tol, rel_tol) = (DEFAULT_ABS_TOL, DEFAULT_REL_TOL);
    let cut = -SPLIT.ln();
    let lo = if left_singular { SPLIT } else { a };
    let hi = if right_singular { 1.0 - SPLIT } else { b };
    let mut total = integrate(|t| f(t, 1.0 - t), lo, hi, abs_tol, rel_tol)?;
    if left_singular {
        let piece = integrate_to_infinity(
            |u| {
                let t = (-u).exp();
                if t == 0.0 { 0.0 } else { f(t, -(-u).exp_m1()) * t }
            },
            cut,
            abs_tol,
            rel_tol,
        )?;
        total = total.combine(piece);
    }
    if right_singular {
        let piece = integrate_to_infinity(
            |u| {
                let s = (-u).exp();
                if s == 0.0 { 0.0 } else { f(-(-u).exp_m1(), s) * s }
            },
            cut,
            abs_tol,
            rel_tol,
        )?;
        total = total.combine(piece);
    }
    Ok(total)
}

/// [`integrate_log_ends`] over the whole unit interval.
pub fn integrate_unit_log_ends<F>(f: F, left_singular: bool, right_singular: bool) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> f64,
{
    integrate_log_ends(f, 0.0, 1.0, left_singular, right_singular)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(20) - 3.0 * x.powi(7), 0.0, 1.0, 1e-14, 0.0).unwrap();
        assert!((r.value - (1.0 / 21.0 - 3.0 / 8.0)).abs() < 1e-15);
        assert!(r.error_estimate >= 0.0 && r.evaluations > 0);
    }

    #[test]
    fn log_singularity() {
        let r = integrate_unit_log_ends(|t, _| t.ln(), true, false).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12, "{r:?}");
        let r = integrate_unit_log_ends(|_, s| s.ln(), false, true).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate_to_infinity(|u| (-u * u).exp(), 0.0, 1e-14, 1e-13).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let err = integrate(|x| (1.0 / x).sin() / x, 1e-9, 1.0, 1e-15, 0.0).unwrap_err();
        assert!(matches!(err, Error::Quadrature(_)));
    }
}
