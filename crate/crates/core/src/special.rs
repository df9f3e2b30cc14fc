//! Special functions behind the critical constants and their roots.
//!
//! * `ψ(t) = (t+1)ln(t+1) + (t−1)ln(t−1) − 2t` on `(1, ∞)`, with `ψ'(t) = ln(t²−1)`;
//!   its unique zero is the critical constant `c₀ ∈ (2.50, 2.51)`.
//! * `Ψ(β) = (c+1)^β + (c−1)^β − 2βc`, with `Ψ(1) = 0` and `Ψ'(1) = ψ(c)`.
//! * `I(α) = (1/2π) ∫₀^{2π} |1 + c e^{it}|^{−α} dt`, with `I(0) = 1` and `I'(0) = −ln c`.
//!
//! `ψ` decreases on `(1, √2)` and increases on `(√2, ∞)`. (The monotonicity
//! claim is sometimes stated on `(0, √2)`, but `ψ` is only defined for `t > 1`.)
//!
//! All roots are found by plain bisection with a bracket-width tolerance.

use std::f64::consts::{LN_2, SQRT_2};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quad::{periodic_mean, QuadConfig};

/// Right end of the bracket used for `c₀`.
const C0_BRACKET_HI: f64 = 10.0;
/// Ceiling of the geometric scan for the cutoff `M̃`.
const TILDE_M_CEILING: f64 = 1e10;
/// Node cap for the periodic trapezoid in `I(α)`.
const I_MAX_NODES: usize = 1 << 20;

/// Value of a threshold: finite, or explicitly unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdValue {
    Finite(f64),
    Unbounded,
}

impl ThresholdValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            ThresholdValue::Finite(v) => Some(v),
            ThresholdValue::Unbounded => None,
        }
    }
}

impl Serialize for ThresholdValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ThresholdValue::Finite(v) => crate::sigfmt::sig17(v, s),
            ThresholdValue::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub value: ThresholdValue,
    /// Final bisection bracket (or the sampled range for `Unbounded`).
    #[serde(serialize_with = "crate::sigfmt::sig17_pair")]
    pub bracket: (f64, f64),
    /// Defining function at the returned value (at `alpha_max` when unbounded).
    #[serde(serialize_with = "crate::sigfmt::sig17")]
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalConstants {
    #[serde(serialize_with = "crate::sigfmt::sig17")]
    pub c0: f64,
    #[serde(serialize_with = "crate::sigfmt::sig17")]
    pub psi_min_location: f64,
    #[serde(serialize_with = "crate::sigfmt::sig17")]
    pub psi_limit_at_1: f64,
    /// Final bracket width.
    #[serde(serialize_with = "crate::sigfmt::sig17")]
    pub bracket_width: f64,
}

/// `u ln u`, continuous at `u = 0` where it is 0.
fn xlogx(u: f64) -> f64 {
    if u < f64::MIN_POSITIVE {
        0.0
    } else {
        u * u.ln()
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 1.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("ψ is defined for t > 1, got {t}")))
    }
}

pub fn psi(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(xlogx(t + 1.0) + xlogx(t - 1.0) - 2.0 * t)
}

/// `lim_{t→1⁺} ψ(t) = 2 ln 2 − 2`.
pub fn psi_limit_at_1() -> f64 {
    2.0 * LN_2 - 2.0
}

pub fn psi_prime(t: f64) -> Result<f64> {
    check_t(t)?;
    // t² − 1 = (t − 1)(t + 1) keeps precision near t = 1
    Ok(((t - 1.0) * (t + 1.0)).ln())
}

/// Bisection for the zero of `ψ` on `[√2, 10]`, down to bracket width `tol`.
pub fn solve_c0(tol: f64) -> Result<CriticalConstants> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let (mut lo, mut hi) = (SQRT_2, C0_BRACKET_HI);
    debug_assert!(psi(lo)? < 0.0 && psi(hi)? > 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalConstants {
        c0: 0.5 * (lo + hi),
        psi_min_location: SQRT_2,
        psi_limit_at_1: psi_limit_at_1(),
        bracket_width: hi - lo,
    })
}

/// `Ψ(β) = (c+1)^β + (c−1)^β − 2βc`.
pub fn big_psi(beta: f64, c: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("Ψ needs β > 0, got {beta}")));
    }
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::Domain(format!("Ψ needs c > 1, got {c}")));
    }
    Ok((c + 1.0).powf(beta) + (c - 1.0).powf(beta) - 2.0 * beta * c)
}

/// `Ψ(1 − α)` rewritten around `β = 1` so the cancellation `Ψ(1) = 0` is
/// exact: `(c+1)·expm1(−α ln(c+1)) + (c−1)·expm1(−α ln(c−1)) + 2αc`.
fn big_psi_below_one(alpha: f64, c: f64) -> f64 {
    (c + 1.0) * (-alpha * (c + 1.0).ln()).exp_m1() + (c - 1.0) * (-alpha * (c - 1.0).ln()).exp_m1() + 2.0 * alpha * c
}

fn check_c(c: f64) -> Result<()> {
    if c > 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("c must be > 1, got {c}")))
    }
}

/// Periodic-trapezoid value of `I(α)` and its last change.
///
/// Any finite `α` is accepted (the integrand has no zero when `c > 1`), which
/// allows central differences at `α = 0`. The stopping rule is relative for
/// `|I| > 1` so that large `α` (where `I` can be huge) still terminates.
fn i_estimate(alpha: f64, c: f64, cfg: &QuadConfig) -> Result<(f64, f64, bool)> {
    if alpha == 0.0 {
        return Ok((1.0, 0.0, true));
    }
    let est = periodic_mean(
        |t| {
            let (s, co) = t.sin_cos();
            let modulus = (1.0 + c * co).hypot(c * s);
            Ok(modulus.powf(-alpha))
        },
        cfg.initial_panels as usize,
        I_MAX_NODES,
        |value, change| change <= cfg.abs_tol * value.abs().max(1.0),
    )?;
    Ok((est.value, est.error, est.converged))
}

/// `I(α) = (1/2π) ∫₀^{2π} |1 + c e^{it}|^{−α} dt`.
pub fn i_integral(alpha: f64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    check_c(c)?;
    cfg.validate()?;
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("α must be finite, got {alpha}")));
    }
    let (value, err, converged) = i_estimate(alpha, c, cfg)?;
    if converged {
        Ok(value)
    } else {
        Err(Error::NonConvergence { value, err_estimate: err })
    }
}

/// `sup{α ∈ (0, alpha_max] : I(α) < 1}`.
///
/// `α ↦ I(α)` is convex with `I(0) = 1` and `I'(0) = −ln c < 0`, so the set
/// `{I < 1}` is an interval `(0, α₀)`. When `I(alpha_max) < 1` the threshold
/// is reported as `Unbounded` (always the case for `c ≥ 2`, where the
/// integrand is at most `(c−1)^{−α} ≤ 1`).
pub fn alpha_star_2d(c: f64, alpha_max: f64, tol: f64) -> Result<Threshold> {
    check_c(c)?;
    if !(alpha_max > 0.0 && alpha_max.is_finite()) {
        return Err(Error::InvalidInput(format!("alpha_max must be > 0, got {alpha_max}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let cfg = QuadConfig { abs_tol: 1e-13, ..QuadConfig::default() };
    // sign of I(α) − 1, trusted once it exceeds the quadrature change
    let g = |alpha: f64| -> Result<f64> {
        let (value, err, converged) = i_estimate(alpha, c, &cfg)?;
        let r = value - 1.0;
        if converged || r.abs() > 10.0 * err {
            Ok(r)
        } else {
            Err(Error::NonConvergence { value, err_estimate: err })
        }
    };
    let at_max = g(alpha_max)?;
    if at_max < 0.0 {
        return Ok(Threshold { value: ThresholdValue::Unbounded, bracket: (0.0, alpha_max), residual: at_max });
    }
    // a point inside (0, α₀): I < 1 just right of 0
    let mut lo = alpha_max;
    let mut g_lo = at_max;
    while g_lo >= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::NoSignChange { lo, hi: alpha_max, f_lo: g_lo, f_hi: at_max });
        }
        g_lo = g(lo)?;
    }
    let mut hi = 2.0 * lo;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    Ok(Threshold { value: ThresholdValue::Finite(value), bracket: (lo, hi), residual: g(value)? })
}

/// `sup{α ∈ (0,1) : Ψ(1−α) < 0}` for `c > c₀`.
///
/// `Ψ` is convex with `Ψ(1) = 0`, `Ψ'(1) = ψ(c) > 0` and `Ψ(0⁺) = 2`, so
/// `Ψ(1−α) < 0` exactly on `(0, α*)`.
pub fn alpha_star_1d(c: f64, tol: f64) -> Result<Threshold> {
    check_c(c)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let c0 = solve_c0(1e-14)?.c0;
    if c <= c0 {
        return Err(Error::Domain(format!(
            "no α exists for c = {c} ≤ c₀ = {c0}: ψ(c) ≤ 0 so Ψ(1−α) ≥ 0 near α = 0"
        )));
    }
    let g = |alpha: f64| big_psi_below_one(alpha, c);
    // find a negative point near 0 (α* can be tiny when c is close to c₀)
    let mut lo = 0.5;
    while g(lo) >= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Domain(format!("Ψ(1−α) not resolved below 0 for c = {c}")));
        }
    }
    let mut hi = 1.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    Ok(Threshold { value: ThresholdValue::Finite(value), bracket: (lo, hi), residual: g(value) })
}

/// `g(x) = M ln(x−M) + c₀ x ln((x−M)/x) − 1`.
pub fn tilde_m_gap(c0: f64, m: f64, x: f64) -> f64 {
    m * (x - m).ln() + c0 * x * (-m / x).ln_1p() - 1.0
}

/// Smallest `M̃ ≥ 1 + c₀ + 2M` with `g > 0` on `(M̃, ∞)`.
///
/// `g` is strictly increasing on `(M, ∞)` (`g'(x) ≥ M/(x−M)`), so its
/// largest zero is its only zero; it is bracketed by a geometric scan
/// `x₀·1.5^k` from `x₀ = 1 + c₀ + 2M` and refined by bisection. The upper
/// end of the final bracket is returned, so `g(M̃) > 0`.
pub fn tilde_m(c0: f64, m: f64, tol: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("M must be > 0, got {m}")));
    }
    if !(c0 > 0.0 && c0.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("need c0 > 0 and tol > 0, got c0 = {c0}, tol = {tol}")));
    }
    let floor = 1.0 + c0 + 2.0 * m;
    let g = |x: f64| tilde_m_gap(c0, m, x);
    if g(floor) > 0.0 {
        return Ok(floor);
    }
    let mut lo = floor;
    let mut hi = floor;
    loop {
        hi *= 1.5;
        if hi > TILDE_M_CEILING {
            return Err(Error::ScanExhausted { ceiling: TILDE_M_CEILING });
        }
        if g(hi) > 0.0 {
            break;
        }
        lo = hi;
    }
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    // high-precision reference for the zero of ψ
    const C0_REF: f64 = 2.504_295_650_391_634_4;

    #[test]
    fn psi_limit_and_min() {
        assert!((psi(1.0 + 1e-15).unwrap() - psi_limit_at_1()).abs() < 1e-12);
        assert!((psi_limit_at_1() + 0.613_705_638_880_109_4).abs() < 1e-15);
        let expect = 2.0 * (1.0 + SQRT_2).ln() - 2.0 * SQRT_2;
        assert!((psi(SQRT_2).unwrap() - expect).abs() < 1e-14);
        assert!((psi(SQRT_2).unwrap() + 1.065_679_950_707_104).abs() < 1e-14);
    }

    #[test]
    fn psi_tiny_offset_is_guarded() {
        let t = 1.0 + f64::EPSILON;
        assert!(psi(t).unwrap().is_finite());
        assert!(psi(1.0).is_err());
        assert!(psi(0.5).is_err());
        assert!(psi_prime(1.0).is_err());
    }

    #[test]
    fn psi_sign_at_published_bounds() {
        assert!(psi(2.50).unwrap() < 0.0);
        assert!(psi(2.51).unwrap() > 0.0);
    }

    #[test]
    fn psi_prime_values() {
        assert!(psi_prime(SQRT_2).unwrap().abs() < 1e-15);
        assert!((psi_prime(5f64.sqrt()).unwrap() - 4f64.ln()).abs() < 1e-15);
        let h = 1e-6;
        let fd = (psi(2.0 + h).unwrap() - psi(2.0 - h).unwrap()) / (2.0 * h);
        assert!((fd - psi_prime(2.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn c0_bisection() {
        let k = solve_c0(1e-12).unwrap();
        assert!(2.50 < k.c0 && k.c0 < 2.51);
        assert!(k.bracket_width <= 1e-12);
        assert!(psi(k.c0 - 1e-12).unwrap() < 0.0 && psi(k.c0 + 1e-12).unwrap() > 0.0);
        assert!((k.c0 - C0_REF).abs() < 1e-12);
        let fine = solve_c0(1e-15).unwrap();
        assert!((fine.c0 - k.c0).abs() < 1e-12);
        assert!(solve_c0(0.0).is_err());
    }

    #[test]
    fn big_psi_identities() {
        for c in [1.1, 2.0, 3.0, 9.0] {
            assert!(big_psi(1.0, c).unwrap().abs() < 1e-14 * c);
            assert!((big_psi(1e-12, c).unwrap() - 2.0).abs() < 1e-10);
            assert!((big_psi_below_one(0.3, c) - big_psi(0.7, c).unwrap()).abs() < 1e-13);
        }
        assert!(big_psi(0.0, 2.0).is_err());
        assert!(big_psi(1.0, 1.0).is_err());
    }

    #[test]
    fn i_integral_basics() {
        let cfg = QuadConfig { abs_tol: 1e-13, ..QuadConfig::default() };
        assert_eq!(i_integral(0.0, 2.0, &cfg).unwrap(), 1.0);
        // high-precision reference for c = 1.5, α = 1
        assert!((i_integral(1.0, 1.5, &cfg).unwrap() - 0.768_046_739_358_455_3).abs() < 1e-12);
        assert!(i_integral(1.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn alpha_star_2d_cases() {
        let t = alpha_star_2d(1.5, 50.0, 1e-10).unwrap();
        let v = t.value.finite().unwrap();
        // high-precision reference
        assert!((v - 2.815_711_656_274_982).abs() < 1e-8, "{v}");
        assert_eq!(alpha_star_2d(3.0, 50.0, 1e-10).unwrap().value, ThresholdValue::Unbounded);
        assert_eq!(alpha_star_2d(2.0, 50.0, 1e-10).unwrap().value, ThresholdValue::Unbounded);
    }

    #[test]
    fn alpha_star_1d_cases() {
        let t = alpha_star_1d(3.0, 1e-14).unwrap();
        let v = t.value.finite().unwrap();
        assert!((v - 0.238_342_156_785_519_1).abs() < 1e-12, "{v}");
        assert!(big_psi(1.0 - v, 3.0).unwrap().abs() < 1e-12);
        let near = alpha_star_1d(C0_REF + 1e-6, 1e-16).unwrap().value.finite().unwrap();
        assert!((near - 5.770_641_319_775e-7).abs() < 1e-11, "{near}");
        assert!(matches!(alpha_star_1d(2.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn tilde_m_for_unit_m() {
        let c0 = solve_c0(1e-14).unwrap().c0;
        let m = tilde_m(c0, 1.0, 1e-13).unwrap();
        // high-precision reference for the zero of g
        assert!((m - 35.476_182_280_251_48).abs() < 1e-9, "{m}");
        assert!(tilde_m_gap(c0, 1.0, m) > 0.0);
        assert!(tilde_m_gap(c0, 1.0, m + 1.0) > 0.0);
        // large M: g is already positive at the floor 1 + c₀ + 2M
        assert!(tilde_m_gap(c0, 1e3, 1.0 + c0 + 2e3) > 0.0);
        assert_eq!(tilde_m(c0, 1e3, 1e-12).unwrap(), 1.0 + c0 + 2e3);
        // tiny M: the zero sits near e^{1/M}, far beyond the scan ceiling
        assert!(matches!(tilde_m(c0, 1e-6, 1e-12), Err(Error::ScanExhausted { .. })));
    }
}
