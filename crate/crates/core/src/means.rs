//! Circle, disk and interval means, and median radii.
//!
//! * `σ_{x,ρ}(f) = (1/2π) ∫₀^{2π} f(x + ρe^{it}) dt`
//! * `λ_{x,ρ}(f) = 2ρ⁻² ∫₀^ρ σ_{x,s}(f) s ds` (disk, d = 2)
//! * `λ_{x,ρ}(f) = (2ρ)⁻¹ ∫_{x−ρ}^{x+ρ} f(s) ds` (interval, d = 1)

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Curve, Expr};
use crate::functions::FieldSpec;
use crate::point::{Dim, Point};
use crate::quad::{adaptive_integral, periodic_mean, Estimate, QuadConfig};

/// Doublings allowed for the periodic trapezoid before falling back to
/// adaptive panels.
const PERIODIC_DOUBLINGS: u32 = 10;

/// What to do when the field evaluates to `+∞` inside a mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", content = "level", rename_all = "lowercase")]
pub enum InfinityPolicy {
    Error,
    /// Replace `f` by `min{f, n}`.
    Clamp(f64),
}

impl Default for InfinityPolicy {
    fn default() -> Self {
        InfinityPolicy::Clamp(1e12)
    }
}

impl InfinityPolicy {
    pub fn validate(&self) -> Result<()> {
        match self {
            InfinityPolicy::Clamp(n) if !n.is_finite() => {
                Err(Error::InvalidInput(format!("clamp level must be finite, got {n}")))
            }
            _ => Ok(()),
        }
    }

    /// Apply the policy to a raw value `v = f(y)`; sets `clamped` when the
    /// clamp level was hit.
    pub fn apply(&self, v: f64, y: [f64; 2], clamped: &mut bool) -> Result<f64> {
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::NonFiniteValue { at: y, value: v });
        }
        match *self {
            InfinityPolicy::Error if v == f64::INFINITY => Err(Error::InfiniteValue { at: y }),
            InfinityPolicy::Error => Ok(v),
            InfinityPolicy::Clamp(n) => {
                if v > n {
                    *clamped = true;
                    Ok(n)
                } else {
                    Ok(v)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    /// Some evaluation hit the clamp level of the infinity policy.
    pub clamped: bool,
}

impl MeanResult {
    fn from_estimate(est: Estimate, scale: f64, clamped: bool) -> Self {
        MeanResult {
            value: est.value * scale,
            err_estimate: est.error * scale.abs(),
            evaluations: est.evaluations,
            converged: est.converged,
            clamped,
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("radius must be finite and > 0, got {radius}")))
    }
}

fn check_dims(field: &FieldSpec, center: &Point, want: Dim) -> Result<()> {
    for found in [field.dim(), center.dim()] {
        if found != want {
            return Err(Error::DimensionMismatch { expected: want.get(), found: found.get() });
        }
    }
    Ok(())
}

fn prepare(cfg: &QuadConfig, inf: &InfinityPolicy, radius: f64) -> Result<()> {
    cfg.validate()?;
    inf.validate()?;
    check_radius(radius)
}

/// Circle mean for an expression; shared by the public operators.
pub(crate) fn circle_mean_expr(
    expr: &Expr,
    center: [f64; 2],
    radius: f64,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<MeanResult> {
    let curve = Curve::Circle { center, radius };
    let mut clamped = false;
    let mut sample = |t: f64| {
        let y = curve.at(t);
        inf.apply(expr.eval(y), y, &mut clamped)
    };
    let kinks = expr.kinks_on(&curve, 4 * cfg.initial_panels as usize);
    let mut evaluations = 0;
    if kinks.is_empty() {
        let n0 = cfg.initial_panels as usize;
        let est = periodic_mean(&mut sample, n0, n0 << PERIODIC_DOUBLINGS, |_, change| change <= cfg.abs_tol)?;
        if est.converged {
            return Ok(MeanResult::from_estimate(est, 1.0, clamped));
        }
        evaluations = est.evaluations;
    }
    let mut breaks = Vec::with_capacity(kinks.len() + 2);
    breaks.push(0.0);
    breaks.extend_from_slice(&kinks);
    breaks.push(TAU);
    let mut est = adaptive_integral(&mut sample, &breaks, cfg.abs_tol * TAU, cfg)?;
    est.evaluations += evaluations;
    Ok(MeanResult::from_estimate(est, 1.0 / TAU, clamped))
}

/// `σ_{x,ρ}(f)`: average of the field over the circle `S(center, radius)`.
///
/// Smooth restrictions use the periodic trapezoid rule with node doubling;
/// restrictions with kinks (declared by the field's builtins or located
/// numerically for `min`/`max`/`clamp`) are split there and integrated by
/// adaptive Gauss–Kronrod panels. Exhausting the budget is not an error:
/// the best estimate comes back with `converged = false`.
pub fn circle_mean(
    field: &FieldSpec,
    center: Point,
    radius: f64,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<MeanResult> {
    check_dims(field, &center, Dim::Two)?;
    prepare(cfg, &inf, radius)?;
    circle_mean_expr(field.expr(), center.coords(), radius, cfg, inf)
}

/// `λ_{x,ρ}(f)` over the closed disk `B(center, radius)`, computed as the
/// radial integral of circle means weighted by `2s/ρ²`.
pub fn disk_mean(
    field: &FieldSpec,
    center: Point,
    radius: f64,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<MeanResult> {
    check_dims(field, &center, Dim::Two)?;
    prepare(cfg, &inf, radius)?;
    let expr = field.expr();
    let c = center.coords();
    let inner_cfg = cfg.with_abs_tol(0.5 * cfg.abs_tol);
    let mut inner_err: f64 = 0.0;
    let mut inner_evals = 0u64;
    let mut all_converged = true;
    let mut clamped = false;
    let integrand = |s: f64| -> Result<f64> {
        let m = circle_mean_expr(expr, c, s, &inner_cfg, inf)?;
        inner_err = inner_err.max(m.err_estimate);
        inner_evals += m.evaluations;
        all_converged &= m.converged;
        clamped |= m.clamped;
        Ok(m.value * s)
    };
    let mut breaks = vec![0.0];
    breaks.extend(expr.radial_breaks(c, radius));
    breaks.push(radius);
    let weight = 2.0 / (radius * radius);
    let outer = adaptive_integral(integrand, &breaks, 0.5 * cfg.abs_tol / weight, cfg)?;
    Ok(MeanResult {
        value: outer.value * weight,
        err_estimate: outer.error * weight + inner_err,
        evaluations: inner_evals,
        converged: outer.converged && all_converged,
        clamped,
    })
}

/// `λ_{x,ρ}(f)` over the interval `[x − ρ, x + ρ]` (d = 1).
pub fn interval_mean(
    field: &FieldSpec,
    center: Point,
    radius: f64,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<MeanResult> {
    check_dims(field, &center, Dim::One)?;
    prepare(cfg, &inf, radius)?;
    let x = center.x1();
    let (lo, hi) = (x - radius, x + radius);
    let curve = Curve::Segment { lo, hi };
    let expr = field.expr();
    let mut clamped = false;
    let sample = |s: f64| {
        let y = [s, 0.0];
        inf.apply(expr.eval(y), y, &mut clamped)
    };
    let kinks = expr.kinks_on(&curve, 4 * cfg.initial_panels as usize);
    let mut breaks = Vec::with_capacity(kinks.len() + 2);
    breaks.push(lo);
    breaks.extend_from_slice(&kinks);
    breaks.push(hi);
    let width = hi - lo;
    let est = adaptive_integral(sample, &breaks, cfg.abs_tol * width, cfg)?;
    Ok(MeanResult::from_estimate(est, 1.0 / width, clamped))
}

/// The restricted mean natural to the dimension: `σ` in the plane, `λ` on
/// the line.
fn median_mean(field: &FieldSpec, center: Point, radius: f64, cfg: &QuadConfig) -> Result<MeanResult> {
    match center.dim() {
        Dim::Two => circle_mean(field, center, radius, cfg, InfinityPolicy::default()),
        Dim::One => interval_mean(field, center, radius, cfg, InfinityPolicy::default()),
    }
}

/// Solve `σ_{x,ρ}(f) = f(x)` for `ρ` by bisection on a bracket whose ends
/// give residuals of strictly opposite sign. Stops on bracket width `tol`.
pub fn median_radius(field: &FieldSpec, center: Point, bracket: (f64, f64), tol: f64, cfg: &QuadConfig) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(0.0 < lo && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidInput(format!("bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let mut clamped = false;
    let fx = InfinityPolicy::default().apply(field.eval(&center), center.coords(), &mut clamped)?;
    let residual = |rho: f64| -> Result<f64> { Ok(median_mean(field, center, rho, cfg)?.value - fx) };
    let (r_lo, r_hi) = (residual(lo)?, residual(hi)?);
    if !(r_lo * r_hi < 0.0) {
        return Err(Error::NoSignChange { lo, hi, f_lo: r_lo, f_hi: r_hi });
    }
    let lo_positive = r_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = residual(mid)?;
        if r == 0.0 {
            return Ok(mid);
        }
        if (r > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
