//! Closed expression language for scalar functions on ℝ¹ and ℝ².
//!
//! Every builtin knows where it fails to be smooth (its kink loci), and every
//! combinator either propagates those loci or, for `min`/`max`/`clamp`,
//! contributes a *switch function* whose zero set is an additional kink.
//! Quadrature uses both to place panel boundaries.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::point::Dim;

/// Coordinate axis selector for `abspow(axis=..)`, 1-based like `x₁`, `x₂`.
pub type Axis = u8;

#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `v`
    Constant { v: f64 },
    /// `(1 − |y|)⁺`
    Hat,
    /// `min{1, |y₁|⁻¹}`
    X1Inv,
    /// `−ln(|y|² + 1)`
    LogSuper,
    /// `max{c|y|, M}^(−α)`
    RPow { alpha: f64, c: f64, m: f64 },
    /// `ln⁺(|y| − M)`
    LogPlus { m: f64 },
    /// `|y|^α`, or `|y_axis|^α` when an axis is given
    AbsPow { alpha: f64, axis: Option<Axis> },
    /// `1` if `|y₁| ≤ a`, else `0`
    IndicatorStrip { a: f64 },
    /// `a₁y₁ + a₂y₂`
    Linear { a1: f64, a2: f64 },
    /// `q₁y₁² + q₂y₂²`
    Quadratic { q1: f64, q2: f64 },
    /// `ln|y|`
    LogAbs,
    /// `|y|`
    Abs,
    /// `c|y| + M`
    CabsPlusM { c: f64, m: f64 },
    /// `max{c|y|, M}`
    MaxCabsM { c: f64, m: f64 },
    /// `|y| + 2 + (|y| + 1)⁻¹`
    ContractExample,
    /// `3` if `|y| < 2`, else `1`
    StepExample,
    /// `6·max{1, y₁²}`
    Parabolic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Builtin(Builtin),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Scale(Box<Expr>, f64),
    /// `shift(e, x0, y0)(y) = e(y + (x0, y0))`
    Shift { inner: Box<Expr>, x0: f64, y0: Option<f64> },
    /// `min{e, n}`
    Clamp(Box<Expr>, f64),
    Neg(Box<Expr>),
}

/// A set on which a function may fail to be smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Locus {
    /// `{y : |y − center| = radius}`; radius 0 is a single point.
    Sphere { center: [f64; 2], radius: f64 },
    /// `{y : y[axis] = value}` with a 0-based axis.
    Hyperplane { axis: usize, value: f64 },
}

/// A one-parameter integration path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Curve {
    /// `θ ↦ center + radius·(cos θ, sin θ)`, `θ ∈ [0, 2π]`.
    Circle { center: [f64; 2], radius: f64 },
    /// `s ↦ (s, 0)`, `s ∈ [lo, hi]`.
    Segment { lo: f64, hi: f64 },
}

impl Curve {
    pub(crate) fn range(&self) -> (f64, f64) {
        match *self {
            Curve::Circle { .. } => (0.0, TAU),
            Curve::Segment { lo, hi } => (lo, hi),
        }
    }

    pub(crate) fn at(&self, t: f64) -> [f64; 2] {
        match *self {
            Curve::Circle { center, radius } => {
                let (s, c) = t.sin_cos();
                [center[0] + radius * c, center[1] + radius * s]
            }
            Curve::Segment { .. } => [t, 0.0],
        }
    }
}

#[inline]
fn norm(y: [f64; 2]) -> f64 {
    y[0].hypot(y[1])
}

impl Builtin {
    pub fn eval(&self, y: [f64; 2]) -> f64 {
        match *self {
            Builtin::Constant { v } => v,
            Builtin::Hat => (1.0 - norm(y)).max(0.0),
            Builtin::X1Inv => {
                let a = y[0].abs();
                if a <= 1.0 {
                    1.0
                } else {
                    1.0 / a
                }
            }
            Builtin::LogSuper => -(y[0] * y[0] + y[1] * y[1]).ln_1p(),
            Builtin::RPow { alpha, c, m } => (c * norm(y)).max(m).powf(-alpha),
            Builtin::LogPlus { m } => {
                let s = norm(y) - m;
                if s > 1.0 {
                    s.ln()
                } else {
                    0.0
                }
            }
            Builtin::AbsPow { alpha, axis } => {
                let base = match axis {
                    None => norm(y),
                    Some(k) => y[usize::from(k) - 1].abs(),
                };
                base.powf(alpha)
            }
            Builtin::IndicatorStrip { a } => {
                if y[0].abs() <= a {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::Linear { a1, a2 } => a1 * y[0] + a2 * y[1],
            Builtin::Quadratic { q1, q2 } => q1 * y[0] * y[0] + q2 * y[1] * y[1],
            Builtin::LogAbs => norm(y).ln(),
            Builtin::Abs => norm(y),
            Builtin::CabsPlusM { c, m } => c * norm(y) + m,
            Builtin::MaxCabsM { c, m } => (c * norm(y)).max(m),
            Builtin::ContractExample => {
                let r = norm(y);
                r + 2.0 + 1.0 / (r + 1.0)
            }
            Builtin::StepExample => {
                if norm(y) < 2.0 {
                    3.0
                } else {
                    1.0
                }
            }
            Builtin::Parabolic => 6.0 * (y[0] * y[0]).max(1.0),
        }
    }

    fn loci(&self, out: &mut Vec<Locus>) {
        const ORIGIN: [f64; 2] = [0.0, 0.0];
        let sphere = |radius: f64| Locus::Sphere { center: ORIGIN, radius };
        match *self {
            Builtin::Constant { .. }
            | Builtin::LogSuper
            | Builtin::Linear { .. }
            | Builtin::Quadratic { .. } => {}
            Builtin::Hat => {
                out.push(sphere(1.0));
                out.push(sphere(0.0));
            }
            Builtin::X1Inv | Builtin::Parabolic => {
                out.push(Locus::Hyperplane { axis: 0, value: -1.0 });
                out.push(Locus::Hyperplane { axis: 0, value: 1.0 });
            }
            Builtin::RPow { c, m, .. } | Builtin::MaxCabsM { c, m } => {
                if c > 0.0 {
                    out.push(sphere(m / c));
                }
            }
            Builtin::LogPlus { m } => out.push(sphere(m + 1.0)),
            Builtin::AbsPow { axis, .. } => match axis {
                None => out.push(sphere(0.0)),
                Some(k) => out.push(Locus::Hyperplane { axis: usize::from(k) - 1, value: 0.0 }),
            },
            Builtin::IndicatorStrip { a } => {
                out.push(Locus::Hyperplane { axis: 0, value: -a });
                out.push(Locus::Hyperplane { axis: 0, value: a });
            }
            Builtin::LogAbs | Builtin::Abs | Builtin::CabsPlusM { .. } | Builtin::ContractExample => {
                out.push(sphere(0.0))
            }
            Builtin::StepExample => out.push(sphere(2.0)),
        }
    }

    fn min_dim(&self) -> Dim {
        match *self {
            Builtin::Linear { a2, .. } if a2 != 0.0 => Dim::Two,
            Builtin::Quadratic { q2, .. } if q2 != 0.0 => Dim::Two,
            Builtin::AbsPow { axis: Some(2), .. } => Dim::Two,
            _ => Dim::One,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(format!("{}: {msg}", self.name())));
        let finite = self.params().iter().all(|(_, v)| v.is_finite());
        if !finite {
            return bad("parameters must be finite");
        }
        match *self {
            Builtin::RPow { c, m, .. } | Builtin::MaxCabsM { c, m } if !(c > 0.0 && m > 0.0) => {
                bad("requires c > 0 and M > 0")
            }
            Builtin::CabsPlusM { c, m } if !(c >= 0.0 && m > 0.0) => bad("requires c ≥ 0 and M > 0"),
            Builtin::LogPlus { m } if m < 0.0 => bad("requires M ≥ 0"),
            Builtin::IndicatorStrip { a } if a < 0.0 => bad("requires a ≥ 0"),
            Builtin::AbsPow { axis: Some(k), .. } if k != 1 && k != 2 => bad("axis must be 1 or 2"),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Constant { .. } => "constant",
            Builtin::Hat => "hat",
            Builtin::X1Inv => "x1inv",
            Builtin::LogSuper => "logsuper",
            Builtin::RPow { .. } => "rpow",
            Builtin::LogPlus { .. } => "logplus",
            Builtin::AbsPow { .. } => "abspow",
            Builtin::IndicatorStrip { .. } => "indicator_strip",
            Builtin::Linear { .. } => "linear",
            Builtin::Quadratic { .. } => "quadratic",
            Builtin::LogAbs => "logabs",
            Builtin::Abs => "abs",
            Builtin::CabsPlusM { .. } => "cabs_plus_M",
            Builtin::MaxCabsM { .. } => "max_cabs_M",
            Builtin::ContractExample => "contract_example",
            Builtin::StepExample => "step_example",
            Builtin::Parabolic => "parabolic",
        }
    }

    /// Named numeric parameters in canonical order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Builtin::Constant { v } => vec![("v", v)],
            Builtin::RPow { alpha, c, m } => vec![("alpha", alpha), ("c", c), ("M", m)],
            Builtin::LogPlus { m } => vec![("M", m)],
            Builtin::AbsPow { alpha, axis } => {
                let mut p = vec![("alpha", alpha)];
                if let Some(k) = axis {
                    p.push(("axis", f64::from(k)));
                }
                p
            }
            Builtin::IndicatorStrip { a } => vec![("a", a)],
            Builtin::Linear { a1, a2 } => vec![("a1", a1), ("a2", a2)],
            Builtin::Quadratic { q1, q2 } => vec![("q1", q1), ("q2", q2)],
            Builtin::CabsPlusM { c, m } | Builtin::MaxCabsM { c, m } => vec![("c", c), ("M", m)],
            Builtin::Hat
            | Builtin::X1Inv
            | Builtin::LogSuper
            | Builtin::LogAbs
            | Builtin::Abs
            | Builtin::ContractExample
            | Builtin::StepExample
            | Builtin::Parabolic => Vec::new(),
        }
    }
}

impl From<Builtin> for Expr {
    fn from(b: Builtin) -> Expr {
        Expr::Builtin(b)
    }
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Builtin(Builtin::Constant { v })
    }

    pub fn min(a: Expr, b: Expr) -> Expr {
        Expr::Min(Box::new(a), Box::new(b))
    }

    pub fn max(a: Expr, b: Expr) -> Expr {
        Expr::Max(Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn scale(a: Expr, k: f64) -> Expr {
        Expr::Scale(Box::new(a), k)
    }

    pub fn shift(a: Expr, x0: f64, y0: Option<f64>) -> Expr {
        Expr::Shift { inner: Box::new(a), x0, y0 }
    }

    pub fn clamp(a: Expr, n: f64) -> Expr {
        Expr::Clamp(Box::new(a), n)
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn eval(&self, y: [f64; 2]) -> f64 {
        match self {
            Expr::Builtin(b) => b.eval(y),
            Expr::Min(a, b) => a.eval(y).min(b.eval(y)),
            Expr::Max(a, b) => a.eval(y).max(b.eval(y)),
            Expr::Add(a, b) => a.eval(y) + b.eval(y),
            Expr::Scale(a, k) => k * a.eval(y),
            Expr::Shift { inner, x0, y0 } => inner.eval([y[0] + x0, y[1] + y0.unwrap_or(0.0)]),
            Expr::Clamp(a, n) => a.eval(y).min(*n),
            Expr::Neg(a) => -a.eval(y),
        }
    }

    /// Smallest ambient dimension the expression makes sense in.
    pub fn min_dim(&self) -> Dim {
        match self {
            Expr::Builtin(b) => b.min_dim(),
            Expr::Min(a, b) | Expr::Max(a, b) | Expr::Add(a, b) => a.min_dim().max(b.min_dim()),
            Expr::Scale(a, _) | Expr::Clamp(a, _) | Expr::Neg(a) => a.min_dim(),
            Expr::Shift { inner, y0, .. } => {
                if y0.is_some() {
                    Dim::Two
                } else {
                    inner.min_dim()
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Expr::Builtin(b) => b.validate(),
            Expr::Min(a, b) | Expr::Max(a, b) | Expr::Add(a, b) => {
                a.validate()?;
                b.validate()
            }
            Expr::Scale(a, k) | Expr::Clamp(a, k) => {
                if !k.is_finite() {
                    return Err(Error::InvalidInput("combinator argument must be finite".into()));
                }
                a.validate()
            }
            Expr::Shift { inner, x0, y0 } => {
                if !x0.is_finite() || !y0.unwrap_or(0.0).is_finite() {
                    return Err(Error::InvalidInput("shift offset must be finite".into()));
                }
                inner.validate()
            }
            Expr::Neg(a) => a.validate(),
        }
    }

    /// Static kink loci, in the coordinates of the argument `y`.
    pub fn loci(&self) -> Vec<Locus> {
        let mut out = Vec::new();
        self.collect_loci(&mut out);
        out
    }

    fn collect_loci(&self, out: &mut Vec<Locus>) {
        match self {
            Expr::Builtin(b) => b.loci(out),
            Expr::Min(a, b) | Expr::Max(a, b) | Expr::Add(a, b) => {
                a.collect_loci(out);
                b.collect_loci(out);
            }
            Expr::Scale(a, _) | Expr::Clamp(a, _) | Expr::Neg(a) => a.collect_loci(out),
            Expr::Shift { inner, x0, y0 } => {
                let s = [*x0, y0.unwrap_or(0.0)];
                for locus in inner.loci() {
                    out.push(match locus {
                        Locus::Sphere { center, radius } => Locus::Sphere {
                            center: [center[0] - s[0], center[1] - s[1]],
                            radius,
                        },
                        Locus::Hyperplane { axis, value } => Locus::Hyperplane { axis, value: value - s[axis] },
                    });
                }
            }
        }
    }

    pub(crate) fn switch_count(&self) -> usize {
        match self {
            Expr::Builtin(_) => 0,
            Expr::Min(a, b) | Expr::Max(a, b) => 1 + a.switch_count() + b.switch_count(),
            Expr::Clamp(a, _) => 1 + a.switch_count(),
            Expr::Add(a, b) => a.switch_count() + b.switch_count(),
            Expr::Scale(a, _) | Expr::Neg(a) => a.switch_count(),
            Expr::Shift { inner, .. } => inner.switch_count(),
        }
    }

    /// Values of the switch functions (`a − b` for `min`/`max`, `e − n` for
    /// `clamp`) at `y`, in a fixed traversal order.
    pub(crate) fn switches(&self, y: [f64; 2], out: &mut Vec<f64>) {
        match self {
            Expr::Builtin(_) => {}
            Expr::Min(a, b) | Expr::Max(a, b) => {
                out.push(a.eval(y) - b.eval(y));
                a.switches(y, out);
                b.switches(y, out);
            }
            Expr::Clamp(a, n) => {
                out.push(a.eval(y) - n);
                a.switches(y, out);
            }
            Expr::Add(a, b) => {
                a.switches(y, out);
                b.switches(y, out);
            }
            Expr::Scale(a, _) | Expr::Neg(a) => a.switches(y, out),
            Expr::Shift { inner, x0, y0 } => inner.switches([y[0] + x0, y[1] + y0.unwrap_or(0.0)], out),
        }
    }

    /// Parameters along `curve` (sorted, strictly inside its range) at which
    /// the restriction of the expression may fail to be smooth.
    pub(crate) fn kinks_on(&self, curve: &Curve, density: usize) -> Vec<f64> {
        let (lo, hi) = curve.range();
        let mut ks: Vec<f64> = self.loci().iter().flat_map(|l| l.intersect(curve)).collect();
        normalize_params(&mut ks, lo, hi);
        if self.switch_count() > 0 {
            let mut crossings = self.switch_crossings(curve, &ks, density);
            ks.append(&mut crossings);
            normalize_params(&mut ks, lo, hi);
        }
        ks
    }

    fn switch_crossings(&self, curve: &Curve, fixed: &[f64], density: usize) -> Vec<f64> {
        let (lo, hi) = curve.range();
        let mut bounds = Vec::with_capacity(fixed.len() + 2);
        bounds.push(lo);
        bounds.extend_from_slice(fixed);
        bounds.push(hi);

        let n_sw = self.switch_count();
        let switch_at = |t: f64, buf: &mut Vec<f64>| {
            buf.clear();
            self.switches(curve.at(t), buf);
        };
        let mut buf = Vec::with_capacity(n_sw);
        let mut found = Vec::new();
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            let len = b - a;
            if len <= 0.0 {
                continue;
            }
            let samples = sample_params(a, b, ((density as f64) * len / (hi - lo)).ceil() as usize);
            let values: Vec<Vec<f64>> = samples
                .iter()
                .map(|&t| {
                    switch_at(t, &mut buf);
                    buf.clone()
                })
                .collect();
            for k in 0..n_sw {
                let mut last: Option<(usize, f64)> = None;
                for (i, v) in values.iter().enumerate() {
                    let s = v[k];
                    if s.is_nan() || s == 0.0 {
                        continue;
                    }
                    if let Some((j, prev)) = last {
                        if prev.signum() != s.signum() {
                            if j + 1 == i {
                                found.push(bisect_switch(|t| {
                                    switch_at(t, &mut buf);
                                    buf[k]
                                }, samples[j], samples[i], prev));
                            } else {
                                found.push(samples[(i + j) / 2]);
                            }
                        }
                    }
                    last = Some((i, s));
                }
            }
        }
        found
    }

    /// Distances `s ∈ (0, rho)` at which the circle `S(center, s)` becomes
    /// tangent to a static kink locus.
    pub(crate) fn radial_breaks(&self, center: [f64; 2], rho: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for locus in self.loci() {
            match locus {
                Locus::Sphere { center: c, radius } => {
                    let d = (center[0] - c[0]).hypot(center[1] - c[1]);
                    out.push((d - radius).abs());
                    out.push(d + radius);
                }
                Locus::Hyperplane { axis, value } => out.push((center[axis] - value).abs()),
            }
        }
        normalize_params(&mut out, 0.0, rho);
        out
    }
}

impl Locus {
    pub(crate) fn intersect(&self, curve: &Curve) -> Vec<f64> {
        match (*self, *curve) {
            (Locus::Sphere { center: c, radius: big_r }, Curve::Circle { center: x, radius: rho }) => {
                let (dx, dy) = (c[0] - x[0], c[1] - x[1]);
                let d = dx.hypot(dy);
                if d == 0.0 {
                    return Vec::new();
                }
                let cos_phi = (rho * rho + d * d - big_r * big_r) / (2.0 * rho * d);
                if !(cos_phi.abs() <= 1.0 + 1e-12) {
                    return Vec::new();
                }
                let phi = cos_phi.clamp(-1.0, 1.0).acos();
                let theta0 = dy.atan2(dx);
                vec![theta0 - phi, theta0 + phi]
            }
            (Locus::Hyperplane { axis, value }, Curve::Circle { center: x, radius: rho }) => {
                let q = (value - x[axis]) / rho;
                if !(q.abs() <= 1.0) {
                    return Vec::new();
                }
                if axis == 0 {
                    let a = q.acos();
                    vec![a, TAU - a]
                } else {
                    let a = q.asin();
                    vec![a, PI - a]
                }
            }
            (Locus::Sphere { center: c, radius: big_r }, Curve::Segment { .. }) => {
                let h2 = big_r * big_r - c[1] * c[1];
                if h2 < 0.0 {
                    return Vec::new();
                }
                let h = h2.sqrt();
                vec![c[0] - h, c[0] + h]
            }
            (Locus::Hyperplane { axis: 0, value }, Curve::Segment { .. }) => vec![value],
            (Locus::Hyperplane { .. }, Curve::Segment { .. }) => Vec::new(),
        }
    }
}

/// Map parameters into `[lo, hi)` (wrapping for circles), keep the ones
/// strictly inside, sort and drop near-duplicates.
fn normalize_params(ts: &mut Vec<f64>, lo: f64, hi: f64) {
    let wrap = lo == 0.0 && hi == TAU;
    for t in ts.iter_mut() {
        if wrap {
            *t = t.rem_euclid(TAU);
        }
    }
    let eps = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    ts.retain(|t| t.is_finite() && *t > lo + eps && *t < hi - eps);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|b, a| (*b - *a).abs() <= eps);
}

/// Uniform samples plus geometric clustering toward both ends, so that
/// switch crossings hugging a singular endpoint are not stepped over.
fn sample_params(a: f64, b: f64, n_uniform: usize) -> Vec<f64> {
    let len = b - a;
    let n = n_uniform.max(4);
    let mut ts: Vec<f64> = (0..=n).map(|i| a + len * (i as f64) / (n as f64)).collect();
    for j in 2..=60 {
        let h = len * (0.5f64).powi(j);
        if h <= f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
        ts.push(a + h);
        ts.push(b - h);
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn bisect_switch(mut g: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, g_a: f64) -> f64 {
    let sa = g_a.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(cx: f64, cy: f64, r: f64) -> Curve {
        Curve::Circle { center: [cx, cy], radius: r }
    }

    #[test]
    fn builtin_values() {
        assert_eq!(Builtin::Hat.eval([0.5, 0.0]), 0.5);
        assert_eq!(Builtin::Hat.eval([3.0, 4.0]), 0.0);
        assert_eq!(Builtin::X1Inv.eval([0.3, 9.0]), 1.0);
        assert_eq!(Builtin::X1Inv.eval([-4.0, 9.0]), 0.25);
        assert_eq!(Builtin::LogPlus { m: 1.0 }.eval([1.5, 0.0]), 0.0);
        assert!((Builtin::LogPlus { m: 1.0 }.eval([10.0, 0.0]) - 9f64.ln()).abs() < 1e-15);
        assert_eq!(Builtin::RPow { alpha: 1.0, c: 2.0, m: 1.0 }.eval([0.1, 0.0]), 1.0);
        assert_eq!(Builtin::RPow { alpha: 1.0, c: 2.0, m: 1.0 }.eval([2.0, 0.0]), 0.25);
        assert_eq!(Builtin::AbsPow { alpha: -1.0, axis: Some(1) }.eval([0.0, 5.0]), f64::INFINITY);
        assert_eq!(Builtin::ContractExample.eval([0.0, 0.0]), 3.0);
        assert_eq!(Builtin::StepExample.eval([2.0, 0.0]), 1.0);
        assert_eq!(Builtin::Parabolic.eval([3.0, 1.0]), 54.0);
    }

    #[test]
    fn shift_translates_argument() {
        let e = Expr::shift(Builtin::Abs.into(), 1.0, Some(2.0));
        assert_eq!(e.eval([2.0, 2.0]), 5.0);
        match e.loci()[0] {
            Locus::Sphere { center, radius } => {
                assert_eq!(center, [-1.0, -2.0]);
                assert_eq!(radius, 0.0);
            }
            _ => panic!("unexpected locus"),
        }
    }

    #[test]
    fn circle_meets_unit_sphere_at_expected_angles() {
        // circle of radius 1 centred at (1,0) meets |y| = 1 at 2π/3 and 4π/3
        let ks = Expr::from(Builtin::Hat).kinks_on(&circle(1.0, 0.0, 1.0), 64);
        assert_eq!(ks.len(), 3, "{ks:?}"); // includes the cone tip at the origin
        assert!((ks[0] - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((ks[1] - PI).abs() < 1e-7);
        assert!((ks[2] - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn strip_edges_on_circle() {
        let ks = Expr::from(Builtin::IndicatorStrip { a: 1.0 }).kinks_on(&circle(0.0, 0.0, 2.0), 64);
        let expect = [PI / 3.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0, 5.0 * PI / 3.0];
        assert_eq!(ks.len(), 4);
        for (k, e) in ks.iter().zip(expect) {
            assert!((k - e).abs() < 1e-12);
        }
    }

    #[test]
    fn min_switch_crossings_match_builtin_kinks() {
        let combo = Expr::min(Expr::constant(1.0), Builtin::AbsPow { alpha: -1.0, axis: Some(1) }.into());
        let builtin = Expr::from(Builtin::X1Inv);
        for curve in [circle(3.0, 0.0, 54.0), circle(100.0, 7.0, 6.0e4)] {
            let a = builtin.kinks_on(&curve, 256);
            let b = combo.kinks_on(&curve, 256);
            for k in &a {
                assert!(b.iter().any(|t| (t - k).abs() < 1e-12), "missing {k} in {b:?}");
            }
        }
    }

    #[test]
    fn segment_kinks() {
        let seg = Curve::Segment { lo: -5.0, hi: 5.0 };
        assert_eq!(Expr::from(Builtin::LogPlus { m: 1.0 }).kinks_on(&seg, 64), vec![-2.0, 2.0]);
        let clamp = Expr::clamp(Builtin::Abs.into(), 3.0);
        let ks = clamp.kinks_on(&seg, 64);
        assert_eq!(ks.len(), 3);
        assert!((ks[0] + 3.0).abs() < 1e-12 && ks[1] == 0.0 && (ks[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn radial_breaks_for_sphere_and_line() {
        let e = Expr::from(Builtin::Hat);
        assert_eq!(e.radial_breaks([3.0, 0.0], 10.0), vec![2.0, 3.0, 4.0]);
        let s = Expr::from(Builtin::IndicatorStrip { a: 1.0 });
        assert_eq!(s.radial_breaks([0.5, 0.0], 10.0), vec![0.5, 1.5]);
    }

    #[test]
    fn dimension_requirements() {
        assert_eq!(Expr::from(Builtin::X1Inv).min_dim(), Dim::One);
        assert_eq!(Expr::from(Builtin::Quadratic { q1: 1.0, q2: -1.0 }).min_dim(), Dim::Two);
        assert_eq!(Expr::shift(Builtin::Hat.into(), 1.0, Some(0.0)).min_dim(), Dim::Two);
    }
}
