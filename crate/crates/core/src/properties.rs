//! Grid checks of `mean_{x,r(x)}(f) ≤ f(x)` (supermedian) and
//! `mean_{x,r(x)}(f) = f(x)` (median), plus sampled estimates of the
//! conditions on the radius function.
//!
//! Everything here is sampling evidence. In particular the asymptotic
//! conditions `lim sup (r(x) − |x|) < ∞` and `lim inf (r(x) − |x|) = −∞`
//! can only be suggested by a finite sample, never confirmed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FieldSpec, RadiusSpec};
use crate::grid::GridSpec;
use crate::means::{circle_mean, disk_mean, interval_mean, InfinityPolicy, MeanResult};
use crate::point::{Dim, Point};
use crate::quad::QuadConfig;
use crate::sigfmt::{sig17, sig9, sig9_opt};

/// Default additive violation tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Seed of the random pair sampler in [`radius_conditions`].
pub const PAIR_SEED: u64 = 0x5EED_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    /// Circle mean `σ` (plane only).
    Sigma,
    /// Disk mean in the plane, interval mean on the line.
    Lambda,
}

impl MeanKind {
    pub fn parse(s: &str) -> Result<MeanKind> {
        match s {
            "sigma" => Ok(MeanKind::Sigma),
            "lambda" => Ok(MeanKind::Lambda),
            _ => Err(Error::InvalidInput(format!("mean kind must be `sigma` or `lambda`, got `{s}`"))),
        }
    }
}

impl std::fmt::Display for MeanKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeanKind::Sigma => "sigma",
            MeanKind::Lambda => "lambda",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Supermedian,
    Median,
}

/// `mean_{x,ρ}(f)` of the requested kind.
pub fn restricted_mean(
    field: &FieldSpec,
    center: Point,
    rho: f64,
    kind: MeanKind,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<MeanResult> {
    match (kind, center.dim()) {
        (MeanKind::Sigma, Dim::Two) => circle_mean(field, center, rho, cfg, inf),
        (MeanKind::Sigma, Dim::One) => Err(Error::DimensionMismatch { expected: 2, found: 1 }),
        (MeanKind::Lambda, Dim::Two) => disk_mean(field, center, rho, cfg, inf),
        (MeanKind::Lambda, Dim::One) => interval_mean(field, center, rho, cfg, inf),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Ok,
    Violation,
    Inconclusive,
}

/// Everything computed at one grid point (CSV sidecar row).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub point: Point,
    pub radius: f64,
    pub mean_value: f64,
    pub field_value: f64,
    /// `mean − f` (supermedian) or `|mean − f|` (median).
    pub margin: f64,
    pub err_estimate: f64,
    pub converged: bool,
    pub clamped: bool,
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub point: Point,
    #[serde(serialize_with = "sig17")]
    pub mean_value: f64,
    #[serde(serialize_with = "sig17")]
    pub field_value: f64,
    #[serde(serialize_with = "sig9")]
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckConfig {
    pub mode: CheckMode,
    pub field: FieldSpec,
    pub radius: RadiusSpec,
    pub grid: Option<GridSpec>,
    pub mean_kind: MeanKind,
    #[serde(serialize_with = "sig17")]
    pub tol: f64,
    pub quad: QuadConfig,
    pub infinity: InfinityPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub points_checked: usize,
    pub violations: Vec<Violation>,
    /// Points whose quadrature did not converge and whose verdict the error
    /// estimate does not settle. Never counted as violations.
    pub inconclusive: Vec<Point>,
    /// Largest margin over all checked points (`None` for an empty check).
    #[serde(serialize_with = "sig9_opt")]
    pub worst_margin: Option<f64>,
    pub evaluations: u64,
    pub clamped_points: usize,
    pub config: CheckConfig,
    #[serde(skip)]
    pub records: Vec<PointRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.inconclusive.is_empty()
    }
}

fn check_dims(field: &FieldSpec, radius: &RadiusSpec, dim: Dim) -> Result<()> {
    for found in [field.dim(), radius.dim()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim.get(), found: found.get() });
        }
    }
    Ok(())
}

fn evaluate(
    index: usize,
    x: Point,
    field: &FieldSpec,
    radius: &RadiusSpec,
    mode: CheckMode,
    kind: MeanKind,
    tol: f64,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<(PointRecord, u64)> {
    let rho = radius.eval(&x)?;
    let fx = field.eval(&x);
    if fx.is_nan() || fx == f64::NEG_INFINITY {
        return Err(Error::NonFiniteValue { at: x.coords(), value: fx });
    }
    let m = restricted_mean(field, x, rho, kind, cfg, inf)?;
    let diff = m.value - fx;
    let margin = match mode {
        CheckMode::Supermedian => diff,
        CheckMode::Median => diff.abs(),
    };
    let status = if m.converged {
        if margin > tol {
            PointStatus::Violation
        } else {
            PointStatus::Ok
        }
    } else if margin + m.err_estimate <= tol {
        // unconverged, but the error estimate still certifies the inequality
        PointStatus::Ok
    } else {
        PointStatus::Inconclusive
    };
    let record = PointRecord {
        index,
        point: x,
        radius: rho,
        mean_value: m.value,
        field_value: fx,
        margin,
        err_estimate: m.err_estimate,
        converged: m.converged,
        clamped: m.clamped,
        status,
    };
    Ok((record, m.evaluations))
}

/// Check an explicit list of points. Results keep the input order whatever
/// the thread count.
#[allow(clippy::too_many_arguments)]
pub fn check_points(
    field: &FieldSpec,
    radius: &RadiusSpec,
    points: &[Point],
    mode: CheckMode,
    kind: MeanKind,
    tol: f64,
    cfg: &QuadConfig,
    inf: InfinityPolicy,
) -> Result<CheckReport> {
    let dim = field.dim();
    check_dims(field, radius, dim)?;
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim.get(), found: p.dim().get() });
    }
    if kind == MeanKind::Sigma && dim == Dim::One {
        return Err(Error::DimensionMismatch { expected: 2, found: 1 });
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tol must be finite and ≥ 0, got {tol}")));
    }
    cfg.validate()?;
    inf.validate()?;
    let results: Vec<(PointRecord, u64)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &x)| evaluate(i, x, field, radius, mode, kind, tol, cfg, inf))
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut inconclusive = Vec::new();
    let mut worst: Option<f64> = None;
    let mut evaluations = 0;
    let mut clamped_points = 0;
    let mut records = Vec::with_capacity(results.len());
    for (r, evals) in results {
        evaluations += evals;
        clamped_points += r.clamped as usize;
        if !r.margin.is_nan() {
            worst = Some(worst.map_or(r.margin, |w| w.max(r.margin)));
        }
        match r.status {
            PointStatus::Violation => violations.push(Violation {
                point: r.point,
                mean_value: r.mean_value,
                field_value: r.field_value,
                margin: r.margin,
            }),
            PointStatus::Inconclusive => inconclusive.push(r.point),
            PointStatus::Ok => {}
        }
        records.push(r);
    }
    Ok(CheckReport {
        points_checked: records.len(),
        violations,
        inconclusive,
        worst_margin: worst,
        evaluations,
        clamped_points,
        config: CheckConfig {
            mode,
            field: field.clone(),
            radius: radius.clone(),
            grid: None,
            mean_kind: kind,
            tol,
            quad: *cfg,
            infinity: inf,
        },
        records,
    })
}

fn check_grid(
    field: &FieldSpec,
    radius: &RadiusSpec,
    grid: &GridSpec,
    mode: CheckMode,
    kind: MeanKind,
    tol: f64,
    cfg: &QuadConfig,
) -> Result<CheckReport> {
    if grid.dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim().get(), found: grid.dim().get() });
    }
    let points = grid.enumerate()?;
    let mut report = check_points(field, radius, &points, mode, kind, tol, cfg, InfinityPolicy::default())?;
    report.config.grid = Some(grid.clone());
    Ok(report)
}

/// Violation at `x` iff `mean_{x,r(x)}(f) > f(x) + tol`.
pub fn check_supermedian(
    field: &FieldSpec,
    radius: &RadiusSpec,
    grid: &GridSpec,
    kind: MeanKind,
    tol: f64,
    cfg: &QuadConfig,
) -> Result<CheckReport> {
    check_grid(field, radius, grid, CheckMode::Supermedian, kind, tol, cfg)
}

/// Violation at `x` iff `|mean_{x,r(x)}(f) − f(x)| > tol`.
pub fn check_median(
    field: &FieldSpec,
    radius: &RadiusSpec,
    grid: &GridSpec,
    kind: MeanKind,
    tol: f64,
    cfg: &QuadConfig,
) -> Result<CheckReport> {
    check_grid(field, radius, grid, CheckMode::Median, kind, tol, cfg)
}

/// Sampled evidence on a radius function.
///
/// `sup_r_minus_abs` is a lower bound for the true supremum of `r(x) − |x|`
/// over the sampled region and `inf_r_minus_abs` an upper bound for the
/// infimum. The Lipschitz estimate is a lower bound for the best constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusReport {
    #[serde(serialize_with = "sig17")]
    pub sup_r_minus_abs: f64,
    #[serde(serialize_with = "sig17")]
    pub inf_r_minus_abs: f64,
    #[serde(serialize_with = "sig17")]
    pub lipschitz_estimate: f64,
    /// Pair attaining the Lipschitz estimate.
    pub lipschitz_pair: Option<(Point, Point)>,
    /// Grid points sampled for the sup/inf estimates.
    pub samples: usize,
    /// Pairs used for the Lipschitz estimate (neighbours plus random).
    pub pairs: usize,
    pub grid: GridSpec,
}

/// A uniformly random point of the region covered by the grid (log-uniform
/// in the radius or coordinate for log-spaced grids).
fn random_point(grid: &GridSpec, rng: &mut ChaCha8Rng) -> Result<Point> {
    let mix = |lo: f64, hi: f64, log: bool, u: f64| {
        if log {
            lo * (hi / lo).powf(u)
        } else {
            lo + (hi - lo) * u
        }
    };
    match *grid {
        GridSpec::Cartesian { lo, hi, .. } => {
            Point::new2(mix(lo[0], hi[0], false, rng.random()), mix(lo[1], hi[1], false, rng.random()))
        }
        GridSpec::Polar { r_min, r_max, log, .. } => {
            let r = mix(r_min, r_max, log, rng.random());
            let t = std::f64::consts::TAU * rng.random::<f64>();
            Point::new2(r * t.cos(), r * t.sin())
        }
        GridSpec::Line { lo, hi, log, .. } => Point::new1(mix(lo, hi, log, rng.random())),
    }
}

pub fn radius_conditions(radius: &RadiusSpec, sample: &GridSpec, pair_samples: usize) -> Result<RadiusReport> {
    radius_conditions_seeded(radius, sample, pair_samples, PAIR_SEED)
}

pub fn radius_conditions_seeded(
    radius: &RadiusSpec,
    sample: &GridSpec,
    pair_samples: usize,
    seed: u64,
) -> Result<RadiusReport> {
    if sample.dim() != radius.dim() {
        return Err(Error::DimensionMismatch { expected: radius.dim().get(), found: sample.dim().get() });
    }
    let points = sample.enumerate()?;
    if points.is_empty() {
        return Err(Error::InvalidInput("radius sample must be non-empty".into()));
    }
    let values: Vec<f64> = points.iter().map(|p| radius.eval(p)).collect::<Result<_>>()?;
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for (p, r) in points.iter().zip(&values) {
        sup = sup.max(r - p.norm());
        inf = inf.min(r - p.norm());
    }

    let mut best = 0.0;
    let mut best_pair = None;
    let mut consider = |a: Point, ra: f64, b: Point, rb: f64| {
        let d = a.distance(&b);
        if d > 0.0 {
            let q = (ra - rb).abs() / d;
            if q > best {
                best = q;
                best_pair = Some((a, b));
            }
        }
    };
    let neighbours = sample.neighbor_pairs();
    for &(i, j) in &neighbours {
        consider(points[i], values[i], points[j], values[j]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pair_samples {
        let a = random_point(sample, &mut rng)?;
        let b = random_point(sample, &mut rng)?;
        consider(a, radius.eval(&a)?, b, radius.eval(&b)?);
    }
    Ok(RadiusReport {
        sup_r_minus_abs: sup,
        inf_r_minus_abs: inf,
        lipschitz_estimate: best,
        lipschitz_pair: best_pair,
        samples: points.len(),
        pairs: neighbours.len() + pair_samples,
        grid: sample.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(s: &str) -> FieldSpec {
        FieldSpec::parse(s, Dim::Two).unwrap()
    }
    fn r2(s: &str) -> RadiusSpec {
        RadiusSpec::parse(s, Dim::Two).unwrap()
    }
    const CFG: QuadConfig = QuadConfig { abs_tol: 1e-9, max_subdivisions: 24, initial_panels: 64 };

    fn polar() -> GridSpec {
        GridSpec::Polar { r_min: 0.01, r_max: 100.0, n_radial: 9, n_angular: 6, log: true }
    }

    #[test]
    fn constant_field_has_no_violations() {
        let rep = check_supermedian(&f2("constant(v=5)"), &r2("contract_example"), &polar(), MeanKind::Sigma, 1e-8, &CFG)
            .unwrap();
        assert_eq!(rep.points_checked, 54);
        assert!(rep.passed());
        assert!(rep.worst_margin.unwrap().abs() <= 1e-9);
    }

    #[test]
    fn hat_with_contracting_radius() {
        let rep = check_supermedian(&f2("hat"), &r2("contract_example"), &polar(), MeanKind::Sigma, 1e-8, &CFG).unwrap();
        assert!(rep.passed());
        assert!(rep.records.iter().all(|r| r.mean_value.abs() <= 1e-9));
        // median fails exactly where the hat is positive
        let rep = check_median(&f2("hat"), &r2("contract_example"), &polar(), MeanKind::Sigma, 1e-8, &CFG).unwrap();
        for r in &rep.records {
            assert_eq!(r.status == PointStatus::Violation, r.point.norm() < 1.0 - 1e-8, "{r:?}");
        }
    }

    #[test]
    fn logsuper_is_supermedian() {
        let rep = check_supermedian(&f2("logsuper"), &r2("max_cabs_M(c=2,M=1)"), &polar(), MeanKind::Sigma, 1e-8, &CFG)
            .unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn linear_is_median_and_quadratic_is_not() {
        let grid = GridSpec::Cartesian { lo: [-3.0, -3.0], hi: [3.0, 3.0], n: 5 };
        let rep = check_median(&f2("linear"), &r2("constant(v=1)"), &grid, MeanKind::Sigma, 1e-8, &CFG).unwrap();
        assert!(rep.passed());
        let rep = check_median(&f2("quadratic"), &r2("constant(v=1)"), &grid, MeanKind::Sigma, 1e-8, &CFG).unwrap();
        assert_eq!(rep.violations.len(), 25);
        assert!(rep.violations.iter().all(|v| (v.margin - 1.0).abs() < 1e-9));
    }

    #[test]
    fn sigma_on_the_line_is_rejected() {
        let f = FieldSpec::parse("abs", Dim::One).unwrap();
        let r = RadiusSpec::parse("constant(v=1)", Dim::One).unwrap();
        let g = GridSpec::Line { lo: 0.0, hi: 1.0, n: 3, log: false };
        assert!(matches!(
            check_supermedian(&f, &r, &g, MeanKind::Sigma, 1e-8, &CFG),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(check_supermedian(&f, &r, &g, MeanKind::Lambda, 1e-8, &CFG).is_ok());
        assert!(matches!(
            check_supermedian(&f2("hat"), &r, &polar(), MeanKind::Sigma, 1e-8, &CFG),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn radius_condition_examples() {
        let g = GridSpec::Polar { r_min: 0.0, r_max: 1e3, n_radial: 50, n_angular: 8, log: false };
        let rep = radius_conditions(&r2("contract_example"), &g, 1000).unwrap();
        assert!(rep.sup_r_minus_abs <= 3.0 && rep.inf_r_minus_abs > 2.0);
        assert!(rep.lipschitz_estimate < 1.0);
        let rep = radius_conditions(&r2("constant(v=1)"), &g, 100).unwrap();
        assert_eq!(rep.sup_r_minus_abs, 1.0);
        assert_eq!(rep.inf_r_minus_abs, 1.0 - 1e3);
        let rep = radius_conditions(&r2("parabolic"), &g, 100).unwrap();
        assert!(rep.sup_r_minus_abs > 1e5);
        assert!(rep.inf_r_minus_abs < -900.0);
    }

    #[test]
    fn step_radius_lipschitz_grows_with_resolution() {
        let r = r2("step_example");
        let grid = |n| GridSpec::Polar { r_min: 1.0, r_max: 3.0, n_radial: n, n_angular: 8, log: false };
        let coarse = radius_conditions(&r, &grid(101), 0).unwrap().lipschitz_estimate;
        let fine = radius_conditions(&r, &grid(1001), 0).unwrap().lipschitz_estimate;
        assert!((coarse - 100.0).abs() < 1e-6 && (fine - 1000.0).abs() < 1e-6, "{coarse} {fine}");
    }
}
