//! Named, parameterized scenarios: examples and counterexamples for the
//! one-radius mean value property, each with its expected outcome.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Builtin, Expr};
use crate::functions::{FieldSpec, RadiusSpec};
use crate::grid::GridSpec;
use crate::means::{circle_mean, interval_mean, median_radius, InfinityPolicy};
use crate::point::{Dim, Point};
use crate::properties::{
    check_median, check_supermedian, radius_conditions, CheckReport, MeanKind, PointStatus, RadiusReport, DEFAULT_TOL,
};
use crate::quad::QuadConfig;
use crate::sigfmt::{sig17, Sig17};
use crate::special::{alpha_star_1d, alpha_star_2d, i_integral, solve_c0, tilde_m, tilde_m_gap, Threshold};

/// Fixed `α` used in the plane when the threshold is unbounded.
const ALPHA_WHEN_UNBOUNDED: f64 = 0.1;
/// Upper end of the `α` search for the planar threshold.
const ALPHA_SEARCH_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum ParamKind {
    /// Finite and > 0.
    Positive,
    /// Integer ≥ 1.
    Count,
}

#[derive(Debug, Clone, Copy)]
struct ParamDef {
    name: &'static str,
    /// `None`: computed by the scenario unless overridden.
    default: Option<f64>,
    kind: ParamKind,
}

const fn pos(name: &'static str, v: f64) -> ParamDef {
    ParamDef { name, default: Some(v), kind: ParamKind::Positive }
}
const fn count(name: &'static str, v: f64) -> ParamDef {
    ParamDef { name, default: Some(v), kind: ParamKind::Count }
}
const fn auto(name: &'static str) -> ParamDef {
    ParamDef { name, default: None, kind: ParamKind::Positive }
}

type Params = BTreeMap<String, f64>;
type Runner = fn(&Params, &QuadConfig, &mut ScenarioReport) -> Result<()>;

struct Scenario {
    name: &'static str,
    dim: Dim,
    field: &'static str,
    radius: &'static str,
    mean_kind: MeanKind,
    supermedian_holds: bool,
    median_holds: Option<bool>,
    notes: &'static str,
    params: &'static [ParamDef],
    run: Runner,
}

const POLAR_2D: [ParamDef; 4] =
    [pos("r_min", 1e-3), pos("r_max", 1e4), count("n_radial", 40.0), count("n_angular", 16.0)];

static REGISTRY: &[Scenario] = &[
    Scenario {
        name: "discontinuous-r",
        dim: Dim::Two,
        field: "hat",
        radius: "step_example",
        mean_kind: MeanKind::Sigma,
        supermedian_holds: true,
        median_holds: None,
        notes: "non-constant supermedian function for a discontinuous radius; continuity of r cannot be dropped",
        params: &[
            POLAR_2D[0],
            POLAR_2D[1],
            POLAR_2D[2],
            POLAR_2D[3],
            count("n_coarse", 101.0),
            count("n_fine", 1001.0),
        ],
        run: run_discontinuous,
    },
    Scenario {
        name: "liouville-1d-critical",
        dim: Dim::One,
        field: "logplus(M)",
        radius: "cabs_plus_M(c=c0,M)",
        mean_kind: MeanKind::Lambda,
        supermedian_holds: true,
        median_holds: None,
        notes: "critical growth r = c0|x| + M on the line: ln⁺(|x| − M) satisfies the interval mean inequality beyond M̃",
        params: &[pos("M", 1.0), pos("xmax", 1e8), count("n", 1000.0)],
        run: run_liouville_1d,
    },
    Scenario {
        name: "log-superharmonic",
        dim: Dim::Two,
        field: "logsuper",
        radius: "max_cabs_M(c,M)",
        mean_kind: MeanKind::Sigma,
        supermedian_holds: true,
        median_holds: None,
        notes: "−ln(|·|² + 1) is superharmonic, hence supermedian for every radius function",
        params: &[pos("c", 2.0), pos("M", 1.0), POLAR_2D[0], POLAR_2D[1], POLAR_2D[2], POLAR_2D[3]],
        run: run_log_superharmonic,
    },
    Scenario {
        name: "no-min-1d",
        dim: Dim::One,
        field: "rpow(alpha,c,M)",
        radius: "max_cabs_M(c,M)",
        mean_kind: MeanKind::Lambda,
        supermedian_holds: true,
        median_holds: None,
        notes: "supercritical c > c0 on the line: r^(−α) is supermedian iff Ψ(1 − α) ≤ 0 on c|x| > M",
        params: &[pos("c", 3.0), pos("M", 1.0), pos("xmax", 1e8), count("n", 400.0)],
        run: run_no_min_1d,
    },
    Scenario {
        name: "no-min-2d",
        dim: Dim::Two,
        field: "rpow(alpha,c,M)",
        radius: "max_cabs_M(c,M)",
        mean_kind: MeanKind::Sigma,
        supermedian_holds: true,
        median_holds: None,
        notes: "r ≤ c|·| + M with c > 1 in the plane: the non-constant r^(−α) is circle-supermedian for small α",
        params: &[
            pos("c", 2.0),
            pos("M", 1.0),
            auto("alpha"),
            POLAR_2D[0],
            POLAR_2D[1],
            count("n_radial", 100.0),
            count("n_angular", 100.0),
        ],
        run: run_no_min_2d,
    },
    Scenario {
        name: "no-min-2d-lambda",
        dim: Dim::Two,
        field: "rpow(alpha,c,M)",
        radius: "max_cabs_M(c,M)",
        mean_kind: MeanKind::Lambda,
        supermedian_holds: true,
        median_holds: None,
        notes: "disk-mean version of no-min-2d, with a smaller fixed α",
        params: &[
            pos("c", 2.0),
            pos("M", 1.0),
            pos("alpha", 0.05),
            POLAR_2D[0],
            pos("r_max", 1e3),
            count("n_radial", 20.0),
            count("n_angular", 8.0),
        ],
        run: run_no_min_2d_lambda,
    },
    Scenario {
        name: "remark-contracting",
        dim: Dim::Two,
        field: "hat",
        radius: "contract_example",
        mean_kind: MeanKind::Sigma,
        supermedian_holds: true,
        median_holds: Some(false),
        notes: "r(x) − |x| ≥ 2 keeps every circle off the support of the hat, so every mean is 0",
        params: &[POLAR_2D[0], POLAR_2D[1], POLAR_2D[2], POLAR_2D[3], count("pairs", 1000.0)],
        run: run_remark_contracting,
    },
    Scenario {
        name: "unbounded-r",
        dim: Dim::Two,
        field: "x1inv",
        radius: "parabolic",
        mean_kind: MeanKind::Sigma,
        supermedian_holds: true,
        median_holds: None,
        notes: "r = 6 max{1, x₁²} violates lim sup (r − |x|) < ∞; strip bound and median-radius asymptotics",
        params: &[
            pos("r_min", 1e-2),
            pos("r_max", 1e3),
            count("n_radial", 24.0),
            count("n_angular", 12.0),
            pos("strip_tmin", 0.1),
            pos("strip_tmax", 1e3),
            count("n_strip", 20.0),
            pos("tmax", 1e4),
        ],
        run: run_unbounded_r,
    },
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedOutcome {
    pub supermedian_holds: bool,
    pub median_holds: Option<bool>,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    pub name: String,
    /// `None` when computed by the scenario.
    pub default: Option<Sig17>,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub name: String,
    pub dim: Dim,
    pub field: String,
    pub radius: String,
    pub mean_kind: MeanKind,
    pub expected: ExpectedOutcome,
    pub params: Vec<ParamSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub matched: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub report: CheckReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedRadiusReport {
    pub name: String,
    pub report: RadiusReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripBoundRow {
    #[serde(serialize_with = "sig17")]
    pub t: f64,
    pub x: Point,
    #[serde(serialize_with = "sig17")]
    pub a: f64,
    #[serde(serialize_with = "sig17")]
    pub radius: f64,
    #[serde(serialize_with = "sig17")]
    pub sigma_a: f64,
    #[serde(serialize_with = "sig17")]
    pub bound: f64,
    pub converged: bool,
    /// `sigma_a ≤ bound + tol`; `None` when the quadrature did not converge.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticRow {
    #[serde(serialize_with = "sig17")]
    pub t: f64,
    #[serde(serialize_with = "sig17")]
    pub rho_star: f64,
    /// `rho_star / (t ln t)`.
    #[serde(serialize_with = "sig17")]
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub dim: Dim,
    pub params: BTreeMap<String, Sig17>,
    pub constants: BTreeMap<String, Sig17>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub thresholds: BTreeMap<String, Threshold>,
    pub checks: Vec<NamedCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub radius_reports: Vec<NamedRadiusReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub strip_bound: Vec<StripBoundRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub asymptotic: Vec<AsymptoticRow>,
    pub expectations: Vec<Expectation>,
    pub verdict: Verdict,
}

impl ScenarioReport {
    fn expect(&mut self, name: &str, expected: impl Into<String>, observed: impl Into<String>, matched: bool) {
        self.expectations.push(Expectation {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            matched,
        });
    }

    fn expect_clean(&mut self, name: &str, check: &CheckReport) {
        let observed = format!("{} violations, {} inconclusive", check.violations.len(), check.inconclusive.len());
        self.expect(name, "0 violations, 0 inconclusive", observed, check.passed());
    }

    fn constant(&mut self, name: &str, v: f64) {
        self.constants.insert(name.into(), Sig17(v));
    }

    fn push_check(&mut self, name: &str, report: CheckReport) {
        self.checks.push(NamedCheck { name: name.into(), report });
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.report)
    }

    pub fn radius_report(&self, name: &str) -> Option<&RadiusReport> {
        self.radius_reports.iter().find(|c| c.name == name).map(|c| &c.report)
    }

    pub fn expectation(&self, name: &str) -> Option<&Expectation> {
        self.expectations.iter().find(|e| e.name == name)
    }
}

fn lookup(name: &str) -> Result<&'static Scenario> {
    REGISTRY.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownScenario(name.into()))
}

/// Registered scenarios in name order.
pub fn list_scenarios() -> Vec<ScenarioSummary> {
    let mut out: Vec<ScenarioSummary> = REGISTRY
        .iter()
        .map(|s| ScenarioSummary {
            name: s.name.into(),
            dim: s.dim,
            field: s.field.into(),
            radius: s.radius.into(),
            mean_kind: s.mean_kind,
            expected: ExpectedOutcome {
                supermedian_holds: s.supermedian_holds,
                median_holds: s.median_holds,
                notes: s.notes.into(),
            },
            params: s
                .params
                .iter()
                .map(|p| ParamSummary {
                    name: p.name.into(),
                    default: p.default.map(Sig17),
                    kind: match p.kind {
                        ParamKind::Positive => "positive",
                        ParamKind::Count => "count",
                    }
                    .into(),
                })
                .collect(),
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

fn resolve(s: &Scenario, overrides: &BTreeMap<String, f64>) -> Result<Params> {
    let mut params = Params::new();
    for (key, &v) in overrides {
        let Some(def) = s.params.iter().find(|p| p.name == key) else {
            let known: Vec<&str> = s.params.iter().map(|p| p.name).collect();
            return Err(Error::InvalidOverride {
                key: key.clone(),
                reason: format!("unknown parameter for `{}` (known: {})", s.name, known.join(", ")),
            });
        };
        let bad = |reason: &str| Err(Error::InvalidOverride { key: key.clone(), reason: reason.into() });
        if !v.is_finite() {
            return bad("must be finite");
        }
        match def.kind {
            ParamKind::Positive if v <= 0.0 => return bad("must be > 0"),
            ParamKind::Count if v < 1.0 || v.fract() != 0.0 || v > 1e9 => return bad("must be an integer ≥ 1"),
            _ => {}
        }
        params.insert(key.clone(), v);
    }
    for def in s.params {
        if let (false, Some(d)) = (params.contains_key(def.name), def.default) {
            params.insert(def.name.into(), d);
        }
    }
    Ok(params)
}

fn p(params: &Params, key: &str) -> f64 {
    params[key]
}

fn n(params: &Params, key: &str) -> usize {
    params[key] as usize
}

/// Run a scenario with the default quadrature configuration.
pub fn run_scenario(name: &str, overrides: &BTreeMap<String, f64>) -> Result<ScenarioReport> {
    run_scenario_with(name, overrides, &QuadConfig::default())
}

pub fn run_scenario_with(name: &str, overrides: &BTreeMap<String, f64>, cfg: &QuadConfig) -> Result<ScenarioReport> {
    let s = lookup(name)?;
    let params = resolve(s, overrides)?;
    cfg.validate()?;
    let mut report = ScenarioReport {
        scenario: s.name.into(),
        dim: s.dim,
        params: BTreeMap::new(),
        constants: BTreeMap::new(),
        thresholds: BTreeMap::new(),
        checks: Vec::new(),
        radius_reports: Vec::new(),
        strip_bound: Vec::new(),
        asymptotic: Vec::new(),
        expectations: Vec::new(),
        verdict: Verdict::Fail,
    };
    (s.run)(&params, cfg, &mut report)?;
    for (k, v) in params {
        report.params.entry(k).or_insert(Sig17(v));
    }
    report.verdict = if report.expectations.iter().all(|e| e.matched) { Verdict::Pass } else { Verdict::Fail };
    Ok(report)
}

fn polar_grid(params: &Params) -> GridSpec {
    GridSpec::Polar {
        r_min: p(params, "r_min"),
        r_max: p(params, "r_max"),
        n_radial: n(params, "n_radial"),
        n_angular: n(params, "n_angular"),
        log: true,
    }
}

fn field2(e: Expr) -> Result<FieldSpec> {
    FieldSpec::new(e, Dim::Two)
}
fn radius2(e: Expr) -> Result<RadiusSpec> {
    RadiusSpec::new(e, Dim::Two)
}
fn b(builtin: Builtin) -> Expr {
    Expr::Builtin(builtin)
}

fn run_remark_contracting(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let field = field2(b(Builtin::Hat))?;
    let radius = radius2(b(Builtin::ContractExample))?;
    let grid = polar_grid(params);
    let sup = check_supermedian(&field, &radius, &grid, MeanKind::Sigma, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    let max_mean = sup.records.iter().map(|r| r.mean_value.abs()).fold(0.0, f64::max);
    rep.expect("means-vanish", "max |mean| ≤ 1e-9", format!("max |mean| = {max_mean:e}"), max_mean <= 1e-9);
    rep.push_check("supermedian", sup);

    let med = check_median(&field, &radius, &grid, MeanKind::Sigma, DEFAULT_TOL, cfg)?;
    // every mean is 0, so the median identity fails exactly where the hat exceeds tol
    let inside = med.records.iter().filter(|r| r.field_value > DEFAULT_TOL).count();
    let exact = med.records.iter().all(|r| (r.status == PointStatus::Violation) == (r.field_value > DEFAULT_TOL));
    rep.expect(
        "median-fails-inside-unit-disk",
        format!("violations exactly at the {inside} points with (1 − |x|)⁺ > tol"),
        format!("{} violations", med.violations.len()),
        exact && inside > 0,
    );
    rep.push_check("median", med);

    let rr = radius_conditions(&radius, &grid, n(params, "pairs"))?;
    let l = rr.lipschitz_estimate;
    rep.expect("lipschitz-below-one", "0.99 < L < 1", format!("L = {l}"), 0.99 < l && l < 1.0);
    rep.expect(
        "r-minus-abs-bounds",
        "2 < inf(r − |x|) ≤ sup(r − |x|) ≤ 3",
        format!("inf = {}, sup = {}", rr.inf_r_minus_abs, rr.sup_r_minus_abs),
        rr.inf_r_minus_abs > 2.0 && rr.sup_r_minus_abs <= 3.0,
    );
    rep.radius_reports.push(NamedRadiusReport { name: "radius".into(), report: rr });
    Ok(())
}

fn run_discontinuous(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let field = field2(b(Builtin::Hat))?;
    let radius = radius2(b(Builtin::StepExample))?;
    let grid = polar_grid(params);
    let sup = check_supermedian(&field, &radius, &grid, MeanKind::Sigma, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    rep.push_check("supermedian", sup);
    // radial grids across the jump at |x| = 2
    let across = |k: usize| GridSpec::Polar { r_min: 1.0, r_max: 3.0, n_radial: k, n_angular: 8, log: false };
    let (kc, kf) = (n(params, "n_coarse"), n(params, "n_fine"));
    let coarse = radius_conditions(&radius, &across(kc), 0)?;
    let fine = radius_conditions(&radius, &across(kf), 0)?;
    let growth = fine.lipschitz_estimate / coarse.lipschitz_estimate;
    let spacing = (kf as f64 - 1.0) / (kc as f64 - 1.0);
    rep.expect(
        "lipschitz-blow-up",
        format!("estimate grows with resolution (≥ half of the spacing ratio {spacing})"),
        format!("L = {} → {}", coarse.lipschitz_estimate, fine.lipschitz_estimate),
        growth >= 0.5 * spacing,
    );
    rep.radius_reports.push(NamedRadiusReport { name: "coarse".into(), report: coarse });
    rep.radius_reports.push(NamedRadiusReport { name: "fine".into(), report: fine });
    Ok(())
}

fn log_spaced(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k).map(|i| if i + 1 == k { hi } else { lo * (hi / lo).powf(i as f64 / (k - 1) as f64) }).collect()
}

fn run_unbounded_r(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let field = field2(b(Builtin::X1Inv))?;
    let radius = radius2(b(Builtin::Parabolic))?;
    let grid = polar_grid(params);
    let sup = check_supermedian(&field, &radius, &grid, MeanKind::Sigma, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    rep.push_check("supermedian", sup);

    let rr = radius_conditions(&radius, &grid, 1000)?;
    rep.expect(
        "r-minus-abs-unbounded-above",
        "sampled sup(r − |x|) grows like x₁²",
        format!("sup = {}", rr.sup_r_minus_abs),
        rr.sup_r_minus_abs > p(params, "r_max"),
    );
    rep.radius_reports.push(NamedRadiusReport { name: "radius".into(), report: rr });

    let ts = log_spaced(p(params, "strip_tmin"), p(params, "strip_tmax"), n(params, "n_strip"));
    let rows = strip_bound_check(&ts, 1e-6, cfg)?;
    let held = rows.iter().filter(|r| r.holds == Some(true)).count();
    rep.expect("strip-bound", format!("σ(A) ≤ 1/(2a) + 1e-6 at all {} t", rows.len()), format!("{held} hold"), held == rows.len());
    rep.strip_bound = rows;

    let tmax = p(params, "tmax");
    let mut ts = Vec::new();
    let mut t = 100.0;
    while t <= tmax * (1.0 + 1e-12) {
        ts.push(t);
        t *= 10.0;
    }
    if !ts.is_empty() {
        let rows = optimal_asymptotic(&ts, cfg)?;
        let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio - FRAC_2_PI).abs()).collect();
        let monotone = rows.windows(2).all(|w| w[1].ratio < w[0].ratio) && gaps.windows(2).all(|g| g[1] < g[0]);
        let shown: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.ratio)).collect();
        rep.expect(
            "ratio-trend",
            "ratios strictly decreasing toward 2/π",
            format!("ratios [{}]", shown.join(", ")),
            monotone,
        );
        rep.asymptotic = rows;
    }
    rep.constant("two_over_pi", FRAC_2_PI);
    Ok(())
}

fn non_constant(check: &CheckReport) -> bool {
    let first = check.records.first().map(|r| r.field_value);
    check.records.iter().any(|r| Some(r.field_value) != first)
}

fn run_no_min_2d(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (c, m) = (p(params, "c"), p(params, "M"));
    if c <= 1.0 {
        return Err(Error::InvalidOverride { key: "c".into(), reason: "must be > 1".into() });
    }
    let threshold = alpha_star_2d(c, ALPHA_SEARCH_MAX, 1e-10)?;
    let alpha = match params.get("alpha") {
        Some(&a) => a,
        None => threshold.value.finite().map_or(ALPHA_WHEN_UNBOUNDED, |t| 0.5 * t.min(1.0)),
    };
    rep.thresholds.insert("alpha_star_2d".into(), threshold);
    rep.params.insert("alpha".into(), Sig17(alpha));
    rep.constant("I(alpha)", i_integral(alpha, c, &QuadConfig::default().with_abs_tol(1e-13))?);
    let field = field2(b(Builtin::RPow { alpha, c, m }))?;
    let radius = radius2(b(Builtin::MaxCabsM { c, m }))?;
    let sup = check_supermedian(&field, &radius, &polar_grid(params), MeanKind::Sigma, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    let nc = non_constant(&sup);
    rep.expect("non-constant", "field takes ≥ 2 values on the grid", format!("{nc}"), nc);
    rep.push_check("supermedian", sup);
    Ok(())
}

fn run_no_min_2d_lambda(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (c, m, alpha) = (p(params, "c"), p(params, "M"), p(params, "alpha"));
    if c <= 1.0 {
        return Err(Error::InvalidOverride { key: "c".into(), reason: "must be > 1".into() });
    }
    let field = field2(b(Builtin::RPow { alpha, c, m }))?;
    let radius = radius2(b(Builtin::MaxCabsM { c, m }))?;
    let sup = check_supermedian(&field, &radius, &polar_grid(params), MeanKind::Lambda, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    let nc = non_constant(&sup);
    rep.expect("non-constant", "field takes ≥ 2 values on the grid", format!("{nc}"), nc);
    rep.push_check("supermedian", sup);
    Ok(())
}

fn run_log_superharmonic(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (c, m) = (p(params, "c"), p(params, "M"));
    let field = field2(b(Builtin::LogSuper))?;
    let radius = radius2(b(Builtin::MaxCabsM { c, m }))?;
    let sup = check_supermedian(&field, &radius, &polar_grid(params), MeanKind::Sigma, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    rep.push_check("supermedian", sup);
    Ok(())
}

fn run_liouville_1d(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (m, xmax, k) = (p(params, "M"), p(params, "xmax"), n(params, "n"));
    let c0 = solve_c0(1e-14)?.c0;
    let mt = tilde_m(c0, m, 1e-13)?;
    rep.constant("c0", c0);
    rep.constant("tilde_M", mt);
    if xmax <= mt {
        return Err(Error::InvalidOverride { key: "xmax".into(), reason: format!("must exceed M̃ = {mt}") });
    }
    // positivity of the cutoff function on (M̃, xmax]
    let xs = log_spaced(mt, xmax, k);
    let worst = xs.iter().map(|&x| tilde_m_gap(c0, m, x)).fold(f64::INFINITY, f64::min);
    rep.expect("cutoff-positive", "g > 0 on the log grid [M̃, xmax]", format!("min g = {worst:e}"), worst > 0.0);

    let field = FieldSpec::new(b(Builtin::LogPlus { m }), Dim::One)?;
    let radius = RadiusSpec::new(b(Builtin::CabsPlusM { c: c0, m }), Dim::One)?;
    let grid = GridSpec::Line { lo: mt, hi: xmax, n: k, log: true };
    let sup = check_supermedian(&field, &radius, &grid, MeanKind::Lambda, DEFAULT_TOL, cfg)?;
    rep.expect_clean("supermedian", &sup);
    rep.push_check("supermedian", sup);
    Ok(())
}

/// Closed-form `λ_{x,cx}(|·|^{−α})` for `x > 0`, `c > 1`, `α < 1`:
/// `x^{−α}((c+1)^{1−α} + (c−1)^{1−α}) / (2c(1−α))`.
pub fn interval_mean_abspow_closed(x: f64, c: f64, alpha: f64) -> f64 {
    let b = 1.0 - alpha;
    x.powf(-alpha) * ((c + 1.0).powf(b) + (c - 1.0).powf(b)) / (2.0 * c * b)
}

fn run_no_min_1d(params: &Params, cfg: &QuadConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (c, m, xmax, k) = (p(params, "c"), p(params, "M"), p(params, "xmax"), n(params, "n"));
    let threshold = alpha_star_1d(c, 1e-14)?;
    let a_star = threshold.value.finite().unwrap_or(1.0);
    rep.thresholds.insert("alpha_star_1d".into(), threshold);
    let a_lo = 0.5 * a_star;
    let a_hi = 0.5 * (a_star + 1.0);
    rep.constant("alpha_lo", a_lo);
    rep.constant("alpha_hi", a_hi);
    // c|x| > M only
    let lo = (m / c) * (1.0 + 1e-6);
    if xmax <= lo {
        return Err(Error::InvalidOverride { key: "xmax".into(), reason: format!("must exceed M/c = {}", m / c) });
    }
    let grid = GridSpec::Line { lo, hi: xmax, n: k, log: true };
    let radius = RadiusSpec::new(b(Builtin::MaxCabsM { c, m }), Dim::One)?;

    // quadrature of |·|^{−α} against its closed form, where r(x) = cx; the
    // singularity at 0 needs deeper bisection than the default cap, and no
    // clamp (min{f, 1e12} already removes ~1e-8 of mass for α ≈ 0.6)
    let deep = QuadConfig { max_subdivisions: cfg.max_subdivisions.max(120), ..*cfg };
    let mut oracle_gap: f64 = 0.0;
    for alpha in [a_lo, a_hi] {
        let f = FieldSpec::new(b(Builtin::AbsPow { alpha: -alpha, axis: None }), Dim::One)?;
        for x in log_spaced(lo, xmax, 7) {
            let exact = interval_mean_abspow_closed(x, c, alpha);
            let point_cfg = deep.with_abs_tol(deep.abs_tol.min(1e-11 * exact));
            let q = interval_mean(&f, Point::new1(x)?, c * x, &point_cfg, InfinityPolicy::Error)?.value;
            oracle_gap = oracle_gap.max((q - exact).abs() / exact);
        }
    }
    rep.constant("oracle_relative_gap", oracle_gap);
    rep.expect("closed-form-oracle", "relative gap ≤ 1e-8", format!("{oracle_gap:e}"), oracle_gap <= 1e-8);

    let below = FieldSpec::new(b(Builtin::RPow { alpha: a_lo, c, m }), Dim::One)?;
    let sup_lo = check_supermedian(&below, &radius, &grid, MeanKind::Lambda, DEFAULT_TOL, cfg)?;
    rep.expect_clean("below-threshold", &sup_lo);
    rep.push_check("below-threshold", sup_lo);

    let above = FieldSpec::new(b(Builtin::RPow { alpha: a_hi, c, m }), Dim::One)?;
    let sup_hi = check_supermedian(&above, &radius, &grid, MeanKind::Lambda, DEFAULT_TOL, cfg)?;
    let nv = sup_hi.violations.len();
    rep.expect("above-threshold", "≥ 1 violation", format!("{nv} violations"), nv >= 1);
    rep.push_check("above-threshold", sup_hi);
    Ok(())
}

/// Circle mean of the strip `A = {|y₁| ≤ 2a}` around `x = (t, 0)` with
/// `a = max{t, 1}` and radius `6 max{1, t²}`, against the bound `1/(2a)`.
pub fn strip_bound_check(t_values: &[f64], tol: f64, cfg: &QuadConfig) -> Result<Vec<StripBoundRow>> {
    t_values
        .iter()
        .map(|&t| {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidInput(format!("t must be > 0, got {t}")));
            }
            let a = t.max(1.0);
            let radius = 6.0 * t.powi(2).max(1.0);
            let x = Point::new2(t, 0.0)?;
            let field = field2(b(Builtin::IndicatorStrip { a: 2.0 * a }))?;
            let m = circle_mean(&field, x, radius, cfg, InfinityPolicy::default())?;
            let bound = 0.5 / a;
            Ok(StripBoundRow {
                t,
                x,
                a,
                radius,
                sigma_a: m.value,
                bound,
                converged: m.converged,
                holds: m.converged.then_some(m.value <= bound + tol),
            })
        })
        .collect()
}

/// Median radius `ρ*` of `min{1, |x₁|⁻¹}` at `(t, 0)` and `ρ*/(t ln t)`.
///
/// The bracket is `[t/2, 4 t ln t]`; a missing sign change there is an
/// error, never a skipped row.
pub fn optimal_asymptotic(t_values: &[f64], cfg: &QuadConfig) -> Result<Vec<AsymptoticRow>> {
    let field = field2(b(Builtin::X1Inv))?;
    t_values
        .iter()
        .map(|&t| {
            if !(t > std::f64::consts::E && t.is_finite()) {
                return Err(Error::InvalidInput(format!("t must exceed e, got {t}")));
            }
            let scale = t * t.ln();
            let bracket = (0.5 * t, 4.0 * scale);
            let rho = median_radius(&field, Point::new2(t, 0.0)?, bracket, 1e-10 * scale, cfg)?;
            Ok(AsymptoticRow { t, rho_star: rho, ratio: rho / scale })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_sorted() {
        let names: Vec<String> = list_scenarios().into_iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
        for want in ["remark-contracting", "unbounded-r", "no-min-1d", "no-min-2d", "liouville-1d-critical"] {
            assert!(names.iter().any(|n| n == want), "{want}");
        }
    }

    #[test]
    fn override_validation() {
        let mut o = BTreeMap::new();
        o.insert("bogus".to_string(), 1.0);
        assert!(matches!(run_scenario("no-min-2d", &o), Err(Error::InvalidOverride { .. })));
        let mut o = BTreeMap::new();
        o.insert("n_radial".to_string(), 2.5);
        assert!(matches!(run_scenario("no-min-2d", &o), Err(Error::InvalidOverride { .. })));
        assert!(matches!(run_scenario("nope", &BTreeMap::new()), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn strip_bound_examples() {
        let rows = strip_bound_check(&[0.5, 2.0], 1e-6, &QuadConfig::default()).unwrap();
        assert_eq!((rows[0].a, rows[0].radius, rows[0].bound), (1.0, 6.0, 0.5));
        assert_eq!((rows[1].a, rows[1].radius, rows[1].bound), (2.0, 24.0, 0.25));
        assert!(rows.iter().all(|r| r.holds == Some(true)));
    }

    #[test]
    fn asymptotic_rejects_small_t() {
        assert!(optimal_asymptotic(&[2.0], &QuadConfig::default()).is_err());
    }

    #[test]
    fn closed_form_matches_direct_integral() {
        // (1/(2cx)) ∫_{−(c−1)x}^{(c+1)x} |s|^{−α} ds at x = 2, c = 3, α = 1/2
        let direct = (1.0 / 12.0) * 2.0 * (8f64.sqrt() + 4f64.sqrt());
        assert!((interval_mean_abspow_closed(2.0, 3.0, 0.5) - direct).abs() < 1e-15);
    }
}
