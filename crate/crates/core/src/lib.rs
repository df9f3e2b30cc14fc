//! Numerical laboratory for one-radius mean value properties.
//!
//! Given a field `f` and a radius function `r > 0`, the crate computes the
//! restricted means `σ_{x,r(x)}(f)` (circle), `λ_{x,r(x)}(f)` (disk or
//! interval), checks the inequality `mean ≤ f(x)` over sampling grids, and
//! evaluates the constants and thresholds that separate the regimes where
//! such functions must be constant from those where they need not be.

pub mod error;
pub mod expr;
pub mod fenton;
pub mod functions;
pub mod gallery;
pub mod grid;
pub mod lang;
pub mod means;
pub mod point;
pub mod properties;
pub mod quad;
pub mod sigfmt;
pub mod special;

pub use error::{Error, Result};
pub use expr::{Builtin, Expr, Locus};
pub use fenton::{fenton_init, fenton_step, fenton_trace, CircleProfile, FentonTrace};
pub use functions::{FieldSpec, RadiusSpec};
pub use gallery::{
    list_scenarios, optimal_asymptotic, run_scenario, run_scenario_with, strip_bound_check, ScenarioReport,
    ScenarioSummary, Verdict,
};
pub use grid::GridSpec;
pub use lang::{parse_expr, parse_grid, ParseError};
pub use means::{circle_mean, disk_mean, interval_mean, median_radius, InfinityPolicy, MeanResult};
pub use point::{Dim, Point};
pub use properties::{
    check_median, check_points, check_supermedian, radius_conditions, CheckMode, CheckReport, MeanKind, RadiusReport,
};
pub use quad::QuadConfig;
pub use special::{
    alpha_star_1d, alpha_star_2d, big_psi, i_integral, psi, psi_prime, solve_c0, tilde_m, CriticalConstants,
    Threshold, ThresholdValue,
};
