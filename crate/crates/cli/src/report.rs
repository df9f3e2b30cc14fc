//! Versioned run report and CSV sidecars.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use supermedian::properties::PointRecord;
use supermedian::{CheckReport, FentonTrace, ScenarioReport};

pub const SCHEMA: &str = "supermedian.run-report/1";

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Command {
    pub name: String,
    pub args: Vec<String>,
}

/// Everything except timing; hashed for the determinism check.
#[derive(Debug, Serialize)]
pub struct Payload {
    pub schema: &'static str,
    pub tool: Tool,
    pub command: Command,
    pub config: Value,
    pub results: Value,
    pub quadrature: Value,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub payload: Payload,
    pub payload_sha256: String,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(payload: Payload, wall_seconds: f64) -> serde_json::Result<RunReport> {
        let bytes = serde_json::to_vec(&payload)?;
        let payload_sha256 = hex::encode(Sha256::digest(&bytes));
        Ok(RunReport { payload, payload_sha256, timing: Timing { wall_seconds } })
    }
}

pub fn tool() -> Tool {
    Tool { name: "supermedian", version: env!("CARGO_PKG_VERSION") }
}

pub fn to_value<T: Serialize>(v: &T) -> serde_json::Result<Value> {
    serde_json::to_value(v)
}

#[derive(Serialize)]
struct PointRow {
    index: usize,
    x1: f64,
    x2: Option<f64>,
    radius: f64,
    mean_value: f64,
    field_value: f64,
    margin: f64,
    err_estimate: f64,
    converged: bool,
    clamped: bool,
    status: &'static str,
}

fn status_name(r: &PointRecord) -> &'static str {
    use supermedian::properties::PointStatus::*;
    match r.status {
        Ok => "ok",
        Violation => "violation",
        Inconclusive => "inconclusive",
    }
}

/// One row per grid point.
pub fn write_points_csv(path: &Path, report: &CheckReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in &report.records {
        let c = r.point.coords();
        w.serialize(PointRow {
            index: r.index,
            x1: c[0],
            x2: (r.point.dim() == supermedian::Dim::Two).then_some(c[1]),
            radius: r.radius,
            mean_value: r.mean_value,
            field_value: r.field_value,
            margin: r.margin,
            err_estimate: r.err_estimate,
            converged: r.converged,
            clamped: r.clamped,
            status: status_name(r),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Long format: `iteration, angle, alpha`.
pub fn write_profile_csv(path: &Path, trace: &FentonTrace) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iteration", "angle", "alpha"])?;
    for p in &trace.profiles {
        for (t, a) in p.angles.iter().zip(&p.alphas) {
            w.write_record([p.iteration.to_string(), t.to_string(), a.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_scenario_tables(dir: &Path, report: &ScenarioReport) -> csv::Result<Vec<String>> {
    let mut written = Vec::new();
    for c in &report.checks {
        let name = format!("{}.points.csv", c.name);
        write_points_csv(&dir.join(&name), &c.report)?;
        written.push(name);
    }
    if !report.strip_bound.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("strip_bound.csv"))?;
        w.write_record(["t", "a", "radius", "sigma_a", "bound", "converged", "holds"])?;
        for r in &report.strip_bound {
            let holds = r.holds.map_or(String::new(), |h| h.to_string());
            w.write_record([
                r.t.to_string(),
                r.a.to_string(),
                r.radius.to_string(),
                r.sigma_a.to_string(),
                r.bound.to_string(),
                r.converged.to_string(),
                holds,
            ])?;
        }
        w.flush()?;
        written.push("strip_bound.csv".into());
    }
    if !report.asymptotic.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("asymptotic.csv"))?;
        w.write_record(["t", "rho_star", "ratio"])?;
        for r in &report.asymptotic {
            w.write_record([r.t.to_string(), r.rho_star.to_string(), r.ratio.to_string()])?;
        }
        w.flush()?;
        written.push("asymptotic.csv".into());
    }
    Ok(written)
}
