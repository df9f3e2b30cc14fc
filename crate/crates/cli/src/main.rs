//! `supermedian` command-line front end.
//!
//! Exit codes: 0 all checks passed, 1 violations (or a failed scenario),
//! 2 inconclusive only, 64 usage or parse error, 70 other runtime error.

mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use supermedian::{
    alpha_star_1d, alpha_star_2d, check_median, check_supermedian, fenton_trace, list_scenarios, parse_grid,
    run_scenario_with, solve_c0, Dim, Error, FieldSpec, MeanKind, QuadConfig, RadiusSpec, Verdict,
};

use report::{Command, Payload, RunReport};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATIONS: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Debug, Parser)]
#[command(name = "supermedian", version, about = "Restricted mean value checks, critical constants and scenarios")]
struct Cli {
    /// Default output directory when `--out` is not given.
    #[arg(long, global = true, env = "SUPERMEDIAN_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args, Clone, Copy)]
struct QuadArgs {
    /// Absolute tolerance on each mean.
    #[arg(long, default_value_t = 1e-9)]
    abs_tol: f64,
    /// Maximum bisection depth of a quadrature panel.
    #[arg(long, default_value_t = 24)]
    max_subdivisions: u32,
    /// Initial trapezoid nodes / Gauss-Kronrod panels.
    #[arg(long, default_value_t = 64)]
    initial_panels: u32,
}

impl QuadArgs {
    fn config(self) -> supermedian::Result<QuadConfig> {
        let cfg = QuadConfig {
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            initial_panels: self.initial_panels,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve ψ(c₀) = 0 by bisection.
    SolveC0 {
        /// Bracket width, in (0, 1e-2).
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the supermedian (or median) inequality over a grid.
    Check {
        #[arg(long)]
        field: String,
        #[arg(long)]
        radius: String,
        /// `line(..)`, `cartesian(..)` or `polar(..)`; fixes the dimension.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value = "sigma", value_parser = ["sigma", "lambda"])]
        mean: String,
        /// Additive violation tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Check the two-sided median identity instead.
        #[arg(long)]
        median: bool,
        #[command(flatten)]
        quad: QuadArgs,
        /// Report file; a `.points.csv` sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named scenario, or `list` them.
    Scenario {
        name: String,
        /// Parameter override `key=value` (repeatable).
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        quad: QuadArgs,
        /// Output directory for the report and CSV tables.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the scenario list as a JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Trace the propagation sequence on the unit circle.
    Fenton {
        #[arg(long)]
        radius: String,
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = supermedian::fenton::DEFAULT_ANGLES)]
        angles: usize,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Report file; a `.profile.csv` sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical exponent: `I(α) < 1` (dim 2) or `Ψ(1 − α) < 0` (dim 1).
    AlphaStar {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Search limit for dim 2.
        #[arg(long, default_value_t = 50.0)]
        alpha_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_)
            | Error::Parse(_)
            | Error::UnknownScenario(_)
            | Error::InvalidOverride { .. }
            | Error::DimensionMismatch { .. }
            | Error::Domain(_) => EXIT_USAGE,
            _ => EXIT_SOFTWARE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_SOFTWARE, message: e.to_string() }
}

/// Result of one command: the report parts and the exit code it implies.
struct Outcome {
    name: &'static str,
    config: Value,
    results: Value,
    quadrature: Value,
    code: u8,
    /// Writes sidecar files next to the report.
    sidecars: Box<dyn FnOnce(&Path) -> Result<Vec<PathBuf>, Failure>>,
}

fn no_sidecars() -> Box<dyn FnOnce(&Path) -> Result<Vec<PathBuf>, Failure>> {
    Box::new(|_| Ok(Vec::new()))
}

fn value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    report::to_value(v).map_err(io_failure)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    path.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_solve_c0(tol: f64) -> Result<Outcome, Failure> {
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(usage(format!("--tol must lie in (0, 1e-2), got {tol}")));
    }
    let k = solve_c0(tol)?;
    Ok(Outcome {
        name: "solve-c0",
        config: json!({ "tol": tol }),
        results: value(&k)?,
        quadrature: json!({ "evaluations": 0 }),
        code: EXIT_OK,
        sidecars: no_sidecars(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    field: &str,
    radius: &str,
    grid: &str,
    mean: &str,
    tol: f64,
    median: bool,
    quad: QuadArgs,
) -> Result<Outcome, Failure> {
    let grid = parse_grid(grid).map_err(|e| usage(format!("--grid: {e}")))?;
    let dim = grid.dim();
    let field = FieldSpec::parse(field, dim).map_err(|e| usage(format!("--field: {e}")))?;
    let radius = RadiusSpec::parse(radius, dim).map_err(|e| usage(format!("--radius: {e}")))?;
    let kind = MeanKind::parse(mean)?;
    let cfg = quad.config()?;
    let rep = if median {
        check_median(&field, &radius, &grid, kind, tol, &cfg)?
    } else {
        check_supermedian(&field, &radius, &grid, kind, tol, &cfg)?
    };
    let code = if !rep.violations.is_empty() {
        EXIT_VIOLATIONS
    } else if !rep.inconclusive.is_empty() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let quadrature = json!({
        "evaluations": rep.evaluations,
        "inconclusive": rep.inconclusive.len(),
        "clamped_points": rep.clamped_points,
    });
    Ok(Outcome {
        name: "check",
        config: value(&rep.config)?,
        results: value(&rep)?,
        quadrature,
        code,
        sidecars: Box::new(move |out| {
            let csv = sibling(out, ".points.csv");
            report::write_points_csv(&csv, &rep).map_err(io_failure)?;
            Ok(vec![csv])
        }),
    })
}

fn parse_params(params: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    let mut map = BTreeMap::new();
    for p in params {
        let Some((k, v)) = p.split_once('=') else {
            return Err(usage(format!("--param expects KEY=VALUE, got `{p}`")));
        };
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::from(Error::InvalidOverride { key: k.trim().into(), reason: format!("`{v}` is not a number") }))?;
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

fn cmd_scenario(name: &str, params: &[String], quad: QuadArgs) -> Result<Outcome, Failure> {
    if name == "list" {
        return Ok(Outcome {
            name: "scenario",
            config: json!({ "name": "list" }),
            results: value(&list_scenarios())?,
            quadrature: json!({ "evaluations": 0 }),
            code: EXIT_OK,
            sidecars: no_sidecars(),
        });
    }
    let overrides = parse_params(params)?;
    let cfg = quad.config()?;
    let rep = run_scenario_with(name, &overrides, &cfg)?;
    let evaluations: u64 = rep.checks.iter().map(|c| c.report.evaluations).sum();
    let inconclusive: usize = rep.checks.iter().map(|c| c.report.inconclusive.len()).sum();
    let code = match rep.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_VIOLATIONS,
    };
    Ok(Outcome {
        name: "scenario",
        config: json!({ "name": name, "overrides": overrides, "quad": value(&cfg)? }),
        results: value(&rep)?,
        quadrature: json!({ "evaluations": evaluations, "inconclusive": inconclusive }),
        code,
        sidecars: Box::new(move |out| {
            let dir = out.parent().unwrap_or(Path::new("."));
            let names = report::write_scenario_tables(dir, &rep).map_err(io_failure)?;
            Ok(names.into_iter().map(|n| dir.join(n)).collect())
        }),
    })
}

fn cmd_fenton(radius: &str, target: f64, angles: usize, max_iter: usize) -> Result<Outcome, Failure> {
    let radius = RadiusSpec::parse(radius, Dim::Two).map_err(|e| usage(format!("--radius: {e}")))?;
    let trace = fenton_trace(&radius, target, angles, max_iter)?;
    let last = trace.profiles.last().expect("trace has a final profile");
    let results = json!({
        "n_stop": trace.n_stop,
        "cleared": trace.cleared,
        "final_min_alpha": supermedian::sigfmt::Sig17(last.min_alpha()),
        "iterations_recorded": trace.profiles.len(),
    });
    Ok(Outcome {
        name: "fenton",
        config: json!({ "radius": radius.to_string(), "target": target, "angles": angles, "max_iter": max_iter }),
        results,
        quadrature: json!({ "evaluations": 0 }),
        code: if trace.cleared { EXIT_OK } else { EXIT_INCONCLUSIVE },
        sidecars: Box::new(move |out| {
            let csv = sibling(out, ".profile.csv");
            report::write_profile_csv(&csv, &trace).map_err(io_failure)?;
            Ok(vec![csv])
        }),
    })
}

fn cmd_alpha_star(dim: u8, c: f64, tol: f64, alpha_max: f64) -> Result<Outcome, Failure> {
    let threshold = match dim {
        1 => alpha_star_1d(c, tol)?,
        _ => alpha_star_2d(c, alpha_max, tol)?,
    };
    Ok(Outcome {
        name: "alpha-star",
        config: json!({ "dim": dim, "c": c, "tol": tol, "alpha_max": alpha_max }),
        results: value(&threshold)?,
        quadrature: json!({ "evaluations": 0 }),
        code: EXIT_OK,
        sidecars: no_sidecars(),
    })
}

fn dispatch(cmd: &Cmd) -> Result<(Outcome, Option<PathBuf>), Failure> {
    Ok(match cmd {
        Cmd::SolveC0 { tol, out } => (cmd_solve_c0(*tol)?, out.clone()),
        Cmd::Check { field, radius, grid, mean, tol, median, quad, out } => {
            (cmd_check(field, radius, grid, mean, *tol, *median, *quad)?, out.clone())
        }
        Cmd::Scenario { name, params, quad, out, .. } => {
            (cmd_scenario(name, params, *quad)?, out.as_ref().map(|d| d.join("report.json")))
        }
        Cmd::Fenton { radius, target, angles, max_iter, out } => {
            (cmd_fenton(radius, *target, *angles, *max_iter)?, out.clone())
        }
        Cmd::AlphaStar { dim, c, tol, alpha_max, out } => (cmd_alpha_star(*dim, *c, *tol, *alpha_max)?, out.clone()),
    })
}

fn run(cli: Cli, args: Vec<String>) -> Result<u8, Failure> {
    let start = Instant::now();
    let (outcome, out) = dispatch(&cli.command)?;
    let list_text = match &cli.command {
        Cmd::Scenario { name, json: false, .. } if name == "list" => Some(()),
        _ => None,
    };
    let out = out.or_else(|| {
        let dir = cli.out_dir.as_ref()?;
        Some(match &cli.command {
            Cmd::Scenario { name, .. } => dir.join(name).join("report.json"),
            _ => dir.join(format!("{}.json", outcome.name)),
        })
    });
    let payload = Payload {
        schema: report::SCHEMA,
        tool: report::tool(),
        command: Command { name: outcome.name.into(), args },
        config: outcome.config,
        results: outcome.results,
        quadrature: outcome.quadrature,
    };
    let code = outcome.code;
    if list_text.is_some() {
        if let Value::Array(items) = &payload.results {
            for s in items {
                println!("{}\t{}", s["name"].as_str().unwrap_or(""), s["expected"]["notes"].as_str().unwrap_or(""));
            }
        }
        return Ok(code);
    }
    let report = RunReport::new(payload, start.elapsed().as_secs_f64()).map_err(io_failure)?;
    let text = serde_json::to_string_pretty(&report).map_err(io_failure)?;
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(io_failure)?;
            }
            std::fs::write(&path, text + "\n").map_err(io_failure)?;
            let mut written = vec![path.clone()];
            written.extend((outcome.sidecars)(&path)?);
            for p in written {
                println!("wrote {}", p.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, args.into_iter().skip(1).collect()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
