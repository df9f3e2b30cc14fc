use std::f64::consts::TAU;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::fmt_number;
use crate::point::{Dim, Point};

/// Sampling grid for property checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridSpec {
    /// `n × n` points of the box `[lo₁,hi₁] × [lo₂,hi₂]`.
    Cartesian { lo: [f64; 2], hi: [f64; 2], n: usize },
    /// Circles of `n_radial` radii with `n_angular` equispaced angles each.
    Polar { r_min: f64, r_max: f64, n_radial: usize, n_angular: usize, log: bool },
    /// `n` points of `[lo, hi]` on the real line.
    Line { lo: f64, hi: f64, n: usize, log: bool },
}

fn spaced(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                return hi;
            }
            let s = i as f64 / last;
            if log {
                lo * (hi / lo).powf(s)
            } else {
                lo + (hi - lo) * s
            }
        })
        .collect()
}

impl GridSpec {
    pub fn dim(&self) -> Dim {
        match self {
            GridSpec::Line { .. } => Dim::One,
            _ => Dim::Two,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("grid: {m}")));
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            GridSpec::Cartesian { lo, hi, n } => {
                if !finite(&[lo[0], lo[1], hi[0], hi[1]]) {
                    return bad("bounds must be finite");
                }
                if n == 0 {
                    return bad("n must be ≥ 1");
                }
                if lo[0] > hi[0] || lo[1] > hi[1] {
                    return bad("bounds must be ordered");
                }
            }
            GridSpec::Polar { r_min, r_max, n_radial, n_angular, log } => {
                if !finite(&[r_min, r_max]) {
                    return bad("radii must be finite");
                }
                if n_radial == 0 || n_angular == 0 {
                    return bad("counts must be ≥ 1");
                }
                if !(0.0 <= r_min && r_min <= r_max) {
                    return bad("radii must satisfy 0 ≤ r_min ≤ r_max");
                }
                if log && r_min <= 0.0 {
                    return bad("log spacing needs r_min > 0");
                }
            }
            GridSpec::Line { lo, hi, n, log } => {
                if !finite(&[lo, hi]) {
                    return bad("bounds must be finite");
                }
                if n == 0 {
                    return bad("n must be ≥ 1");
                }
                if lo > hi {
                    return bad("bounds must be ordered");
                }
                if log && lo <= 0.0 {
                    return bad("log spacing needs lo > 0");
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match *self {
            GridSpec::Cartesian { n, .. } => n * n,
            GridSpec::Polar { n_radial, n_angular, .. } => n_radial * n_angular,
            GridSpec::Line { n, .. } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in lexicographic index order (outer index first).
    pub fn enumerate(&self) -> Result<Vec<Point>> {
        self.validate()?;
        match *self {
            GridSpec::Cartesian { lo, hi, n } => {
                let xs = spaced(lo[0], hi[0], n, false);
                let ys = spaced(lo[1], hi[1], n, false);
                xs.iter().flat_map(|&x| ys.iter().map(move |&y| Point::new2(x, y))).collect()
            }
            GridSpec::Polar { r_min, r_max, n_radial, n_angular, log } => {
                let rs = spaced(r_min, r_max, n_radial, log);
                let angles: Vec<f64> = (0..n_angular).map(|j| TAU * j as f64 / n_angular as f64).collect();
                rs.iter()
                    .flat_map(|&r| {
                        angles.iter().map(move |&t| {
                            let (s, c) = t.sin_cos();
                            Point::new2(r * c, r * s)
                        })
                    })
                    .collect()
            }
            GridSpec::Line { lo, hi, n, log } => spaced(lo, hi, n, log).into_iter().map(Point::new1).collect(),
        }
    }

    /// Index pairs of grid neighbours: consecutive along the inner index and
    /// along the outer index.
    pub fn neighbor_pairs(&self) -> Vec<(usize, usize)> {
        let (outer, inner) = match *self {
            GridSpec::Cartesian { n, .. } => (n, n),
            GridSpec::Polar { n_radial, n_angular, .. } => (n_radial, n_angular),
            GridSpec::Line { n, .. } => (1, n),
        };
        let mut pairs = Vec::new();
        for i in 0..outer {
            for j in 0..inner {
                let k = i * inner + j;
                if j + 1 < inner {
                    pairs.push((k, k + 1));
                }
                if i + 1 < outer {
                    pairs.push((k, k + inner));
                }
            }
        }
        pairs
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GridSpec::Cartesian { lo, hi, n } => write!(
                f,
                "cartesian(xmin={},xmax={},n={n},ymin={},ymax={})",
                fmt_number(lo[0]),
                fmt_number(hi[0]),
                fmt_number(lo[1]),
                fmt_number(hi[1])
            ),
            GridSpec::Polar { r_min, r_max, n_radial, n_angular, log } => write!(
                f,
                "polar(r_min={},r_max={},n_radial={n_radial},n_angular={n_angular},log={log})",
                fmt_number(r_min),
                fmt_number(r_max)
            ),
            GridSpec::Line { lo, hi, n, log } => {
                write!(f, "line(lo={},hi={},n={n},log={log})", fmt_number(lo), fmt_number(hi))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_grid;

    #[test]
    fn line_three_points() {
        let pts = GridSpec::Line { lo: 0.0, hi: 1.0, n: 3, log: false }.enumerate().unwrap();
        let xs: Vec<f64> = pts.iter().map(|p| p.x1()).collect();
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);
        assert!(pts.iter().all(|p| p.dim() == Dim::One));
    }

    #[test]
    fn cartesian_corners() {
        let pts = GridSpec::Cartesian { lo: [-1.0, -1.0], hi: [1.0, 1.0], n: 2 }.enumerate().unwrap();
        let cs: Vec<[f64; 2]> = pts.iter().map(|p| p.coords()).collect();
        assert_eq!(cs, vec![[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]]);
    }

    #[test]
    fn polar_log_radii_and_angles() {
        let g = GridSpec::Polar { r_min: 1.0, r_max: 4.0, n_radial: 2, n_angular: 4, log: true };
        let pts = g.enumerate().unwrap();
        assert_eq!(pts.len(), 8);
        for (i, p) in pts.iter().enumerate() {
            let r = if i < 4 { 1.0 } else { 4.0 };
            assert!((p.norm() - r).abs() < 1e-14);
            let angle = p.x2().atan2(p.x1()).rem_euclid(TAU);
            let expect = TAU * (i % 4) as f64 / 4.0;
            assert!((angle - expect).abs() < 1e-12 || (angle - expect).abs() > TAU - 1e-12);
        }
    }

    #[test]
    fn log_line_hits_endpoints() {
        let pts = GridSpec::Line { lo: 1e-3, hi: 1e8, n: 1000, log: true }.enumerate().unwrap();
        assert_eq!(pts[0].x1(), 1e-3);
        assert_eq!(pts[999].x1(), 1e8);
        assert!(pts.windows(2).all(|w| w[0].x1() < w[1].x1()));
    }

    #[test]
    fn display_reparses() {
        for g in [
            GridSpec::Line { lo: 0.5, hi: 1e8, n: 7, log: true },
            GridSpec::Polar { r_min: 1e-3, r_max: 1e4, n_radial: 3, n_angular: 5, log: true },
            GridSpec::Cartesian { lo: [-1.0, -2.0], hi: [1.0, 3.0], n: 4 },
        ] {
            assert_eq!(parse_grid(&g.to_string()).unwrap(), g);
        }
    }

    #[test]
    fn neighbours() {
        let g = GridSpec::Cartesian { lo: [0.0, 0.0], hi: [1.0, 1.0], n: 2 };
        assert_eq!(g.neighbor_pairs(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }
}
