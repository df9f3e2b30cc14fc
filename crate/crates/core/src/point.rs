use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Ambient dimension of a problem: the real line or the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Dim {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_usize(d: usize) -> Result<Dim> {
        match d {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            _ => Err(Error::InvalidInput(format!("dimension must be 1 or 2, got {d}"))),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A point of ℝ¹ or ℝ².
///
/// One-dimensional points are stored with a zero second coordinate so that
/// every evaluator can work on `[f64; 2]` without branching on the dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 2],
    dim: Dim,
}

impl Point {
    pub fn new1(x: f64) -> Result<Point> {
        check_finite(&[x])?;
        Ok(Point { coords: [x, 0.0], dim: Dim::One })
    }

    pub fn new2(x1: f64, x2: f64) -> Result<Point> {
        check_finite(&[x1, x2])?;
        Ok(Point { coords: [x1, x2], dim: Dim::Two })
    }

    pub(crate) fn from_raw(coords: [f64; 2], dim: Dim) -> Result<Point> {
        match dim {
            Dim::One => Point::new1(coords[0]),
            Dim::Two => Point::new2(coords[0], coords[1]),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coords(&self) -> [f64; 2] {
        self.coords
    }

    pub fn x1(&self) -> f64 {
        self.coords[0]
    }

    pub fn x2(&self) -> f64 {
        self.coords[1]
    }

    pub fn norm(&self) -> f64 {
        self.coords[0].hypot(self.coords[1])
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.coords[0] - other.coords[0]).hypot(self.coords[1] - other.coords[1])
    }

    /// Translate by `offset` (only the first `d` offset components are used).
    pub fn translated(&self, offset: [f64; 2]) -> Result<Point> {
        let shift = match self.dim {
            Dim::One => [offset[0], 0.0],
            Dim::Two => offset,
        };
        Point::from_raw([self.coords[0] + shift[0], self.coords[1] + shift[1]], self.dim)
    }
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("point coordinates must be finite, got {xs:?}")))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            Dim::One => write!(f, "({})", self.coords[0]),
            Dim::Two => write!(f, "({}, {})", self.coords[0], self.coords[1]),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim.get();
        let mut seq = serializer.serialize_seq(Some(n))?;
        for c in &self.coords[..n] {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}
