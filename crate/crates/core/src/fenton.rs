//! Propagation sequence on the unit circle:
//! `α₀ = r(0)`, `αₙ(u) = αₙ₋₁(u) + r(αₙ₋₁(u)·u)` for `u ∈ S`.
//!
//! The recurrence is pointwise in the angle, so the discretization only
//! decides which directions are observed.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::RadiusSpec;
use crate::point::Dim;

pub const DEFAULT_ANGLES: usize = 720;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleProfile {
    pub iteration: usize,
    pub angles: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl CircleProfile {
    pub fn min_alpha(&self) -> f64 {
        self.alphas.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FentonTrace {
    /// First iteration whose profile exceeds the target everywhere, or
    /// `max_iter` when that never happened.
    pub n_stop: usize,
    pub cleared: bool,
    pub target: f64,
    pub n_angles: usize,
    pub profiles: Vec<CircleProfile>,
}

fn check_radius(radius: &RadiusSpec) -> Result<()> {
    if radius.dim() != Dim::Two {
        return Err(Error::DimensionMismatch { expected: 2, found: radius.dim().get() });
    }
    Ok(())
}

pub fn fenton_init(radius: &RadiusSpec, n_angles: usize) -> Result<CircleProfile> {
    check_radius(radius)?;
    if n_angles < 4 {
        return Err(Error::InvalidInput(format!("n_angles must be ≥ 4, got {n_angles}")));
    }
    let r0 = radius.eval_raw([0.0, 0.0])?;
    Ok(CircleProfile {
        iteration: 0,
        angles: (0..n_angles).map(|j| TAU * j as f64 / n_angles as f64).collect(),
        alphas: vec![r0; n_angles],
    })
}

pub fn fenton_step(profile: &CircleProfile, radius: &RadiusSpec) -> Result<CircleProfile> {
    check_radius(radius)?;
    let alphas = profile
        .angles
        .par_iter()
        .zip(profile.alphas.par_iter())
        .map(|(&t, &a)| {
            if a.is_infinite() {
                return Ok(a);
            }
            let (s, c) = t.sin_cos();
            Ok(a + radius.eval_raw([a * c, a * s])?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CircleProfile { iteration: profile.iteration + 1, angles: profile.angles.clone(), alphas })
}

/// Iterate until `min_u αₙ(u) > target` or `max_iter` steps were taken.
pub fn fenton_trace(radius: &RadiusSpec, target: f64, n_angles: usize, max_iter: usize) -> Result<FentonTrace> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::InvalidInput(format!("target must be finite and > 0, got {target}")));
    }
    let mut profile = fenton_init(radius, n_angles)?;
    let mut profiles = Vec::new();
    let mut cleared = profile.min_alpha() > target;
    while !cleared && profile.iteration < max_iter {
        let next = fenton_step(&profile, radius)?;
        profiles.push(std::mem::replace(&mut profile, next));
        cleared = profile.min_alpha() > target;
    }
    let n_stop = profile.iteration;
    profiles.push(profile);
    Ok(FentonTrace { n_stop, cleared, target, n_angles, profiles })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RadiusSpec {
        RadiusSpec::parse(s, Dim::Two).unwrap()
    }

    #[test]
    fn init_values() {
        assert!(fenton_init(&r("constant(v=1)"), 8).unwrap().alphas.iter().all(|&a| a == 1.0));
        assert!(fenton_init(&r("contract_example"), 8).unwrap().alphas.iter().all(|&a| a == 3.0));
        assert!(fenton_init(&r("max_cabs_M(c=2,M=5)"), 8).unwrap().alphas.iter().all(|&a| a == 5.0));
        assert!(fenton_init(&r("constant(v=1)"), 3).is_err());
    }

    #[test]
    fn constant_radius_counts_up() {
        let t = fenton_trace(&r("constant(v=1)"), 10.0, 8, 100).unwrap();
        assert!(t.cleared);
        assert_eq!(t.n_stop, 10);
        for p in &t.profiles {
            assert!(p.alphas.iter().all(|&a| a == (p.iteration + 1) as f64));
        }
    }

    #[test]
    fn max_iter_is_respected() {
        let t = fenton_trace(&r("constant(v=1)"), 10.0, 8, 3).unwrap();
        assert!(!t.cleared);
        assert_eq!(t.n_stop, 3);
        assert_eq!(t.profiles.len(), 4);
    }

    #[test]
    fn already_above_target() {
        let t = fenton_trace(&r("constant(v=5)"), 1.0, 8, 3).unwrap();
        assert!(t.cleared && t.n_stop == 0 && t.profiles.len() == 1);
    }
}
