use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supermedian::{big_psi, circle_mean, i_integral, psi, psi_prime, Dim, FieldSpec, InfinityPolicy, Point, QuadConfig};

/// `I(α) = (1/2π) ∫ |c + e^{iθ}|^{−α} dθ` by plain Monte Carlo.
#[test]
fn i_integral_matches_monte_carlo() {
    let (alpha, c) = (1.0, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = 10_000_000usize;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let v = (c * c + 2.0 * c * t.cos() + 1.0).powf(-alpha / 2.0);
        s += v;
        s2 += v * v;
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    let exact = i_integral(alpha, c, &QuadConfig::default()).unwrap();
    assert!((exact - mean).abs() < 5.0 * se, "I = {exact}, MC = {mean} ± {se}");
    // complete elliptic integral value, independently: (2/π) K(k)/(c+1) with k² = 4c/(c+1)²
    assert!((exact - 0.768_046_739_358_455_3).abs() < 1e-12);
}

#[test]
fn strip_mean_matches_arc_length() {
    let cfg = QuadConfig::default();
    for (t, a, rho) in [(0.5, 0.2, 3.0), (10.0, 1.0, 40.0), (100.0, 0.25, 500.0), (3.0, 2.0, 0.5)] {
        let f = FieldSpec::parse(&format!("indicator_strip(a={a})"), Dim::Two).unwrap();
        let m = circle_mean(&f, Point::new2(t, 0.0).unwrap(), rho, &cfg, InfinityPolicy::default()).unwrap();
        let lo = ((-a - t) / rho).clamp(-1.0, 1.0);
        let hi = ((a - t) / rho).clamp(-1.0, 1.0);
        let arc = (lo.acos() - hi.acos()) / std::f64::consts::PI;
        assert!((m.value - arc).abs() < 1e-12, "t={t}: {} vs {arc}", m.value);
    }
}

proptest! {
    #[test]
    fn psi_prime_is_the_derivative(t in 1.05..50.0f64) {
        let h = 1e-6 * t;
        let d = (psi(t + h).unwrap() - psi(t - h).unwrap()) / (2.0 * h);
        prop_assert!((d - psi_prime(t).unwrap()).abs() <= 1e-6 * (1.0 + d.abs()));
        prop_assert!((psi_prime(t).unwrap() - ((t * t - 1.0).ln())).abs() <= 1e-12 * t);
    }

    #[test]
    fn big_psi_is_convex(c in 1.2..20.0f64, b in 0.6..3.0f64, h in 1e-3..0.5f64) {
        let (l, m, r) = (big_psi(b - h, c).unwrap(), big_psi(b, c).unwrap(), big_psi(b + h, c).unwrap());
        prop_assert!(l + r - 2.0 * m >= -1e-12 * (l.abs() + r.abs() + 1.0));
    }

    #[test]
    fn big_psi_vanishes_at_one(c in 1.2..20.0f64) {
        prop_assert!(big_psi(1.0, c).unwrap().abs() <= 1e-12 * c);
        prop_assert!(big_psi(0.0, c).is_err());
    }
}
