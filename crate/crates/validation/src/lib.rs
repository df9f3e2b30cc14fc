//! Reference values computed independently with 50-digit arithmetic
//! (mpmath quadrature and root finding), used as oracles by the acceptance
//! checks. Nothing here is derived from the library under test.

/// Zero of `ψ(t) = (t+1)ln(t+1) + (t−1)ln(t−1) − 2t`.
pub const C0: f64 = 2.504_295_650_391_634_4;

/// Largest zero of `M ln(x−M) + c₀ x ln((x−M)/x) − 1` for `M = 1`.
pub const TILDE_M_UNIT: f64 = 35.476_182_280_251_48;

/// `sup{α : Ψ(1−α) < 0}` for `c = 3`.
pub const ALPHA_STAR_1D_C3: f64 = 0.238_342_156_785_519_13;

/// `sup{α : I(α) < 1}` for `c = 1.5`.
pub const ALPHA_ZERO_2D_C1_5: f64 = 2.815_711_656_274_982;

/// `I(1)` for `c = 1.5`.
pub const I_ONE_C1_5: f64 = 0.768_046_739_358_455_3;

/// One row of the median-radius table for `min{1, |x₁|⁻¹}` at `(t, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianRadiusRow {
    pub t: f64,
    pub rho_star: f64,
    /// `rho_star / (t ln t)`.
    pub ratio: f64,
}

/// The golden median-radius table (`golden/x1inv_median_radius.csv`).
pub fn median_radius_table() -> Vec<MedianRadiusRow> {
    include_str!("../golden/x1inv_median_radius.csv")
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.trim().parse().expect("numeric golden value")).collect();
            MedianRadiusRow { t: v[0], rho_star: v[1], ratio: v[2] }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_consistent() {
        let rows = median_radius_table();
        assert_eq!(rows.len(), 3);
        for r in rows {
            assert!((r.rho_star / (r.t * r.t.ln()) - r.ratio).abs() < 1e-9);
        }
    }
}
