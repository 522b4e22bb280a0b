//! Differential entropies of gridded densities and of Gaussian distributions,
//! Rényi order bookkeeping and entropy powers. Everything is in nats.

use std::f64::consts::{E, PI};

use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::harness::{Diagnostics, Relation, VerificationReport};
use crate::lct::GridSpec;
use crate::linalg;
use crate::symplectic::{commutator_matrix, CommutatorMatrix, SymplecticMatrix};

/// Orders closer than this to 1 are evaluated as Shannon entropy.
pub const SHANNON_CROSSOVER: f64 = 1e-6;
/// Entries below `-NEGATIVE_DENSITY_TOL` are rejected; smaller negatives are
/// treated as rounding noise.
pub const NEGATIVE_DENSITY_TOL: f64 = 1e-12;
const NORMALIZATION_WARN: f64 = 1e-6;

fn checked_density(density: &[f64], grid: &GridSpec) -> Result<()> {
    grid.validate()?;
    if density.len() != grid.len() {
        return Err(Error::Dimension(format!("density has {} samples, grid has {}", density.len(), grid.len())));
    }
    let lowest = density.iter().copied().fold(f64::INFINITY, f64::min);
    if lowest < -NEGATIVE_DENSITY_TOL || density.iter().any(|p| p.is_nan()) {
        return Err(Error::NegativeDensity(lowest));
    }
    let mass: f64 = density.iter().map(|p| p.max(0.0)).sum::<f64>() * grid.cell_volume();
    if (mass - 1.0).abs() > NORMALIZATION_WARN {
        warn!("density integrates to {mass:.9}, entropies assume normalization");
    }
    Ok(())
}

/// `-Σ p ln p · ΔV` with `0 ln 0 = 0`.
pub fn shannon_entropy(density: &[f64], grid: &GridSpec) -> Result<f64> {
    checked_density(density, grid)?;
    let sum: f64 = density.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    Ok(sum * grid.cell_volume())
}

/// `ln(Σ p^α ΔV) / (1 - α)`; orders within [`SHANNON_CROSSOVER`] of 1 fall
/// back to [`shannon_entropy`].
pub fn renyi_entropy(density: &[f64], grid: &GridSpec, alpha: f64) -> Result<f64> {
    validate_order(alpha)?;
    if (alpha - 1.0).abs() < SHANNON_CROSSOVER {
        return shannon_entropy(density, grid);
    }
    checked_density(density, grid)?;
    // Factor out the peak so that large orders do not underflow.
    let peak = density.iter().copied().fold(0.0_f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::Invalid("density is identically zero".into()));
    }
    let sum: f64 = density.iter().filter(|&&p| p > 0.0).map(|&p| (p / peak).powf(alpha)).sum();
    let ln_integral = alpha * peak.ln() + (sum * grid.cell_volume()).ln();
    Ok(ln_integral / (1.0 - alpha))
}

fn validate_order(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidOrder(format!("order must be positive and finite, got {alpha}")));
    }
    Ok(())
}

/// `ln α / (2(α - 1))`, continuous through `α = 1` where it equals 1/2.
pub fn renyi_order_term(alpha: f64) -> f64 {
    let t = alpha - 1.0;
    if t == 0.0 {
        0.5
    } else {
        t.ln_1p() / (2.0 * t)
    }
}

/// Rényi orders with `1/α + 1/β = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct RenyiOrderPair {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawPair {
    alpha: f64,
    beta: Option<f64>,
}

impl TryFrom<RawPair> for RenyiOrderPair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        match raw.beta {
            Some(beta) => RenyiOrderPair::new(raw.alpha, beta),
            None => RenyiOrderPair::conjugate(raw.alpha),
        }
    }
}

impl RenyiOrderPair {
    pub const CONJUGACY_TOL: f64 = 1e-12;

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        validate_order(alpha)?;
        validate_order(beta)?;
        let sum = 1.0 / alpha + 1.0 / beta;
        if (sum - 2.0).abs() > Self::CONJUGACY_TOL {
            return Err(Error::InvalidOrder(format!("1/alpha + 1/beta = {sum}, expected 2")));
        }
        Ok(RenyiOrderPair { alpha, beta })
    }

    /// Pairs `α` with `β = α / (2α - 1)`; needs `α > 1/2`.
    pub fn conjugate(alpha: f64) -> Result<Self> {
        validate_order(alpha)?;
        if alpha <= 0.5 {
            return Err(Error::InvalidOrder(format!("alpha = {alpha} has no positive conjugate order")));
        }
        let beta = alpha / (2.0 * alpha - 1.0);
        Ok(RenyiOrderPair { alpha, beta })
    }

    pub fn shannon() -> Self {
        RenyiOrderPair { alpha: 1.0, beta: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `n ln α/(2(α-1)) + n ln β/(2(β-1)) + n ln π + ln|det K|`.
pub fn renyi_bound_of(k: &CommutatorMatrix, pair: RenyiOrderPair) -> ExtReal {
    let n = k.n() as f64;
    match k.ln_abs_det() {
        ExtReal::Finite(ln_det) => {
            ExtReal::Finite(n * renyi_order_term(pair.alpha) + n * renyi_order_term(pair.beta) + n * PI.ln() + ln_det)
        }
        other => other,
    }
}

pub fn renyi_bound(a: &SymplecticMatrix, b: &SymplecticMatrix, pair: RenyiOrderPair) -> Result<ExtReal> {
    Ok(renyi_bound_of(&commutator_matrix(a, b)?, pair))
}

/// `exp(2h/n) / (2πe)`.
pub fn entropy_power(h: f64, n: usize) -> f64 {
    (2.0 * h / n as f64).exp() / (2.0 * PI * E)
}

/// `(1/2) ln((2πe)^n det Σ)`.
pub fn gaussian_shannon_entropy(cov: &DMatrix<f64>) -> Result<f64> {
    let n = linalg::require_square(cov, "covariance")?;
    let det = linalg::spd_determinant(cov, "covariance")?;
    Ok(0.5 * (n as f64 * (2.0 * PI * E).ln() + det.ln()))
}

/// `(1/2) ln((2π)^n det Σ) + n ln α/(2(α-1))`.
pub fn gaussian_renyi_entropy(cov: &DMatrix<f64>, alpha: f64) -> Result<f64> {
    validate_order(alpha)?;
    let n = linalg::require_square(cov, "covariance")?;
    let det = linalg::spd_determinant(cov, "covariance")?;
    Ok(0.5 * (n as f64 * (2.0 * PI).ln() + det.ln()) + n as f64 * renyi_order_term(alpha))
}

/// Mean and covariance of a gridded density, by Riemann sums.
pub fn density_moments(density: &[f64], grid: &GridSpec) -> Result<(DVector<f64>, DMatrix<f64>)> {
    checked_density(density, grid)?;
    let n = grid.n;
    let dv = grid.cell_volume();
    let mut x = vec![0.0; n];
    let mut mass = 0.0;
    let mut mean = DVector::zeros(n);
    for (k, &p) in density.iter().enumerate() {
        grid.point(k, &mut x);
        mass += p * dv;
        for i in 0..n {
            mean[i] += p * x[i] * dv;
        }
    }
    mean /= mass;
    let mut cov = DMatrix::zeros(n, n);
    for (k, &p) in density.iter().enumerate() {
        grid.point(k, &mut x);
        for i in 0..n {
            for j in 0..n {
                cov[(i, j)] += p * (x[i] - mean[i]) * (x[j] - mean[j]) * dv;
            }
        }
    }
    Ok((mean, cov / mass))
}

/// Compares `sqrt(det γ_A det γ_B)` with `|det K| / 2^n`.
pub fn covariance_bound_check(
    gamma_a: &DMatrix<f64>,
    gamma_b: &DMatrix<f64>,
    k: &CommutatorMatrix,
) -> Result<VerificationReport> {
    let n = linalg::require_square(gamma_a, "gamma_A")?;
    if linalg::require_square(gamma_b, "gamma_B")? != n || k.n() != n {
        return Err(Error::Dimension("covariances and commutator matrix differ in size".into()));
    }
    linalg::require_symmetric(gamma_a, 1e-10)?;
    linalg::require_symmetric(gamma_b, 1e-10)?;
    let da = linalg::spd_determinant(gamma_a, "gamma_A")?;
    let db = linalg::spd_determinant(gamma_b, "gamma_B")?;
    let lhs = (da * db).sqrt();
    let bound =
        if k.is_degenerate() { ExtReal::NegInfinity } else { ExtReal::Finite(k.det_abs() / 2f64.powi(n as i32)) };
    let diagnostics = Diagnostics { det_k: Some(k.det_abs()), ..Default::default() };
    Ok(VerificationReport::new(Relation::Theorem3, n, n, lhs, bound, false, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{fourier_form, identity};

    fn gaussian_density(grid: &GridSpec, var: f64) -> Vec<f64> {
        grid.axis_coords(0).iter().map(|x| (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()).collect()
    }

    #[test]
    fn uniform_density_has_zero_entropy() {
        let grid = GridSpec::centered(vec![100], vec![0.01]).unwrap();
        let rho = vec![1.0; 100];
        assert!(shannon_entropy(&rho, &grid).unwrap().abs() < 1e-12);
        for a in [0.3, 0.9, 2.0, 7.0] {
            assert!(renyi_entropy(&rho, &grid, a).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_estimates_match_closed_forms() {
        let grid = GridSpec::symmetric(1, 512, 12.0).unwrap();
        let rho = gaussian_density(&grid, 0.5);
        let h = shannon_entropy(&rho, &grid).unwrap();
        assert!((h - 1.0723649429247).abs() < 1e-9);
        let h2 = renyi_entropy(&rho, &grid, 2.0).unwrap();
        assert!((h2 - 0.9189385332046727).abs() < 1e-9);
        let cov = DMatrix::from_element(1, 1, 0.5);
        assert!((gaussian_renyi_entropy(&cov, 2.0).unwrap() - h2).abs() < 1e-9);
        assert!((gaussian_shannon_entropy(&cov).unwrap() - h).abs() < 1e-9);
    }

    #[test]
    fn renyi_limit_and_monotonicity() {
        let grid = GridSpec::symmetric(1, 512, 12.0).unwrap();
        let rho = gaussian_density(&grid, 0.8);
        let h = shannon_entropy(&rho, &grid).unwrap();
        for a in [1.0 + 1e-7, 1.0 - 1e-7] {
            assert!((renyi_entropy(&rho, &grid, a).unwrap() - h).abs() < 1e-5);
        }
        // Just outside the crossover the direct sum takes over without a jump.
        for a in [1.0 + 2.0 * SHANNON_CROSSOVER, 1.0 - 2.0 * SHANNON_CROSSOVER] {
            assert!((renyi_entropy(&rho, &grid, a).unwrap() - h).abs() < 1e-5);
        }
        let orders = [0.5, 0.9, 1.1, 2.0, 5.0];
        let vals: Vec<f64> = orders.iter().map(|&a| renyi_entropy(&rho, &grid, a).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn bad_inputs() {
        let grid = GridSpec::centered(vec![4], vec![0.5]).unwrap();
        assert!(matches!(shannon_entropy(&[0.5, -0.1, 0.5, 1.1], &grid), Err(Error::NegativeDensity(_))));
        assert!(shannon_entropy(&[0.5, -1e-14, 0.5, 1.0], &grid).is_ok());
        assert!(matches!(renyi_entropy(&[0.5; 4], &grid, 0.0), Err(Error::InvalidOrder(_))));
        assert!(shannon_entropy(&[0.5; 3], &grid).is_err());
    }

    #[test]
    fn order_pairs() {
        let p = RenyiOrderPair::conjugate(2.0).unwrap();
        assert!((p.beta() - 2.0 / 3.0).abs() < 1e-15);
        assert!(RenyiOrderPair::new(3.0, 0.6).is_ok());
        assert!(RenyiOrderPair::new(2.0, 0.7).is_err());
        assert!(RenyiOrderPair::conjugate(0.5).is_err());
        let parsed: RenyiOrderPair = serde_json::from_str(r#"{"alpha": 3.0}"#).unwrap();
        assert!((parsed.beta() - 0.6).abs() < 1e-15);
        assert!(serde_json::from_str::<RenyiOrderPair>(r#"{"alpha": 3.0, "beta": 3.0}"#).is_err());
    }

    #[test]
    fn order_term_is_smooth_at_one() {
        assert_eq!(renyi_order_term(1.0), 0.5);
        assert!((renyi_order_term(1.0 + 1e-12) - 0.5).abs() < 1e-12);
        assert!((renyi_order_term(2.0) - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn renyi_bounds() {
        let (a, b) = (identity(1), fourier_form(1));
        let shannon = renyi_bound(&a, &b, RenyiOrderPair::shannon()).unwrap();
        assert!((shannon.to_f64() - (PI * E).ln()).abs() < 1e-14);
        let two = renyi_bound(&a, &b, RenyiOrderPair::conjugate(2.0).unwrap()).unwrap();
        let expected = PI.ln() + 0.5 * 2f64.ln() + 1.5 * 1.5f64.ln();
        assert!((two.to_f64() - expected).abs() < 1e-14);
        assert!((two.to_f64() - 2.099501).abs() < 1e-6);
        assert!(renyi_bound(&a, &a, RenyiOrderPair::conjugate(2.0).unwrap()).unwrap().is_neg_infinity());
    }

    #[test]
    fn entropy_powers() {
        for n in 1..4 {
            let v = 0.37;
            let h = 0.5 * n as f64 * (2.0 * PI * E * v).ln();
            assert!((entropy_power(h, n) - v).abs() < 1e-15);
        }
        assert!((entropy_power(0.5 * (PI * E).ln(), 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn robertson_saturation_for_vacuum() {
        let k = commutator_matrix(&identity(1), &fourier_form(1)).unwrap();
        let half = DMatrix::from_element(1, 1, 0.5);
        let r = covariance_bound_check(&half, &half, &k).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-15);
        assert!(r.slack.to_f64().abs() < 1e-15);
        let deg = commutator_matrix(&identity(1), &identity(1)).unwrap();
        let r = covariance_bound_check(&half, &half, &deg).unwrap();
        assert_eq!(r.status, crate::harness::Status::Vacuous);
    }

    #[test]
    fn moments_of_shifted_gaussian() {
        let grid = GridSpec::symmetric(1, 400, 10.0).unwrap();
        let rho: Vec<f64> = grid
            .axis_coords(0)
            .iter()
            .map(|x| (-(x - 1.0).powi(2) / (2.0 * 0.3)).exp() / (2.0 * PI * 0.3).sqrt())
            .collect();
        let (m, c) = density_moments(&rho, &grid).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-10);
        assert!((c[(0, 0)] - 0.3).abs() < 1e-10);
    }
}
