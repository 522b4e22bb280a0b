//! Test states: Gaussian states described by their first two moments, and a
//! few non-Gaussian wavefunctions sampled on a grid.
//!
//! Covariances follow `γ_ij = <{r_i, r_j}>/2 - <r_i><r_j>` with `[x, p] = i`,
//! so the vacuum has `γ = 1/2`.

use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::gaussian_shannon_entropy;
use crate::error::{Error, Result};
use crate::lct::{check_edges, GridSpec, GriddedWaveFunction};
use crate::linalg::{self, symplectic_form};
use crate::symplectic::{random_symplectic, squeezer, SymplecticMatrix};

/// Relative tolerance on `det γ = 4^{-N}` for purity.
pub const PURITY_TOL: f64 = 1e-8;
/// Relative tolerance on the smallest eigenvalue of `γ + iJ/2`.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GaussianStateFile", into = "GaussianStateFile")]
pub struct GaussianState {
    modes: usize,
    mean: DVector<f64>,
    gamma: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct GaussianStateFile {
    #[serde(rename = "N")]
    modes: usize,
    mean: Vec<f64>,
    gamma: Vec<f64>,
}

impl TryFrom<GaussianStateFile> for GaussianState {
    type Error = Error;

    fn try_from(f: GaussianStateFile) -> Result<Self> {
        let dim = 2 * f.modes;
        let gamma = linalg::from_row_major(dim, dim, &f.gamma)?;
        GaussianState::new(DVector::from_vec(f.mean), gamma)
    }
}

impl From<GaussianState> for GaussianStateFile {
    fn from(s: GaussianState) -> Self {
        GaussianStateFile {
            modes: s.modes,
            mean: s.mean.iter().copied().collect(),
            gamma: linalg::to_row_major(&s.gamma),
        }
    }
}

impl GaussianState {
    /// Validates shape, symmetry, positivity and `γ + iJ/2 ⪰ 0`.
    pub fn new(mean: DVector<f64>, gamma: DMatrix<f64>) -> Result<Self> {
        let dim = linalg::require_square(&gamma, "gamma")?;
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::Dimension(format!("gamma must be 2N x 2N with N >= 1, got {dim} x {dim}")));
        }
        if mean.len() != dim {
            return Err(Error::Dimension(format!("mean has length {}, expected {dim}", mean.len())));
        }
        linalg::require_symmetric(&gamma, 1e-10)?;
        let gamma = linalg::symmetrize(&gamma);
        linalg::spd_determinant(&gamma, "gamma")?;
        let state = GaussianState { modes: dim / 2, mean, gamma };
        let lowest = state.admissibility_margin();
        if lowest < -ADMISSIBILITY_TOL * linalg::max_abs(&state.gamma).max(1.0) {
            return Err(Error::NotPositiveDefinite(format!(
                "gamma + iJ/2 has eigenvalue {lowest:e}; the state violates the uncertainty principle"
            )));
        }
        Ok(state)
    }

    pub fn vacuum(modes: usize) -> Self {
        let dim = 2 * modes.max(1);
        GaussianState { modes: modes.max(1), mean: DVector::zeros(dim), gamma: DMatrix::identity(dim, dim) * 0.5 }
    }

    /// Vacuum squeezed by `diag(e^{-s}, e^{s})` per mode.
    pub fn squeezed(s: &[f64]) -> Self {
        GaussianState::vacuum(s.len()).evolve_unchecked(&squeezer(s))
    }

    /// `S (1/2) S^T` for a seeded random symplectic `S`; always pure.
    pub fn correlated_gaussian(modes: usize, seed: u64) -> Self {
        GaussianState::vacuum(modes).evolve_unchecked(&random_symplectic(modes.max(1), seed))
    }

    pub fn with_mean(mut self, mean: DVector<f64>) -> Result<Self> {
        if mean.len() != 2 * self.modes {
            return Err(Error::Dimension(format!("mean has length {}, expected {}", mean.len(), 2 * self.modes)));
        }
        self.mean = mean;
        Ok(self)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// State after the Gaussian unitary with symplectic matrix `s`.
    pub fn evolve(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.n() != self.modes {
            return Err(Error::Dimension(format!("state has {} modes, S acts on {}", self.modes, s.n())));
        }
        Ok(self.evolve_unchecked(s))
    }

    fn evolve_unchecked(&self, s: &SymplecticMatrix) -> Self {
        let m = s.matrix();
        GaussianState {
            modes: self.modes,
            mean: m * &self.mean,
            gamma: linalg::symmetrize(&(m * &self.gamma * m.transpose())),
        }
    }

    /// Smallest eigenvalue of the Hermitian matrix `γ + iJ/2`, through its
    /// real embedding `[[γ, -J/2], [J/2, γ]]`.
    pub fn admissibility_margin(&self) -> f64 {
        let dim = 2 * self.modes;
        let half_j = symplectic_form(self.modes) * 0.5;
        let mut big = DMatrix::zeros(2 * dim, 2 * dim);
        big.view_mut((0, 0), (dim, dim)).copy_from(&self.gamma);
        big.view_mut((dim, dim), (dim, dim)).copy_from(&self.gamma);
        big.view_mut((0, dim), (dim, dim)).copy_from(&(-&half_j));
        big.view_mut((dim, 0), (dim, dim)).copy_from(&half_j);
        big.symmetric_eigenvalues().min()
    }

    pub fn det_gamma(&self) -> f64 {
        self.gamma.determinant()
    }

    pub fn is_pure(&self) -> bool {
        let expected = 0.25_f64.powi(self.modes as i32);
        (self.det_gamma() - expected).abs() <= PURITY_TOL * expected
    }
}

fn top_rows_of(state: &GaussianState, s: &SymplecticMatrix, n: usize) -> Result<DMatrix<f64>> {
    if s.n() != state.modes {
        return Err(Error::Dimension(format!("state has {} modes, S acts on {}", state.modes, s.n())));
    }
    if n == 0 || n > state.modes {
        return Err(Error::Dimension(format!("cannot measure {n} quadratures of {} modes", state.modes)));
    }
    Ok(s.matrix().rows(0, n).into_owned())
}

/// Covariance of the measured quadratures: top-left `n x n` block of `S γ S^T`.
pub fn marginal_covariance(state: &GaussianState, s: &SymplecticMatrix, n: usize) -> Result<DMatrix<f64>> {
    marginal_covariance_rows(state, &top_rows_of(state, s, n)?)
}

/// Covariance `T γ T^T` of the quadratures given by the rows of `T`.
pub fn marginal_covariance_rows(state: &GaussianState, rows: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if rows.ncols() != 2 * state.modes {
        return Err(Error::Dimension(format!(
            "rows have {} columns, state has {} quadratures",
            rows.ncols(),
            2 * state.modes
        )));
    }
    Ok(linalg::symmetrize(&(rows * &state.gamma * rows.transpose())))
}

/// Mean of the measured quadratures.
pub fn marginal_mean(state: &GaussianState, s: &SymplecticMatrix, n: usize) -> Result<DVector<f64>> {
    Ok(top_rows_of(state, s, n)? * &state.mean)
}

/// Shannon entropy of the Gaussian outcome distribution of the first `n`
/// quadratures of `S r`.
pub fn gaussian_measurement_entropy(state: &GaussianState, s: &SymplecticMatrix, n: usize) -> Result<f64> {
    gaussian_shannon_entropy(&marginal_covariance(state, s, n)?)
}

/// Samples `ψ(x) ∝ exp(-(x-μ)^T (V_r + i V_i) (x-μ)/2 + i μ_p·x)` with
/// `V_r = (2 γ_xx)^{-1}` and `V_i = -γ_xx^{-1} γ_xp`.
pub fn gaussian_wavefunction(state: &GaussianState, grid: &GridSpec) -> Result<GriddedWaveFunction> {
    let n = state.modes;
    if n > 2 {
        return Err(Error::Dimension(format!("gridded Gaussian states support N <= 2, got {n}")));
    }
    if grid.n != n {
        return Err(Error::Dimension(format!("grid is {}-dimensional, state has {n} modes", grid.n)));
    }
    if !state.is_pure() {
        return Err(Error::NotPure { det: state.det_gamma(), expected: 0.25_f64.powi(n as i32) });
    }
    let gxx = state.gamma.view((0, 0), (n, n)).into_owned();
    let gxp = state.gamma.view((0, n), (n, n)).into_owned();
    let gxx_inv = linalg::inverse(&gxx, "gamma_xx")?;
    let vr = linalg::symmetrize(&(&gxx_inv * 0.5));
    let vi = linalg::symmetrize(&(-&gxx_inv * gxp));
    let amp = (vr.determinant() / PI.powi(n as i32)).powf(0.25);
    let mu_x: Vec<f64> = (0..n).map(|i| state.mean[i]).collect();
    let mu_p: Vec<f64> = (0..n).map(|i| state.mean[n + i]).collect();

    let wf = GriddedWaveFunction::from_fn(grid.clone(), |x| {
        let mut quad = Complex64::new(0.0, 0.0);
        let mut lin = 0.0;
        for i in 0..n {
            let di = x[i] - mu_x[i];
            lin += mu_p[i] * x[i];
            for j in 0..n {
                let dj = x[j] - mu_x[j];
                quad += Complex64::new(vr[(i, j)], vi[(i, j)]) * (di * dj);
            }
        }
        (Complex64::new(0.0, lin) - quad * 0.5).exp() * amp
    })?;
    let nyquist: Vec<f64> = grid.spacing.iter().map(|h| PI / h).collect();
    for i in 0..n {
        // Momentum spread plus the chirp slope at the grid edge.
        let slope = (0..n).map(|j| vi[(i, j)].abs() * grid.half_extent(j)).sum::<f64>();
        let band = mu_p[i].abs() + 8.0 * state.gamma[(n + i, n + i)].sqrt() + slope;
        if band > nyquist[i] {
            warn!(
                "Gaussian state under-resolved on axis {i}: local frequency {band:.3} exceeds Nyquist {:.3}",
                nyquist[i]
            );
        }
    }
    check_edges(&wf, "Gaussian state");
    Ok(wf)
}

/// Normalized Hermite function `ψ_k` on `x`, by the three-term recurrence.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    let psi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if k == 0 {
        return psi0;
    }
    let mut prev = psi0;
    let mut cur = 2f64.sqrt() * x * psi0;
    for j in 1..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn warn_if_unresolved(grid: &GridSpec, axis: usize, reach: f64, what: &str) {
    let h = grid.spacing[axis];
    if PI / h < reach {
        warn!("{what}: spacing {h:.4} on axis {axis} cannot resolve frequencies up to {reach:.3}");
    }
    if grid.half_extent(axis) < reach {
        warn!("{what}: half extent {:.3} on axis {axis} is below the state's reach {reach:.3}", grid.half_extent(axis));
    }
}

/// Product of Hermite functions, one occupation number per grid axis.
pub fn fock_wavefunction(occupations: &[usize], grid: &GridSpec) -> Result<GriddedWaveFunction> {
    if occupations.len() != grid.n {
        return Err(Error::Dimension(format!(
            "{} occupation numbers for a {}-dimensional grid",
            occupations.len(),
            grid.n
        )));
    }
    for (axis, &k) in occupations.iter().enumerate() {
        // Classical turning point plus a few decay lengths.
        let reach = (2.0 * k as f64 + 1.0).sqrt() + 6.0;
        warn_if_unresolved(grid, axis, reach, "Fock state");
    }
    let wf = GriddedWaveFunction::from_fn(grid.clone(), |x| {
        let v: f64 = occupations.iter().zip(x).map(|(&k, &xi)| hermite_function(k, xi)).product();
        Complex64::new(v, 0.0)
    })?;
    check_edges(&wf, "Fock state");
    Ok(wf)
}

/// Even cat state `(|α> + |-α>)/sqrt(2(1 + e^{-2|α|²}))` on a 1-D grid, with
/// coherent states `ψ_α(x) = π^{-1/4} exp(-(x - √2 Re α)²/2 + i √2 Im α x - i Re α Im α)`.
pub fn cat_wavefunction(amplitude: Complex64, grid: &GridSpec) -> Result<GriddedWaveFunction> {
    if grid.n != 1 {
        return Err(Error::Dimension(format!("cat states are single-mode, grid has {} axes", grid.n)));
    }
    let (ar, ai) = (amplitude.re, amplitude.im);
    let norm = 1.0 / (2.0 * (1.0 + (-2.0 * amplitude.norm_sqr()).exp())).sqrt();
    let coherent = move |sign: f64, x: f64| {
        let (cr, ci) = (sign * ar, sign * ai);
        let d = x - 2f64.sqrt() * cr;
        Complex64::new(-0.5 * d * d, 2f64.sqrt() * ci * x - cr * ci).exp() * PI.powf(-0.25)
    };
    let reach = 2f64.sqrt() * amplitude.norm() + 6.0;
    warn_if_unresolved(grid, 0, reach, "cat state");
    let wf = GriddedWaveFunction::from_fn(grid.clone(), |x| (coherent(1.0, x[0]) + coherent(-1.0, x[0])) * norm)?;
    check_edges(&wf, "cat state");
    Ok(wf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lct::probability_density;
    use crate::symplectic::{fourier_form, identity, rotation};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vacuum_and_squeezed_covariances() {
        let v = GaussianState::vacuum(1);
        assert_eq!(v.gamma(), &DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]));
        assert!(v.is_pure());
        let s = 0.7;
        let sq = GaussianState::squeezed(&[s]);
        assert!(close(sq.gamma()[(0, 0)], (-2.0 * s).exp() / 2.0, 1e-15));
        assert!(close(sq.gamma()[(1, 1)], (2.0 * s).exp() / 2.0, 1e-14));
        assert!(close(sq.det_gamma(), 0.25, 1e-14));
    }

    #[test]
    fn correlated_states_are_admissible_and_pure() {
        for seed in 0..20 {
            for modes in 1..=3 {
                let st = GaussianState::correlated_gaussian(modes, seed);
                let rebuilt = GaussianState::new(st.mean().clone(), st.gamma().clone()).unwrap();
                assert!(rebuilt.is_pure());
                assert!(rebuilt.admissibility_margin() > -1e-10);
            }
        }
    }

    #[test]
    fn sub_vacuum_noise_is_rejected() {
        let gamma = DMatrix::from_diagonal(&DVector::from_vec(vec![0.2, 0.2]));
        assert!(matches!(GaussianState::new(DVector::zeros(2), gamma), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn thermal_state_is_mixed() {
        let gamma = DMatrix::identity(2, 2) * 1.5;
        let st = GaussianState::new(DVector::zeros(2), gamma).unwrap();
        assert!(!st.is_pure());
        let grid = GridSpec::symmetric(1, 64, 8.0).unwrap();
        assert!(matches!(gaussian_wavefunction(&st, &grid), Err(Error::NotPure { .. })));
    }

    #[test]
    fn marginals() {
        let v = GaussianState::vacuum(1);
        for k in 0..8 {
            let c = marginal_covariance(&v, &rotation(0.4 * k as f64), 1).unwrap();
            assert!(close(c[(0, 0)], 0.5, 1e-15));
        }
        let s = 0.3;
        let c = marginal_covariance(&GaussianState::squeezed(&[s]), &rotation(PI / 2.0), 1).unwrap();
        assert!(close(c[(0, 0)], (2.0 * s).exp() / 2.0, 1e-14));
        assert!(marginal_covariance(&v, &identity(2), 1).is_err());
        assert!(marginal_covariance(&GaussianState::vacuum(2), &identity(2), 3).is_err());
    }

    #[test]
    fn measurement_entropies() {
        let v = GaussianState::vacuum(1);
        let h = gaussian_measurement_entropy(&v, &identity(1), 1).unwrap();
        assert!(close(h, 1.0723649429247, 1e-12));
        let hz = gaussian_measurement_entropy(&v, &fourier_form(1), 1).unwrap();
        assert!(close(h + hz, (PI * std::f64::consts::E).ln(), 1e-14));
        let s = 0.45;
        let hs = gaussian_measurement_entropy(&GaussianState::squeezed(&[s]), &identity(1), 1).unwrap();
        assert!(close(h - hs, s, 1e-13));
    }

    #[test]
    fn state_json_roundtrip() {
        let st = GaussianState::correlated_gaussian(2, 5);
        let text = serde_json::to_string(&st).unwrap();
        assert!(text.contains("\"N\":2"));
        let back: GaussianState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, st);
        let bad = r#"{"N":1,"mean":[0,0],"gamma":[0.1,0,0,0.1]}"#;
        assert!(serde_json::from_str::<GaussianState>(bad).is_err());
    }

    #[test]
    fn vacuum_wavefunction_is_ground_state() {
        let grid = GridSpec::symmetric(1, 256, 12.0).unwrap();
        let wf = gaussian_wavefunction(&GaussianState::vacuum(1), &grid).unwrap();
        for (k, a) in wf.amplitudes.iter().enumerate() {
            let x = grid.coord(0, k);
            assert!((a - Complex64::new(hermite_function(0, x), 0.0)).norm() < 1e-15);
        }
    }

    fn moments_1d(wf: &GriddedWaveFunction) -> (f64, f64) {
        let rho = probability_density(wf);
        let h = wf.grid.spacing[0];
        let xs = wf.grid.axis_coords(0);
        let mean: f64 = rho.iter().zip(&xs).map(|(r, x)| r * x * h).sum();
        let var: f64 = rho.iter().zip(&xs).map(|(r, x)| r * (x - mean).powi(2) * h).sum();
        (mean, var)
    }

    #[test]
    fn chirped_state_carries_xp_correlation() {
        // Shear p -> p + 0.8 x, then displace.
        let shear = crate::symplectic::chirp(&DMatrix::from_element(1, 1, 0.8)).unwrap();
        let st = GaussianState::squeezed(&[0.3])
            .evolve(&shear)
            .unwrap()
            .with_mean(DVector::from_vec(vec![0.5, -1.0]))
            .unwrap();
        let grid = GridSpec::symmetric(1, 4096, 14.0).unwrap();
        let wf = gaussian_wavefunction(&st, &grid).unwrap();
        let (m, v) = moments_1d(&wf);
        assert!(close(m, 0.5, 1e-9));
        assert!(close(v, st.gamma()[(0, 0)], 1e-9));
        // Symmetrized <x p> from the phase gradient: Im(ψ* ψ') x.
        let h = grid.spacing[0];
        let a = &wf.amplitudes;
        let mut xp = 0.0;
        let mut pm = 0.0;
        for k in 1..a.len() - 1 {
            let x = grid.coord(0, k);
            let d = (a[k + 1] - a[k - 1]) / (2.0 * h);
            let j = (a[k].conj() * d).im;
            pm += j * h;
            xp += (x - m) * j * h;
        }
        assert!(close(pm, -1.0, 1e-4));
        assert!(close(xp, st.gamma()[(0, 1)], 1e-4));
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let grid = GridSpec::symmetric(1, 1024, 16.0).unwrap();
        let h = grid.spacing[0];
        let xs = grid.axis_coords(0);
        for k in 0..=10 {
            for l in 0..=10 {
                let s: f64 = xs.iter().map(|&x| hermite_function(k, x) * hermite_function(l, x) * h).sum();
                let expect = if k == l { 1.0 } else { 0.0 };
                assert!(close(s, expect, 1e-10), "({k},{l}) -> {s}");
            }
        }
        assert_eq!(hermite_function(1, 0.0), 0.0);
        assert!(hermite_function(40, 3.0).is_finite());
    }

    #[test]
    fn fock_one_is_odd() {
        let grid = GridSpec::symmetric(1, 257, 10.0).unwrap();
        let wf = fock_wavefunction(&[1], &grid).unwrap();
        let m = wf.amplitudes.len();
        assert_eq!(wf.amplitudes[m / 2].re, 0.0);
        for k in 0..m {
            assert!((wf.amplitudes[k] + wf.amplitudes[m - 1 - k]).norm() < 1e-15);
        }
        assert!(close(wf.norm_sqr(), 1.0, 1e-12));
    }

    #[test]
    fn cat_states() {
        let grid = GridSpec::symmetric(1, 512, 14.0).unwrap();
        let zero = cat_wavefunction(Complex64::new(0.0, 0.0), &grid).unwrap();
        let vac = fock_wavefunction(&[0], &grid).unwrap();
        assert!(zero.amplitudes.iter().zip(&vac.amplitudes).all(|(a, b)| (a - b).norm() < 1e-15));
        for alpha in [Complex64::new(0.8, 0.0), Complex64::new(1.5, 0.7), Complex64::new(0.2, -1.1)] {
            let cat = cat_wavefunction(alpha, &grid).unwrap();
            assert!(close(cat.norm_sqr(), 1.0, 1e-10), "{alpha}");
        }
    }
}
