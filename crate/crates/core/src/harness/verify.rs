use std::f64::consts::{E, PI};
use std::time::Instant;

use nalgebra::DMatrix;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::report::{digest_of, Diagnostics, Relation, VerificationReport, ANALYTIC_TOL, GRID_TOL};
use crate::entropy::{
    covariance_bound_check, density_moments, entropy_power, gaussian_renyi_entropy, gaussian_shannon_entropy,
    renyi_bound_of, renyi_entropy, shannon_entropy, RenyiOrderPair,
};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::lct::{self, lct_apply_routed, probability_density, GridSpec, GriddedWaveFunction, Route, EDGE_CELLS};
use crate::states::{marginal_covariance, marginal_covariance_rows, GaussianState};
use crate::symplectic::{
    commutator_matrix, commutator_of_rows, direct_sum, fourier_form, identity, lct_pair_matrix, rotation,
    symplectic_completion, CommutatorMatrix, QuadratureRowSet, SymplecticMatrix,
};

/// A state under test: Gaussian states are evaluated in closed form, gridded
/// wavefunctions through the transform engine.
#[derive(Debug, Clone)]
pub enum TestState {
    Gaussian(GaussianState),
    Grid(GriddedWaveFunction),
}

impl TestState {
    pub fn modes(&self) -> usize {
        match self {
            TestState::Gaussian(s) => s.modes(),
            TestState::Grid(w) => w.n(),
        }
    }

    fn feed(&self, hasher: &mut Sha256) -> Result<()> {
        match self {
            TestState::Gaussian(s) => hasher.update(serde_json::to_vec(s)?),
            TestState::Grid(w) => {
                hasher.update(serde_json::to_vec(&w.grid)?);
                for a in &w.amplitudes {
                    hasher.update(a.re.to_le_bytes());
                    hasher.update(a.im.to_le_bytes());
                }
            }
        }
        Ok(())
    }
}

impl From<GaussianState> for TestState {
    fn from(s: GaussianState) -> Self {
        TestState::Gaussian(s)
    }
}

impl From<GriddedWaveFunction> for TestState {
    fn from(w: GriddedWaveFunction) -> Self {
        TestState::Grid(w)
    }
}

fn digest(relation: Relation, state: &TestState, rest: &impl Serialize) -> Result<String> {
    let mut hasher = Sha256::new();
    hasher.update(relation.as_str().as_bytes());
    state.feed(&mut hasher)?;
    hasher.update(digest_of(rest)?.as_bytes());
    Ok(hex::encode(hasher.finalize()))
}

fn same_modes(state: &TestState, a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<usize> {
    let n = state.modes();
    if a.n() != n || b.n() != n {
        return Err(Error::Dimension(format!(
            "state has {n} modes but the measurements act on {} and {}",
            a.n(),
            b.n()
        )));
    }
    Ok(n)
}

/// Output density of the first `n` quadratures of `S r` for a gridded state.
struct GridOutcome {
    density: Vec<f64>,
    grid: GridSpec,
}

fn route_label(route: Route) -> String {
    match route {
        Route::Fast => "fast".into(),
        Route::PointMap => "point map".into(),
        Route::Composed { theta } => format!("composed through rotation {theta:.6}"),
    }
}

fn measure_grid(
    wf: &GriddedWaveFunction,
    s: &SymplecticMatrix,
    n: usize,
    diag: &mut Diagnostics,
    tag: &str,
) -> Result<GridOutcome> {
    let (out, route) = lct_apply_routed(wf, s)?;
    if route != Route::Fast {
        diag.note(format!("{tag}: {}", route_label(route)));
    }
    diag.absorb_grid((out.norm_sqr() - 1.0).abs(), out.edge_mass(EDGE_CELLS));
    lct::check_edges(&out, tag);
    let density = probability_density(&out);
    Ok(marginalize(density, &out.grid, n))
}

/// Integrates out all axes after the first `n`.
fn marginalize(density: Vec<f64>, grid: &GridSpec, n: usize) -> GridOutcome {
    if n == grid.n {
        return GridOutcome { density, grid: grid.clone() };
    }
    let block: usize = grid.points[n..].iter().product();
    let volume: f64 = grid.spacing[n..].iter().product();
    let reduced = density.chunks_exact(block).map(|c| c.iter().sum::<f64>() * volume).collect();
    let sub = GridSpec {
        n,
        points: grid.points[..n].to_vec(),
        spacing: grid.spacing[..n].to_vec(),
        origin: grid.origin[..n].to_vec(),
    };
    GridOutcome { density: reduced, grid: sub }
}

/// Per-side entropies of order `alpha` (Shannon for 1) of the first `n`
/// outputs of `a` and `b`.
fn entropies(
    state: &TestState,
    a: &SymplecticMatrix,
    b: &SymplecticMatrix,
    n: usize,
    orders: (f64, f64),
    diag: &mut Diagnostics,
) -> Result<(f64, f64, bool)> {
    match state {
        TestState::Gaussian(g) => {
            let one = |s: &SymplecticMatrix, alpha: f64| -> Result<f64> {
                let cov = marginal_covariance(g, s, n)?;
                if alpha == 1.0 {
                    gaussian_shannon_entropy(&cov)
                } else {
                    gaussian_renyi_entropy(&cov, alpha)
                }
            };
            Ok((one(a, orders.0)?, one(b, orders.1)?, false))
        }
        TestState::Grid(w) => {
            let ya = measure_grid(w, a, n, diag, "A")?;
            let zb = measure_grid(w, b, n, diag, "B")?;
            let h = |o: &GridOutcome, alpha: f64| {
                if alpha == 1.0 {
                    shannon_entropy(&o.density, &o.grid)
                } else {
                    renyi_entropy(&o.density, &o.grid, alpha)
                }
            };
            Ok((h(&ya, orders.0)?, h(&zb, orders.1)?, true))
        }
    }
}

fn finish(report: VerificationReport, digest: String, start: Instant) -> VerificationReport {
    let mut r = report.with_digest(digest);
    r.wall_time = start.elapsed().as_secs_f64();
    r
}

/// `h(y) + h(z) >= ln((πe)^n |det K|)` for the full output quadratures of `A`
/// and `B`.
pub fn verify_theorem1(state: &TestState, a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<VerificationReport> {
    let start = Instant::now();
    let n = same_modes(state, a, b)?;
    let k = commutator_matrix(a, b)?;
    let mut diag = Diagnostics { det_k: Some(k.det_abs()), ..Default::default() };
    let (hy, hz, grid) = entropies(state, a, b, n, (1.0, 1.0), &mut diag)?;
    diag.value("h_y", hy);
    diag.value("h_z", hz);
    let report = VerificationReport::new(Relation::Theorem1, n, n, hy + hz, k.shannon_bound(), grid, diag);
    Ok(finish(report, digest(Relation::Theorem1, state, &(a, b))?, start))
}

/// Extended relation for `n` measured quadratures out of `N` modes, given as
/// isotropic coefficient rows.
pub fn verify_theorem1_extended(
    state: &TestState,
    rows_a: &QuadratureRowSet,
    rows_b: &QuadratureRowSet,
) -> Result<VerificationReport> {
    let start = Instant::now();
    rows_a.validate()?;
    rows_b.validate()?;
    let (n, modes) = (rows_a.n(), rows_a.modes());
    if rows_b.n() != n || rows_b.modes() != modes || state.modes() != modes {
        return Err(Error::Dimension(format!(
            "row sets are {}x{} and {}x{}, state has {} modes",
            n,
            2 * modes,
            rows_b.n(),
            2 * rows_b.modes(),
            state.modes()
        )));
    }
    let k = commutator_of_rows(rows_a.rows(), rows_b.rows())?;
    let mut diag = Diagnostics { det_k: Some(k.det_abs()), ..Default::default() };
    if n == 1 {
        diag.value("commutator", k.m()[(0, 0)]);
    }
    let (hy, hz, grid) = match state {
        TestState::Gaussian(g) => {
            let hy = gaussian_shannon_entropy(&marginal_covariance_rows(g, rows_a.rows())?)?;
            let hz = gaussian_shannon_entropy(&marginal_covariance_rows(g, rows_b.rows())?)?;
            (hy, hz, false)
        }
        TestState::Grid(_) => {
            let sa = symplectic_completion(rows_a)?;
            let sb = symplectic_completion(rows_b)?;
            entropies(state, &sa, &sb, n, (1.0, 1.0), &mut diag)?
        }
    };
    diag.value("h_y", hy);
    diag.value("h_z", hz);
    let report = VerificationReport::new(Relation::Theorem1Extended, n, modes, hy + hz, k.shannon_bound(), grid, diag);
    Ok(finish(report, digest(Relation::Theorem1Extended, state, &(rows_a, rows_b))?, start))
}

/// Entropy sum of two transformed copies of a gridded state against
/// `ln((πe)^n |det(B_b A_a^T - B_a A_b^T)|)`; also checks that this
/// determinant equals `|det K|`.
pub fn verify_lemma1(
    wf: &GriddedWaveFunction,
    a: &SymplecticMatrix,
    b: &SymplecticMatrix,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let state = TestState::Grid(wf.clone());
    let n = same_modes(&state, a, b)?;
    let k = commutator_matrix(a, b)?;
    let pair = lct_pair_matrix(a, b)?;
    let scale = a.top_rows().norm() * b.top_rows().norm();
    let lemma = CommutatorMatrix::new(pair, scale)?;
    let mut diag = Diagnostics { det_k: Some(k.det_abs()), ..Default::default() };
    let det_pair = lemma.m().determinant().abs();
    let identity_dev = (det_pair - k.m().determinant().abs()).abs() / k.m().determinant().abs().max(1.0);
    diag.value("det_pair", det_pair);
    diag.value("identity_deviation", identity_dev);

    let bound = match lemma.ln_abs_det() {
        ExtReal::Finite(l) => ExtReal::Finite(n as f64 * (PI * E).ln() + l),
        other => other,
    };
    let (hy, hz, _) = entropies(&state, a, b, n, (1.0, 1.0), &mut diag)?;
    diag.value("h_y", hy);
    diag.value("h_z", hz);
    let mut report = VerificationReport::new(Relation::Lemma1, n, n, hy + hz, bound, true, diag);
    if identity_dev > 1e-10 {
        report.fail(format!("|det(B_b A_a^T - B_a A_b^T)| differs from |det K| by {identity_dev:e}"));
    }
    Ok(finish(report, digest(Relation::Lemma1, &state, &(a, b))?, start))
}

/// `h_α(y) + h_β(z)` against the Rényi bound for conjugate orders.
pub fn verify_theorem2(
    state: &TestState,
    a: &SymplecticMatrix,
    b: &SymplecticMatrix,
    pair: RenyiOrderPair,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let n = same_modes(state, a, b)?;
    let k = commutator_matrix(a, b)?;
    let mut diag = Diagnostics { det_k: Some(k.det_abs()), ..Default::default() };
    diag.value("alpha", pair.alpha());
    diag.value("beta", pair.beta());
    let (hy, hz, grid) = entropies(state, a, b, n, (pair.alpha(), pair.beta()), &mut diag)?;
    diag.value("h_alpha_y", hy);
    diag.value("h_beta_z", hz);
    let report = VerificationReport::new(Relation::Theorem2, n, n, hy + hz, renyi_bound_of(&k, pair), grid, diag);
    Ok(finish(report, digest(Relation::Theorem2, state, &(a, b, pair))?, start))
}

/// `sqrt(det γ_A det γ_B) >= |det K| / 2^n`, plus the entropy-power chain
/// `(det γ_A det γ_B)^{1/n} >= N_A N_B >= |det K|^{2/n} / 4` that implies it.
pub fn verify_theorem3(state: &TestState, a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<VerificationReport> {
    let start = Instant::now();
    let n = same_modes(state, a, b)?;
    let k = commutator_matrix(a, b)?;
    let mut diag = Diagnostics::default();
    let (ga, gb, hy, hz, grid) = match state {
        TestState::Gaussian(g) => {
            let ga = marginal_covariance(g, a, n)?;
            let gb = marginal_covariance(g, b, n)?;
            let (hy, hz) = (gaussian_shannon_entropy(&ga)?, gaussian_shannon_entropy(&gb)?);
            (ga, gb, hy, hz, false)
        }
        TestState::Grid(w) => {
            let ya = measure_grid(w, a, n, &mut diag, "A")?;
            let zb = measure_grid(w, b, n, &mut diag, "B")?;
            let ga = density_moments(&ya.density, &ya.grid)?.1;
            let gb = density_moments(&zb.density, &zb.grid)?.1;
            let hy = shannon_entropy(&ya.density, &ya.grid)?;
            let hz = shannon_entropy(&zb.density, &zb.grid)?;
            (ga, gb, hy, hz, true)
        }
    };
    let base = covariance_bound_check(&ga, &gb, &k)?;
    diag.det_k = base.diagnostics.det_k;
    let power_product = entropy_power(hy, n) * entropy_power(hz, n);
    let power_bound = k.det_abs().powf(2.0 / n as f64) / 4.0;
    let cov_side = base.lhs.powf(2.0 / n as f64);
    diag.value("entropy_power_product", power_product);
    diag.value("entropy_power_bound", power_bound);
    diag.value("det_gamma_product_root", cov_side);

    let mut report = VerificationReport::new(Relation::Theorem3, n, state.modes(), base.lhs, base.bound, grid, diag);
    let tol = if grid { GRID_TOL } else { ANALYTIC_TOL };
    if !k.is_degenerate() && power_product < power_bound * (1.0 - tol) {
        report.fail(format!("entropy-power product {power_product:e} below {power_bound:e}"));
    }
    if power_product > cov_side * (1.0 + tol) {
        report.fail(format!("entropy-power product {power_product:e} exceeds covariance side {cov_side:e}"));
    }
    Ok(finish(report, digest(Relation::Theorem3, state, &(a, b))?, start))
}

/// Position against momentum for every mode.
pub fn verify_birula(state: &TestState) -> Result<VerificationReport> {
    let n = state.modes();
    Ok(verify_theorem1(state, &identity(n), &fourier_form(n))?.with_relation(Relation::Birula))
}

/// Single pair of quadratures given as rows; the bound is `ln(πe |[A, B]|)`.
pub fn verify_huang(
    state: &TestState,
    rows_a: &QuadratureRowSet,
    rows_b: &QuadratureRowSet,
) -> Result<VerificationReport> {
    if rows_a.n() != 1 || rows_b.n() != 1 {
        return Err(Error::Dimension("the Huang relation compares a single pair of quadratures".into()));
    }
    Ok(verify_theorem1_extended(state, rows_a, rows_b)?.with_relation(Relation::Huang))
}

/// Every mode rotated by `θ` against every mode rotated by `φ`.
pub fn verify_guanlei(state: &TestState, theta: f64, phi: f64) -> Result<VerificationReport> {
    let n = state.modes();
    let a = direct_sum(&vec![rotation(theta); n]);
    let b = direct_sum(&vec![rotation(phi); n]);
    Ok(verify_theorem1(state, &a, &b)?.with_relation(Relation::Guanlei))
}

/// Top `n` rows of a seeded random symplectic matrix: a random isotropic,
/// full-rank row set.
pub fn random_rows(n: usize, modes: usize, seed: u64) -> Result<QuadratureRowSet> {
    let s = crate::symplectic::random_symplectic(modes, seed);
    QuadratureRowSet::top_of(&s, n)
}

/// Rows selecting `x_1..x_n` or `p_1..p_n` of `modes` modes.
pub fn standard_rows(n: usize, modes: usize, momentum: bool) -> Result<QuadratureRowSet> {
    let mut rows = DMatrix::zeros(n, 2 * modes);
    for i in 0..n.min(modes) {
        rows[(i, if momentum { modes + i } else { i })] = 1.0;
    }
    QuadratureRowSet::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Status;

    #[test]
    fn vacuum_saturates_position_momentum() {
        for n in 1..=3 {
            let r = verify_birula(&GaussianState::vacuum(n).into()).unwrap();
            assert!(r.slack_f64().abs() < 1e-12, "{n}: {}", r.slack);
            assert_eq!(r.status, Status::Pass);
            assert_eq!(r.relation, Relation::Birula);
        }
    }

    #[test]
    fn identical_measurements_are_vacuous() {
        let st: TestState = GaussianState::vacuum(2).into();
        let r = verify_theorem1(&st, &identity(2), &identity(2)).unwrap();
        assert_eq!(r.status, Status::Vacuous);
        assert!(r.bound.is_neg_infinity());
    }

    #[test]
    fn rotated_quadratures_slack() {
        let st: TestState = GaussianState::vacuum(1).into();
        let r = verify_guanlei(&st, 0.9, 0.2).unwrap();
        assert!((r.slack_f64() + 0.7f64.sin().ln()).abs() < 1e-12);
    }

    #[test]
    fn extended_reduces_to_plain_pair() {
        let st: TestState = GaussianState::vacuum(2).into();
        let x = standard_rows(1, 2, false).unwrap();
        let p = standard_rows(1, 2, true).unwrap();
        let r = verify_huang(&st, &x, &p).unwrap();
        assert!(r.slack_f64().abs() < 1e-12);
        assert_eq!(r.n, 1);
        assert_eq!(r.modes, 2);
    }

    #[test]
    fn mismatched_dimensions_are_input_errors() {
        let st: TestState = GaussianState::vacuum(2).into();
        assert!(matches!(verify_theorem1(&st, &identity(1), &fourier_form(1)), Err(Error::Dimension(_))));
    }

    #[test]
    fn marginalize_sums_trailing_axes() {
        let grid = GridSpec::centered(vec![2, 3], vec![1.0, 0.5]).unwrap();
        let rho = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let out = marginalize(rho, &grid, 1);
        assert_eq!(out.density, vec![3.0, 7.5]);
        assert_eq!(out.grid.points, vec![2]);
    }

    #[test]
    fn digests_separate_inputs() {
        let a: TestState = GaussianState::vacuum(1).into();
        let b: TestState = GaussianState::squeezed(&[0.1]).into();
        let d1 = digest(Relation::Theorem1, &a, &1).unwrap();
        assert_eq!(d1, digest(Relation::Theorem1, &a, &1).unwrap());
        assert_ne!(d1, digest(Relation::Theorem1, &b, &1).unwrap());
        assert_ne!(d1, digest(Relation::Theorem2, &a, &1).unwrap());
    }
}
