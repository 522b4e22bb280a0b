use lct_uncertainty::entropy::density_moments;
use lct_uncertainty::lct::{
    density_l1_distance, io, lct_apply, lct_apply_direct, lct_apply_routed, probability_density, GridSpec,
    GriddedWaveFunction, Route,
};
use lct_uncertainty::states::{
    cat_wavefunction, fock_wavefunction, gaussian_wavefunction, marginal_covariance, GaussianState,
};
use lct_uncertainty::symplectic::{direct_sum, fourier_form, random_symplectic, rotation, squeezer, SymplecticMatrix};
use nalgebra::{dvector, DMatrix};
use num_complex::Complex64;

/// Grid wide enough for the position marginal of `state`.
fn fitted_grid(state: &GaussianState, points: usize) -> GridSpec {
    let n = state.modes();
    let widest = (0..n).map(|i| state.gamma()[(i, i)].sqrt()).fold(0.0, f64::max);
    GridSpec::symmetric(n, points, 9.0 * widest + state.mean().amax()).unwrap()
}

/// Transformed Gaussian density against the closed form of `S γ S^T` on the output grid.
fn gaussian_density_error(state: &GaussianState, s: &SymplecticMatrix, points: usize) -> f64 {
    let wf = gaussian_wavefunction(state, &fitted_grid(state, points)).unwrap();
    let out = lct_apply(&wf, s).unwrap();
    let oracle = gaussian_wavefunction(&state.evolve(s).unwrap(), &out.grid).unwrap();
    density_l1_distance(&out, &oracle).unwrap()
}

#[test]
fn one_mode_gaussians_match_closed_form() {
    let state = GaussianState::squeezed(&[0.4]).with_mean(dvector![0.5, -0.3]).unwrap();
    for seed in 0..6 {
        let s = random_symplectic(1, seed);
        let err = gaussian_density_error(&state, &s, 512);
        assert!(err < 1e-6, "seed {seed}: L1 error {err}");
    }
}

#[test]
fn two_mode_gaussians_match_closed_form() {
    let state = GaussianState::correlated_gaussian(2, 11);
    let s = direct_sum(&[rotation(0.7), squeezer(&[0.3]).compose(&rotation(-1.2)).unwrap()]);
    let err = gaussian_density_error(&state, &s, 96);
    assert!(err < 1e-4, "L1 error {err}");
    let mixed = random_symplectic(2, 3);
    assert!(mixed.b_is_invertible());
    let err = gaussian_density_error(&GaussianState::vacuum(2), &mixed, 64);
    assert!(err < 1e-4, "L1 error {err}");
}

#[test]
fn composition_matches_single_transform() {
    let wf = cat_wavefunction(Complex64::new(1.5, 0.5), &GridSpec::symmetric(1, 256, 10.0).unwrap()).unwrap();
    let (s1, s2) = (random_symplectic(1, 21), random_symplectic(1, 22));
    let first = lct_apply(&wf, &s1).unwrap();
    let out_grid = GridSpec::symmetric(1, 256, 25.0).unwrap();
    let staged = lct_apply_direct(&first, &s2, &out_grid).unwrap();
    let single = lct_apply_direct(&wf, &s2.compose(&s1).unwrap(), &out_grid).unwrap();
    let err = density_l1_distance(&staged, &single).unwrap();
    assert!(err < 1e-6, "L1 error {err}");
}

#[test]
fn transforms_preserve_norm() {
    let wf = fock_wavefunction(&[3], &GridSpec::symmetric(1, 512, 12.0).unwrap()).unwrap();
    for seed in 0..5 {
        let out = lct_apply(&wf, &random_symplectic(1, seed)).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-9, "seed {seed}: norm {}", out.norm_sqr());
    }
}

#[test]
fn fock_densities_are_rotation_invariant() {
    let wf = fock_wavefunction(&[2], &GridSpec::symmetric(1, 512, 12.0).unwrap()).unwrap();
    for theta in [0.3, 1.0, 2.5] {
        let out = lct_apply(&wf, &rotation(theta)).unwrap();
        let oracle = fock_wavefunction(&[2], &out.grid).unwrap();
        assert!(density_l1_distance(&out, &oracle).unwrap() < 1e-8);
    }
}

#[test]
fn singular_and_zero_b_blocks_are_routed() {
    let wf = fock_wavefunction(&[1], &GridSpec::symmetric(1, 256, 10.0).unwrap()).unwrap();
    let (_, route) = lct_apply_routed(&wf, &squeezer(&[0.5])).unwrap();
    assert_eq!(route, Route::PointMap);
    let (_, route) = lct_apply_routed(&wf, &fourier_form(1)).unwrap();
    assert_eq!(route, Route::Fast);

    // b = diag(1, 0): fast path cannot factor it.
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    );
    let s = SymplecticMatrix::new(m).unwrap();
    let state = GaussianState::squeezed(&[0.2, -0.3]);
    let wf = gaussian_wavefunction(&state, &GridSpec::symmetric(2, 64, 7.0).unwrap()).unwrap();
    let (out, route) = lct_apply_routed(&wf, &s).unwrap();
    assert!(matches!(route, Route::Composed { .. }));
    let oracle = gaussian_wavefunction(&state.evolve(&s).unwrap(), &out.grid).unwrap();
    assert!(density_l1_distance(&out, &oracle).unwrap() < 1e-4);
}

#[test]
fn covariance_follows_symplectic_action() {
    let state = GaussianState::correlated_gaussian(1, 5);
    for seed in 0..4 {
        let s = random_symplectic(1, seed);
        let out = lct_apply(&gaussian_wavefunction(&state, &fitted_grid(&state, 1024)).unwrap(), &s).unwrap();
        let (_, cov) = density_moments(&probability_density(&out), &out.grid).unwrap();
        let expected = marginal_covariance(&state, &s, 1).unwrap()[(0, 0)];
        assert!(
            (cov[(0, 0)] - expected).abs() < 1e-4 * expected.max(1.0),
            "seed {seed}: {} vs {expected}",
            cov[(0, 0)]
        );
    }
}

#[test]
fn wavefunction_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let wf = cat_wavefunction(Complex64::new(1.0, -0.7), &GridSpec::symmetric(1, 128, 8.0).unwrap()).unwrap();
    for encoding in [io::Encoding::Array, io::Encoding::Base64] {
        let path = dir.path().join("wf.json");
        io::write(&path, &wf, encoding).unwrap();
        let back: GriddedWaveFunction = io::read(&path).unwrap();
        assert_eq!(back, wf);
    }
}
