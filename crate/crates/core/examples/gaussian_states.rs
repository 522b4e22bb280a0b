//! Gaussian states in phase space and on a grid, plus Fock and cat states.

use lct_uncertainty::entropy::{density_moments, shannon_entropy};
use lct_uncertainty::lct::{probability_density, GridSpec};
use lct_uncertainty::states::{
    cat_wavefunction, fock_wavefunction, gaussian_measurement_entropy, gaussian_wavefunction, marginal_covariance,
    GaussianState,
};
use lct_uncertainty::symplectic::{fourier_form, random_symplectic};
use nalgebra::dvector;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Covariance evolution gamma -> S gamma S^T
    let st = GaussianState::correlated_gaussian(2, 3);
    println!("correlated 2-mode state, det gamma = {:.6} (pure: {})", st.det_gamma(), st.is_pure());
    let s = random_symplectic(2, 9);
    let out = st.evolve(&s)?;
    println!(
        "after evolution det gamma = {:.6}, admissibility margin {:.2e}",
        out.det_gamma(),
        out.admissibility_margin()
    );
    println!("position marginal covariance:{}", marginal_covariance(&st, &s, 2)?);
    println!("closed-form h(position) = {:.6}", gaussian_measurement_entropy(&st, &s, 2)?);

    // Sampled wavefunction reproduces the marginal
    let sq = GaussianState::squeezed(&[0.5]).with_mean(dvector![1.0, -0.5])?;
    let grid = GridSpec::symmetric(1, 512, 10.0)?;
    let wf = gaussian_wavefunction(&sq, &grid)?;
    let (mean, cov) = density_moments(&probability_density(&wf), &grid)?;
    println!("squeezed: grid mean {:.6}, variance {:.6} (expected {:.6})", mean[0], cov[(0, 0)], sq.gamma()[(0, 0)]);
    let mom = marginal_covariance(&sq, &fourier_form(1), 1)?;
    println!("momentum variance {:.6}", mom[(0, 0)]);

    // Non-Gaussian states
    for k in 0..4 {
        let f = fock_wavefunction(&[k], &grid)?;
        let h = shannon_entropy(&probability_density(&f), &grid)?;
        println!("Fock |{k}>: norm {:.10}, h = {h:.6}", f.norm_sqr());
    }
    let cat = cat_wavefunction(Complex64::new(2.0, 0.5), &grid)?;
    println!("cat state: norm {:.10}", cat.norm_sqr());
    Ok(())
}
