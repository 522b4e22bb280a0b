//! Linear canonical transforms on a grid: the fractional Fourier special
//! case, a general transform checked against direct quadrature, and the
//! fallback routes for singular b blocks.

use lct_uncertainty::lct::{
    density_l2_distance, fourier_nd, lct_apply, lct_apply_direct, lct_apply_routed, GridSpec, GriddedWaveFunction,
};
use lct_uncertainty::states::{fock_wavefunction, gaussian_wavefunction, GaussianState};
use lct_uncertainty::symplectic::{fourier_form, random_symplectic, rotation, squeezer, SymplecticMatrix};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::symmetric(1, 256, 10.0)?;
    let psi: GriddedWaveFunction = fock_wavefunction(&[1], &grid)?;

    // Quarter turn equals the Fourier transform
    let quarter = lct_apply(&psi, &rotation(PI / 2.0))?;
    let fourier = lct_apply(&psi, &fourier_form(1))?;
    println!("rotation(pi/2) vs Fourier matrix: {:.2e}", density_l2_distance(&quarter, &fourier)?);
    println!("dedicated FFT grid spacing: {:.4}", fourier_nd(&psi).grid.spacing[0]);

    // Fractional orders keep the norm
    for theta in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let out = lct_apply(&psi, &rotation(theta))?;
        println!("theta = {theta:.1}: norm {:.12}, {} samples", out.norm_sqr(), out.grid.len());
    }

    // General transform: fast path against direct quadrature on its output grid
    let s = random_symplectic(1, 5);
    let fast = lct_apply(&psi, &s)?;
    let direct = lct_apply_direct(&psi, &s, &fast.grid)?;
    println!("random S, fast vs direct density L2: {:.2e}", density_l2_distance(&fast, &direct)?);

    // b = 0 and singular b
    let (_, route) = lct_apply_routed(&psi, &squeezer(&[0.3]))?;
    println!("squeezer route: {route:?}");
    let m = SymplecticMatrix::from_row_major(
        2,
        &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    )?;
    let vac = gaussian_wavefunction(&GaussianState::vacuum(2), &GridSpec::symmetric(2, 64, 7.0)?)?;
    let (out, route) = lct_apply_routed(&vac, &m)?;
    println!("Fourier on mode 0 only: {route:?}, norm {:.12}", out.norm_sqr());
    Ok(())
}
