//! Differential Shannon and Rényi entropies of gridded densities against
//! their Gaussian closed forms.

use lct_uncertainty::entropy::{
    entropy_power, gaussian_renyi_entropy, gaussian_shannon_entropy, renyi_entropy, shannon_entropy,
};
use lct_uncertainty::lct::{probability_density, GridSpec};
use lct_uncertainty::states::{gaussian_wavefunction, GaussianState};
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vac = GaussianState::vacuum(1);
    let exact = gaussian_shannon_entropy(&DMatrix::from_element(1, 1, 0.5))?;
    println!("vacuum position entropy, closed form {exact:.12}");

    // Convergence with grid size
    for points in [32, 64, 128, 256, 512] {
        let grid = GridSpec::symmetric(1, points, 12.0)?;
        let p = probability_density(&gaussian_wavefunction(&vac, &grid)?);
        let h = shannon_entropy(&p, &grid)?;
        println!("{points:4} points: h = {h:.12}, error {:.2e}", (h - exact).abs());
    }

    // Rényi family on the same density
    let grid = GridSpec::symmetric(1, 512, 12.0)?;
    let p = probability_density(&gaussian_wavefunction(&vac, &grid)?);
    let cov = DMatrix::from_element(1, 1, 0.5);
    for alpha in [0.5, 0.999999, 1.0, 2.0, 3.0] {
        let h = renyi_entropy(&p, &grid, alpha)?;
        let closed = gaussian_renyi_entropy(&cov, alpha)?;
        println!("alpha = {alpha}: grid {h:.10}, closed form {closed:.10}");
    }

    // Entropy power equals the variance for a Gaussian
    println!("entropy power {:.10} (variance 0.5)", entropy_power(exact, 1));
    Ok(())
}
