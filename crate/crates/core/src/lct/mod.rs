//! Linear canonical transforms of gridded wavefunctions.
//!
//! `F_S` is the unitary induced by a symplectic `S` on `L²(Rⁿ)`: if `ψ` is the
//! position wavefunction, `|F_S ψ(y)|²` is the density of the quadratures
//! `y = a x + b p`. Only densities are contractual; global phases (including
//! the metaplectic sign) are not.

mod direct;
mod fast;
mod grid;
pub mod io;
mod ops;
mod resolve;

pub use direct::{lct_apply_direct, DIRECT_MAX_INPUT};
pub use fast::{lct_apply, lct_apply_fast, lct_apply_routed, Route};
pub use grid::{GridSpec, GriddedWaveFunction};
pub use ops::{chirp_apply, dilate, fourier_nd, inverse_fourier_nd, probability_density, reciprocal_grid};
pub use resolve::{refine, support_half_widths, zero_pad, ResolutionPlan};

/// Cells near the boundary inspected by the aliasing guard.
pub const EDGE_CELLS: usize = 3;
/// Edge mass above which a wavefunction is reported as possibly aliased.
pub const EDGE_MASS_WARN: f64 = 1e-6;

/// Logs a warning when too much probability sits at the grid edges; returns
/// the edge mass.
pub fn check_edges(wf: &GriddedWaveFunction, what: &str) -> f64 {
    let mass = wf.edge_mass(EDGE_CELLS);
    if mass > EDGE_MASS_WARN {
        log::warn!("{what}: {mass:.2e} of the probability lies within {EDGE_CELLS} cells of the grid edge");
    }
    mass
}

/// `sqrt(Σ (p1 - p2)² · cell_volume)` for densities on the same grid.
pub fn density_l2_distance(a: &GriddedWaveFunction, b: &GriddedWaveFunction) -> crate::Result<f64> {
    same_grid(a, b)?;
    let vol = a.grid.cell_volume();
    Ok((a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).powi(2)).sum::<f64>() * vol)
        .sqrt())
}

/// `Σ |p1 - p2| · cell_volume` for densities on the same grid.
pub fn density_l1_distance(a: &GriddedWaveFunction, b: &GriddedWaveFunction) -> crate::Result<f64> {
    same_grid(a, b)?;
    let vol = a.grid.cell_volume();
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs()).sum::<f64>() * vol)
}

fn same_grid(a: &GriddedWaveFunction, b: &GriddedWaveFunction) -> crate::Result<()> {
    let close = a.grid.points == b.grid.points
        && a.grid.spacing.iter().zip(&b.grid.spacing).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs());
    if !close {
        return Err(crate::Error::Dimension("densities live on different grids".into()));
    }
    Ok(())
}
