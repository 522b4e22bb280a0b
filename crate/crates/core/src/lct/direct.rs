//! Direct Riemann-sum evaluation of the LCT integral, used as an oracle for
//! the factorized path. Shares no transform code with it: the input is
//! refined by Dirichlet-kernel interpolation and spectra are estimated with a
//! naive DFT.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{GridSpec, GriddedWaveFunction};
use super::resolve::{grow_factor, support_half_widths, SUPPORT_REL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symplectic::{b_block_det, SymplecticMatrix};

/// Largest input accepted by the direct path.
pub const DIRECT_MAX_INPUT: usize = 1 << 16;
/// Largest (refined input) × (output) work accepted by the direct path.
pub const DIRECT_MAX_WORK: usize = 1 << 31;

/// Per-axis spectral half-widths via a naive DFT of each axis line, taking the
/// maximum over lines of the frequency where `|F|²` exceeds the threshold.
fn naive_spectral_support(wf: &GriddedWaveFunction) -> Vec<f64> {
    let g = &wf.grid;
    let mut out = vec![0.0_f64; g.n];
    for (ax, half) in out.iter_mut().enumerate() {
        let m = g.points[ax];
        let h = g.spacing[ax];
        let dp = 2.0 * PI / (m as f64 * h);
        let xs = g.axis_coords(ax);
        let mut spectrum = vec![0.0_f64; m];
        g.for_each_line(ax, |line| {
            for (j, slot) in spectrum.iter_mut().enumerate() {
                let p = (j as f64 - (m as f64 - 1.0) / 2.0) * dp;
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &idx) in line.iter().enumerate() {
                    acc += wf.amplitudes[idx] * Complex64::from_polar(1.0, -p * xs[k]);
                }
                *slot += acc.norm_sqr();
            }
        });
        let peak = spectrum.iter().cloned().fold(0.0, f64::max);
        for (j, &v) in spectrum.iter().enumerate() {
            if peak > 0.0 && v >= SUPPORT_REL * peak {
                let p = (j as f64 - (m as f64 - 1.0) / 2.0) * dp;
                *half = half.max(p.abs());
            }
        }
    }
    out
}

/// `Σ_{j=0}^{M-1} e^{i (j - (M-1)/2) θ}`.
fn dirichlet(m: usize, theta: f64) -> f64 {
    let half = 0.5 * theta;
    let s = half.sin();
    if s.abs() < 1e-12 {
        // θ = 2πk: the sum is M e^{-iπ(M-1)k}.
        let k = (theta / (2.0 * PI)).round() as i64;
        let sign = if ((m as i64 - 1) * k) % 2 == 0 { 1.0 } else { -1.0 };
        sign * m as f64
    } else {
        (m as f64 * half).sin() / s
    }
}

/// Trigonometric interpolation of one axis onto `q` times as many samples.
fn dirichlet_refine_axis(wf: &GriddedWaveFunction, axis: usize, q: usize) -> Result<GriddedWaveFunction> {
    if q == 1 {
        return Ok(wf.clone());
    }
    let g = &wf.grid;
    let m = g.points[axis];
    let h = g.spacing[axis];
    let dp = 2.0 * PI / (m as f64 * h);
    let mut points = g.points.clone();
    points[axis] = m * q;
    let mut spacing = g.spacing.clone();
    spacing[axis] = h / q as f64;
    let grid = GridSpec::centered(points, spacing)?;
    let xs_old = g.axis_coords(axis);
    let xs_new = grid.axis_coords(axis);
    let kernel: Vec<f64> = xs_new
        .iter()
        .flat_map(|&x| xs_old.iter().map(move |&xk| (x, xk)))
        .map(|(x, xk)| dirichlet(m, dp * (x - xk)) / m as f64)
        .collect();
    let mut amps = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut new_lines = Vec::new();
    grid.for_each_line(axis, |line| new_lines.push(line.to_vec()));
    let mut li = 0;
    g.for_each_line(axis, |old| {
        let new = &new_lines[li];
        li += 1;
        for (l, &dst) in new.iter().enumerate() {
            let row = &kernel[l * m..(l + 1) * m];
            amps[dst] = old.iter().zip(row).map(|(&src, &w)| wf.amplitudes[src] * w).sum();
        }
    });
    GriddedWaveFunction::new(grid, amps)
}

/// Direct quadrature of
/// `F_S[f](y) = ((2π)^n |det b|)^{-1/2} ∫ f(x) e^{-i b^{-1}y·x} e^{i/2 (x^T b^{-1}a x + y^T d b^{-1} y)} dx`
/// on `out_grid`.
pub fn lct_apply_direct(
    wf: &GriddedWaveFunction,
    s: &SymplecticMatrix,
    out_grid: &GridSpec,
) -> Result<GriddedWaveFunction> {
    let n = wf.n();
    if s.n() != n || out_grid.n != n {
        return Err(Error::Dimension("wavefunction, transform and output grid disagree on n".into()));
    }
    out_grid.validate()?;
    if wf.grid.len() > DIRECT_MAX_INPUT {
        return Err(Error::SizeGuardExceeded(format!("{} input samples exceeds {DIRECT_MAX_INPUT}", wf.grid.len())));
    }
    let det_b = b_block_det(&s.b())?;
    let b_inv = linalg::inverse(&s.b(), "b block")?;
    let r_in = &b_inv * s.a();
    let r_out = s.d() * &b_inv;

    // Refine until no periodic image of the integrand's spectrum reaches the
    // frequencies probed by the output grid.
    let x = support_half_widths(wf);
    let p = naive_spectral_support(wf);
    let y: Vec<f64> = (0..n).map(|i| out_grid.half_extent(i)).collect();
    let mut fine = wf.clone();
    for i in 0..n {
        // Bandwidth of the chirped integrand, and the largest kernel frequency.
        let band = p[i] + (0..n).map(|j| r_in[(i, j)].abs() * x[j]).sum::<f64>();
        let freq: f64 = (0..n).map(|j| b_inv[(i, j)].abs() * y[j]).sum();
        // Periodic images of the spectrum sit 2π/h apart.
        let need = band.max(0.5 * (band + freq));
        let q = grow_factor(need / (PI / wf.grid.spacing[i]), wf.grid.points[i]);
        fine = dirichlet_refine_axis(&fine, i, q)?;
    }
    let work = fine.grid.len().saturating_mul(out_grid.len());
    if work > DIRECT_MAX_WORK {
        return Err(Error::SizeGuardExceeded(format!("direct quadrature work {work} exceeds {DIRECT_MAX_WORK}")));
    }

    let quad = |v: &[f64], r: &DMatrix<f64>| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += v[i] * r[(i, j)] * v[j];
            }
        }
        acc
    };
    let mut pt = vec![0.0; n];
    let chirped: Vec<Complex64> = fine
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| {
            fine.grid.point(k, &mut pt);
            a * Complex64::from_polar(1.0, 0.5 * quad(&pt, &r_in))
        })
        .collect();
    let axes: Vec<Vec<f64>> = (0..n).map(|i| fine.grid.axis_coords(i)).collect();
    let prefactor = fine.grid.cell_volume() / ((2.0 * PI).powi(n as i32) * det_b.abs()).sqrt();

    let amplitudes: Vec<Complex64> = (0..out_grid.len())
        .into_par_iter()
        .map(|k| {
            let mut yk = vec![0.0; n];
            out_grid.point(k, &mut yk);
            let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| b_inv[(i, j)] * yk[j]).sum()).collect();
            // Contract the last axis first: Σ_x g(x) Π_i e^{-i w_i x_i}.
            let mut acc = chirped.clone();
            for ax in (0..n).rev() {
                let m = axes[ax].len();
                let phase: Vec<Complex64> =
                    axes[ax].iter().map(|&xi| Complex64::from_polar(1.0, -w[ax] * xi)).collect();
                acc = acc.chunks(m).map(|chunk| chunk.iter().zip(&phase).map(|(a, ph)| a * ph).sum()).collect();
            }
            acc[0] * prefactor * Complex64::from_polar(1.0, 0.5 * quad(&yk, &r_out))
        })
        .collect();
    GriddedWaveFunction::new(out_grid.clone(), amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_matches_explicit_sum() {
        for m in [4_usize, 7, 16] {
            for &theta in &[0.0, 0.3, -1.7, 2.0 * PI, 4.0 * PI + 1e-14] {
                let explicit: Complex64 =
                    (0..m).map(|j| Complex64::from_polar(1.0, (j as f64 - (m as f64 - 1.0) / 2.0) * theta)).sum();
                assert!((explicit.re - dirichlet(m, theta)).abs() < 1e-9, "m={m} θ={theta}");
                assert!(explicit.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dirichlet_refine_is_exact_for_band_limited() {
        let g = GridSpec::symmetric(1, 33, 8.0).unwrap();
        let wf = GriddedWaveFunction::from_fn(g, |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0)).unwrap();
        let fine = dirichlet_refine_axis(&wf, 0, 3).unwrap();
        for (k, a) in fine.amplitudes.iter().enumerate() {
            let x = fine.grid.coord(0, k);
            assert!((a.re - (-x * x / 2.0).exp()).abs() < 1e-9);
        }
    }
}
