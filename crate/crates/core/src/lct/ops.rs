//! Elementary operators: Fourier transform, chirp multiplication, dilation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{GridSpec, GriddedWaveFunction};
use crate::error::{Error, Result};
use crate::linalg;

/// `exp(i π t / denom)` with `t` reduced modulo `2 denom` in integer arithmetic.
fn unit_phase(t: u128, denom: u128) -> Complex64 {
    let r = (t % (2 * denom)) as f64;
    Complex64::from_polar(1.0, PI * r / denom as f64)
}

/// Continuous-convention transform `(2π)^{-1/2} ∫ f(x) e^{-ipx} dx` along one
/// axis, as a Riemann sum evaluated with a DFT plus centring twiddles. The
/// output axis has spacing `2π / (M h)` and is again centred.
fn fourier_axis(planner: &mut FftPlanner<f64>, grid: &GridSpec, amps: &mut [Complex64], axis: usize) {
    let m = grid.points[axis];
    let h = grid.spacing[axis];
    let fft = planner.plan_fft_forward(m);
    let mm = m as u128;
    let shift = (m - 1) as u128;
    // e^{-i p0 k h} and e^{-i x0 j dp} both equal exp(iπ(M-1)k/M).
    let twiddle: Vec<Complex64> = (0..mm).map(|k| unit_phase(shift * k, mm)).collect();
    // e^{-i p0 x0} = exp(-iπ(M-1)²/(2M))
    let global = unit_phase(shift * shift, 2 * mm).conj() * (h / (2.0 * PI).sqrt());
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    grid.for_each_line(axis, |line| {
        for (k, &idx) in line.iter().enumerate() {
            buf[k] = amps[idx] * twiddle[k];
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (j, &idx) in line.iter().enumerate() {
            amps[idx] = buf[j] * twiddle[j] * global;
        }
    });
}

/// Reciprocal grid of the discrete Fourier pair.
pub fn reciprocal_grid(grid: &GridSpec) -> GridSpec {
    let spacing = grid.points.iter().zip(&grid.spacing).map(|(&m, &h)| 2.0 * PI / (m as f64 * h)).collect();
    GridSpec::centered(grid.points.clone(), spacing).expect("reciprocal of a valid grid")
}

/// n-dimensional Fourier transform `(2π)^{-n/2} ∫ f(y) e^{-i x·y} dy`.
///
/// Exactly unitary on the grid: the output spacing on each axis is
/// `2π / (points · spacing)`. Two applications give the parity map.
pub fn fourier_nd(wf: &GriddedWaveFunction) -> GriddedWaveFunction {
    let mut planner = FftPlanner::new();
    let mut amps = wf.amplitudes.clone();
    for axis in 0..wf.n() {
        fourier_axis(&mut planner, &wf.grid, &mut amps, axis);
    }
    GriddedWaveFunction { grid: reciprocal_grid(&wf.grid), amplitudes: amps }
}

/// Inverse of [`fourier_nd`], `(2π)^{-n/2} ∫ g(p) e^{i x·p} dp`.
pub fn inverse_fourier_nd(wf: &GriddedWaveFunction) -> GriddedWaveFunction {
    let conj =
        GriddedWaveFunction { grid: wf.grid.clone(), amplitudes: wf.amplitudes.iter().map(|a| a.conj()).collect() };
    let mut out = fourier_nd(&conj);
    out.amplitudes.iter_mut().for_each(|a| *a = a.conj());
    out
}

/// Pointwise multiplication by `exp(i/2 · x^T r x)`.
pub fn chirp_apply(wf: &GriddedWaveFunction, r: &DMatrix<f64>) -> Result<GriddedWaveFunction> {
    let n = wf.n();
    if r.nrows() != n || r.ncols() != n {
        return Err(Error::Dimension(format!("chirp matrix must be {n}x{n}")));
    }
    linalg::require_symmetric(r, 1e-12)?;
    if r.iter().all(|&v| v == 0.0) {
        return Ok(wf.clone());
    }
    let mut x = vec![0.0; n];
    let amplitudes = wf
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| {
            wf.grid.point(k, &mut x);
            let mut q = 0.0;
            for i in 0..n {
                let mut row = 0.0;
                for j in 0..n {
                    row += r[(i, j)] * x[j];
                }
                q += x[i] * row;
            }
            a * Complex64::from_polar(1.0, 0.5 * q)
        })
        .collect();
    Ok(GriddedWaveFunction { grid: wf.grid.clone(), amplitudes })
}

/// `D_b f(x) = sqrt|det b| f(b x)`.
///
/// A diagonal `b` is applied exactly by rescaling the grid spacing (and
/// reversing axes with negative entries). Any other `b` is applied by
/// tensor-product cubic resampling with zero fill outside the grid; the
/// result is renormalised and is only as accurate as the interpolation.
pub fn dilate(wf: &GriddedWaveFunction, b: &DMatrix<f64>) -> Result<GriddedWaveFunction> {
    let n = wf.n();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension(format!("dilation matrix must be {n}x{n}")));
    }
    let det = b.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::Singular("dilation matrix".into()));
    }
    if linalg::is_diagonal(b, 1e-14) {
        Ok(dilate_diagonal(wf, &b.diagonal().iter().cloned().collect::<Vec<_>>()))
    } else {
        dilate_resampled(wf, b, det)
    }
}

fn dilate_diagonal(wf: &GriddedWaveFunction, diag: &[f64]) -> GriddedWaveFunction {
    let g = &wf.grid;
    let spacing: Vec<f64> = g.spacing.iter().zip(diag).map(|(h, s)| h / s.abs()).collect();
    let grid = GridSpec::centered(g.points.clone(), spacing).expect("rescaled grid");
    let amp = diag.iter().map(|s| s.abs()).product::<f64>().sqrt();
    let flips: Vec<bool> = diag.iter().map(|&s| s < 0.0).collect();
    let mut idx = vec![0; g.n];
    let mut src = vec![0; g.n];
    let amplitudes = (0..g.len())
        .map(|k| {
            g.unflatten(k, &mut idx);
            let mut flat = 0;
            for ax in 0..g.n {
                src[ax] = if flips[ax] { g.points[ax] - 1 - idx[ax] } else { idx[ax] };
                flat = flat * g.points[ax] + src[ax];
            }
            wf.amplitudes[flat] * amp
        })
        .collect();
    GriddedWaveFunction { grid, amplitudes }
}

fn catmull_rom(t: f64) -> f64 {
    let t = t.abs();
    if t < 1.0 {
        1.5 * t * t * t - 2.5 * t * t + 1.0
    } else if t < 2.0 {
        -0.5 * t * t * t + 2.5 * t * t - 4.0 * t + 2.0
    } else {
        0.0
    }
}

/// Cubic-convolution interpolation of the amplitudes at an arbitrary point.
pub(crate) fn interpolate(wf: &GriddedWaveFunction, x: &[f64]) -> Complex64 {
    let g = &wf.grid;
    let n = g.n;
    let mut base = vec![0_i64; n];
    let mut weights = vec![[0.0; 4]; n];
    for ax in 0..n {
        let t = (x[ax] - g.origin[ax]) / g.spacing[ax];
        if t < -2.0 || t > g.points[ax] as f64 + 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let f = t.floor();
        base[ax] = f as i64 - 1;
        for (o, w) in weights[ax].iter_mut().enumerate() {
            *w = catmull_rom(t - (f - 1.0 + o as f64));
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let combos = 4_usize.pow(n as u32);
    'outer: for c in 0..combos {
        let mut w = 1.0;
        let mut flat = 0_usize;
        let mut rem = c;
        for ax in 0..n {
            let o = rem % 4;
            rem /= 4;
            let i = base[ax] + o as i64;
            if i < 0 || i >= g.points[ax] as i64 {
                continue 'outer;
            }
            w *= weights[ax][o];
            flat = flat * g.points[ax] + i as usize;
        }
        acc += wf.amplitudes[flat] * w;
    }
    acc
}

fn dilate_resampled(wf: &GriddedWaveFunction, b: &DMatrix<f64>, det: f64) -> Result<GriddedWaveFunction> {
    let g = &wf.grid;
    let n = g.n;
    // Output spacing along axis j: the largest step whose image b·e_j·s
    // moves no more than one input cell along any input axis.
    let spacing: Vec<f64> = (0..n)
        .map(|j| {
            (0..n).filter(|&i| b[(i, j)] != 0.0).map(|i| g.spacing[i] / b[(i, j)].abs()).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let grid = GridSpec::centered(g.points.clone(), spacing)?;
    let amp = det.abs().sqrt();
    let mut x = vec![0.0; n];
    let mut u = vec![0.0; n];
    let amplitudes = (0..grid.len())
        .map(|k| {
            grid.point(k, &mut x);
            for i in 0..n {
                u[i] = (0..n).map(|j| b[(i, j)] * x[j]).sum();
            }
            interpolate(wf, &u) * amp
        })
        .collect();
    let mut out = GriddedWaveFunction { grid, amplitudes };
    let before = out.norm_sqr();
    if (before - wf.norm_sqr()).abs() > 1e-3 {
        log::warn!("non-diagonal dilation lost {:.3e} of the norm in resampling", wf.norm_sqr() - before);
    }
    out.normalize()?;
    Ok(out)
}

/// `|ψ|²` per sample.
pub fn probability_density(wf: &GriddedWaveFunction) -> Vec<f64> {
    wf.amplitudes.iter().map(|a| a.norm_sqr()).collect()
}
