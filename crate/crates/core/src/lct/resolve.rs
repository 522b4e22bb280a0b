//! Sampling control for the factorized transform: the chirp in front of the
//! Fourier step widens the spectrum, and the b block stretches the output
//! window, so the input is zero-padded and band-limited-refined until both
//! are resolved.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::{GridSpec, GriddedWaveFunction};
use super::ops::{fourier_nd, inverse_fourier_nd};
use crate::error::{Error, Result};

/// Density below this fraction of the peak is treated as outside the support.
pub const SUPPORT_REL: f64 = 1e-20;

/// Spectrum oversampling ahead of a non-diagonal dilation: the cubic
/// resampling error falls roughly as the fourth power of this factor.
pub const RESAMPLE_OVERSAMPLE: f64 = 4.0;

/// Upper bound on the number of samples the fast path will allocate.
pub const MAX_SAMPLES: usize = 1 << 22;

/// Per-axis half-width of the region where `|ψ|²` exceeds
/// `SUPPORT_REL · max |ψ|²`.
pub fn support_half_widths(wf: &GriddedWaveFunction) -> Vec<f64> {
    let g = &wf.grid;
    let peak = wf.amplitudes.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    let thr = peak * SUPPORT_REL;
    let mut idx = vec![0; g.n];
    let mut half = vec![0.0_f64; g.n];
    for (k, a) in wf.amplitudes.iter().enumerate() {
        if a.norm_sqr() >= thr && peak > 0.0 {
            g.unflatten(k, &mut idx);
            for ax in 0..g.n {
                half[ax] = half[ax].max(g.coord(ax, idx[ax]).abs());
            }
        }
    }
    half
}

/// Smallest admissible integer factor `>= need` that keeps a centred grid of
/// `m` points aligned when enlarged (`(f - 1) m` even).
pub(crate) fn grow_factor(need: f64, m: usize) -> usize {
    if need.is_nan() || need <= 1.0 {
        return 1;
    }
    let base = need.ceil() as usize;
    if m.is_multiple_of(2) {
        base.next_power_of_two()
    } else if base % 2 == 1 {
        base
    } else {
        base + 1
    }
}

/// Embeds the amplitudes in a grid with `factors[i] · points[i]` samples per
/// axis and the same spacing, filling with zeros.
pub fn zero_pad(wf: &GriddedWaveFunction, factors: &[usize]) -> Result<GriddedWaveFunction> {
    let g = &wf.grid;
    if factors.iter().all(|&f| f == 1) {
        return Ok(wf.clone());
    }
    let points: Vec<usize> = g.points.iter().zip(factors).map(|(m, f)| m * f).collect();
    let offsets: Vec<usize> =
        g.points
            .iter()
            .zip(&points)
            .map(|(&m, &mm)| {
                if (mm - m) % 2 != 0 {
                    Err(Error::Invalid("misaligned padding factor".into()))
                } else {
                    Ok((mm - m) / 2)
                }
            })
            .collect::<Result<_>>()?;
    let grid = GridSpec::centered(points, g.spacing.clone())?;
    let mut amps = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut idx = vec![0; g.n];
    for (k, a) in wf.amplitudes.iter().enumerate() {
        g.unflatten(k, &mut idx);
        let mut flat = 0;
        for ax in 0..g.n {
            flat = flat * grid.points[ax] + idx[ax] + offsets[ax];
        }
        amps[flat] = *a;
    }
    GriddedWaveFunction::new(grid, amps)
}

/// Band-limited (trigonometric) interpolation onto a grid `factors` times
/// finer over the same window, by zero-padding the spectrum.
pub fn refine(wf: &GriddedWaveFunction, factors: &[usize]) -> Result<GriddedWaveFunction> {
    if factors.iter().all(|&f| f == 1) {
        return Ok(wf.clone());
    }
    let spectrum = fourier_nd(wf);
    let padded = zero_pad(&spectrum, factors)?;
    let mut out = inverse_fourier_nd(&padded);
    // Spacing is h/q in exact arithmetic; pin it to avoid drift.
    let spacing: Vec<f64> = wf.grid.spacing.iter().zip(factors).map(|(h, &q)| h / q as f64).collect();
    out.grid = GridSpec::centered(out.grid.points.clone(), spacing)?;
    Ok(out)
}

/// Padding and refinement factors for one factorized transform.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionPlan {
    pub pad: Vec<usize>,
    pub refine: Vec<usize>,
}

impl ResolutionPlan {
    pub fn identity(n: usize) -> Self {
        Self { pad: vec![1; n], refine: vec![1; n] }
    }

    /// Chooses factors so that (i) the chirped input spectrum fits below the
    /// Nyquist frequency, (ii) for a diagonal b block, the output grid
    /// resolves the output spectrum and (iii) for any other b block, the
    /// spectrum is oversampled by [`RESAMPLE_OVERSAMPLE`] before resampling.
    pub fn for_blocks(
        wf: &GriddedWaveFunction,
        chirp_in: &DMatrix<f64>,
        b: &DMatrix<f64>,
        c: &DMatrix<f64>,
        d: &DMatrix<f64>,
        b_diagonal: bool,
    ) -> Self {
        let g = &wf.grid;
        let n = g.n;
        let x = support_half_widths(wf);
        let p = support_half_widths(&fourier_nd(wf));
        let mut plan = Self::identity(n);
        for i in 0..n {
            let need = p[i] + (0..n).map(|j| chirp_in[(i, j)].abs() * x[j]).sum::<f64>();
            let nyquist = PI / g.spacing[i];
            plan.refine[i] = grow_factor(need / nyquist, g.points[i]);
            if b_diagonal {
                let q_out: f64 = (0..n).map(|j| c[(i, j)].abs() * x[j] + d[(i, j)].abs() * p[j]).sum();
                let window = g.points[i] as f64 * g.spacing[i] / 2.0;
                plan.pad[i] = grow_factor(q_out * b[(i, i)].abs() / window, g.points[i]);
            } else {
                let window = g.points[i] as f64 * g.spacing[i] / 2.0;
                plan.pad[i] = grow_factor(RESAMPLE_OVERSAMPLE * x[i] / window, g.points[i]);
            }
        }
        plan.clamp(g);
        plan
    }

    fn total(&self, g: &GridSpec) -> usize {
        (0..g.n).map(|i| g.points[i] * self.pad[i] * self.refine[i]).product()
    }

    fn clamp(&mut self, g: &GridSpec) {
        let wanted = self.total(g);
        while self.total(g) > MAX_SAMPLES {
            // Shrink the largest factor first; padding goes before refinement.
            let (ax, is_pad) = (0..g.n)
                .flat_map(|i| [(i, true), (i, false)])
                .max_by_key(|&(i, is_pad)| if is_pad { self.pad[i] * 2 + 1 } else { self.refine[i] * 2 })
                .expect("non-empty grid");
            let f = if is_pad { &mut self.pad[ax] } else { &mut self.refine[ax] };
            if *f == 1 {
                break;
            }
            *f = if g.points[ax].is_multiple_of(2) { *f / 2 } else { (*f - 2).max(1) };
        }
        if self.total(g) < wanted {
            log::warn!("resolution capped at {} samples (wanted {wanted}); the transform may alias", self.total(g));
        }
    }

    pub fn is_identity(&self) -> bool {
        self.pad.iter().chain(&self.refine).all(|&f| f == 1)
    }

    pub fn apply(&self, wf: &GriddedWaveFunction) -> Result<GriddedWaveFunction> {
        if self.is_identity() {
            return Ok(wf.clone());
        }
        refine(&zero_pad(wf, &self.pad)?, &self.refine)
    }
}
