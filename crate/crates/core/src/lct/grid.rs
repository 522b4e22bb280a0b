use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid centred on the origin: axis `i` has samples
/// `origin[i] + k * spacing[i]`, `k = 0..points[i]`, with
/// `origin[i] = -spacing[i] * (points[i] - 1) / 2`. Flat storage is
/// row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub points: Vec<usize>,
    pub spacing: Vec<f64>,
    pub origin: Vec<f64>,
}

impl GridSpec {
    pub fn centered(points: Vec<usize>, spacing: Vec<f64>) -> Result<Self> {
        let origin = points.iter().zip(&spacing).map(|(&m, &h)| -h * (m as f64 - 1.0) / 2.0).collect();
        let g = Self { n: points.len(), points, spacing, origin };
        g.validate()?;
        Ok(g)
    }

    /// `points` samples per axis spanning `[-half_extent, half_extent]`.
    pub fn symmetric(n: usize, points: usize, half_extent: f64) -> Result<Self> {
        if points < 2 || half_extent.is_nan() || half_extent <= 0.0 {
            return Err(Error::Invalid(format!(
                "symmetric grid needs >= 2 points and a positive extent (got {points}, {half_extent})"
            )));
        }
        let h = 2.0 * half_extent / (points as f64 - 1.0);
        Self::centered(vec![points; n], vec![h; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.points.len() != self.n || self.spacing.len() != self.n || self.origin.len() != self.n {
            return Err(Error::Dimension(format!("grid with n = {} needs per-axis points/spacing/origin", self.n)));
        }
        for i in 0..self.n {
            if self.points[i] == 0 {
                return Err(Error::Invalid("grid axis with zero points".into()));
            }
            if !(self.spacing[i].is_finite() && self.spacing[i] > 0.0) {
                return Err(Error::Invalid(format!("non-positive spacing on axis {i}")));
            }
            let expected = -self.spacing[i] * (self.points[i] as f64 - 1.0) / 2.0;
            if (self.origin[i] - expected).abs() > 1e-9 * expected.abs().max(self.spacing[i]) {
                return Err(Error::Invalid(format!(
                    "grid axis {i} is not centred: origin {} but expected {expected}",
                    self.origin[i]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn coord(&self, axis: usize, k: usize) -> f64 {
        self.origin[axis] + k as f64 * self.spacing[axis]
    }

    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        (0..self.points[axis]).map(|k| self.coord(axis, k)).collect()
    }

    /// Half-width of the sampled interval on `axis`.
    pub fn half_extent(&self, axis: usize) -> f64 {
        -self.origin[axis]
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.points[axis + 1..].iter().product()
    }

    /// Multi-index of a flat position.
    pub fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.n).rev() {
            out[axis] = flat % self.points[axis];
            flat /= self.points[axis];
        }
    }

    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let mut idx = vec![0; self.n];
        self.unflatten(flat, &mut idx);
        for axis in 0..self.n {
            out[axis] = self.coord(axis, idx[axis]);
        }
    }

    /// Calls `f` with the flat indices of every line parallel to `axis`.
    pub(crate) fn for_each_line(&self, axis: usize, mut f: impl FnMut(&[usize])) {
        let m = self.points[axis];
        let stride = self.stride(axis);
        let outer: usize = self.points[..axis].iter().product();
        let mut idx = vec![0; m];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * m * stride + inner;
                for (k, slot) in idx.iter_mut().enumerate() {
                    *slot = base + k * stride;
                }
                f(&idx);
            }
        }
    }
}

/// Complex amplitudes on a [`GridSpec`], normalised so that
/// `Σ |ψ_k|² · cell_volume = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedWaveFunction {
    pub grid: GridSpec,
    pub amplitudes: Vec<Complex64>,
}

impl GriddedWaveFunction {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if amplitudes.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "grid has {} samples but {} amplitudes were given",
                grid.len(),
                amplitudes.len()
            )));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        grid.validate()?;
        let mut x = vec![0.0; grid.n];
        let amps = (0..grid.len())
            .map(|k| {
                grid.point(k, &mut x);
                f(&x)
            })
            .collect();
        Self::new(grid, amps)
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let nrm = self.norm_sqr();
        if !(nrm.is_finite() && nrm > 0.0) {
            return Err(Error::Invalid("cannot normalise a zero wavefunction".into()));
        }
        let s = 1.0 / nrm.sqrt();
        self.amplitudes.iter_mut().for_each(|a| *a *= s);
        Ok(())
    }

    /// Probability mass within `cells` samples of any grid edge.
    pub fn edge_mass(&self, cells: usize) -> f64 {
        let g = &self.grid;
        let mut idx = vec![0; g.n];
        let vol = g.cell_volume();
        let mut mass = 0.0;
        for (k, a) in self.amplitudes.iter().enumerate() {
            g.unflatten(k, &mut idx);
            let near = (0..g.n).any(|ax| idx[ax] < cells || idx[ax] + cells >= g.points[ax]);
            if near {
                mass += a.norm_sqr() * vol;
            }
        }
        mass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid_is_centred() {
        let g = GridSpec::symmetric(2, 5, 2.0).unwrap();
        assert_eq!(g.axis_coords(0), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(g.len(), 25);
        assert_eq!(g.cell_volume(), 1.0);
    }

    #[test]
    fn off_centre_origin_is_rejected() {
        let g = GridSpec { n: 1, points: vec![4], spacing: vec![1.0], origin: vec![0.0] };
        assert!(g.validate().is_err());
        let g = GridSpec { n: 1, points: vec![4], spacing: vec![-1.0], origin: vec![1.5] };
        assert!(g.validate().is_err());
    }

    #[test]
    fn lines_cover_grid_once() {
        let g = GridSpec::centered(vec![3, 4, 2], vec![1.0; 3]).unwrap();
        for axis in 0..3 {
            let mut seen = vec![0; g.len()];
            g.for_each_line(axis, |line| {
                assert_eq!(line.len(), g.points[axis]);
                line.iter().for_each(|&k| seen[k] += 1);
            });
            assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
