use std::f64::consts::{E, PI};

use nalgebra::DMatrix;

use super::SymplecticMatrix;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::linalg::symplectic_form;

/// Relative threshold on the smallest singular value below which `det K` is
/// treated as exactly zero.
pub const DEGENERATE_REL: f64 = 1e-12;

/// Commutator table `K_ij = [y_i, z_j] = i m_ij`, stored by its real factor.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorMatrix {
    m: DMatrix<f64>,
    scale: f64,
}

impl CommutatorMatrix {
    /// `scale` is the magnitude of the rows the table was built from; it sets
    /// the rounding floor for the degeneracy test.
    pub fn new(m: DMatrix<f64>, scale: f64) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "commutator matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { m, scale: scale.max(f64::MIN_POSITIVE) })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    /// Real factor `m` with `K = i m`.
    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// `|det K| = |det m|`, forced to zero when the table is degenerate.
    pub fn det_abs(&self) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            self.m.determinant().abs()
        }
    }

    pub fn is_degenerate(&self) -> bool {
        let sv = self.m.clone().singular_values();
        let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        smallest <= DEGENERATE_REL * self.scale
    }

    /// `ln |det K|`, or `-inf` for a degenerate table.
    pub fn ln_abs_det(&self) -> ExtReal {
        if self.is_degenerate() {
            ExtReal::NegInfinity
        } else {
            ExtReal::Finite(self.m.determinant().abs().ln())
        }
    }

    /// `ln((πe)^n |det K|)`.
    pub fn shannon_bound(&self) -> ExtReal {
        match self.ln_abs_det() {
            ExtReal::Finite(l) => ExtReal::Finite(self.n() as f64 * (PI * E).ln() + l),
            other => other,
        }
    }
}

/// `m = R_A J R_B^T` for measured rows `R_A`, `R_B` (each n×2N).
pub fn commutator_of_rows(rows_a: &DMatrix<f64>, rows_b: &DMatrix<f64>) -> Result<CommutatorMatrix> {
    if rows_a.shape() != rows_b.shape() || !rows_a.ncols().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "row sets must share an n x 2N shape, got {:?} and {:?}",
            rows_a.shape(),
            rows_b.shape()
        )));
    }
    let j = symplectic_form(rows_a.ncols() / 2);
    let m = rows_a * j * rows_b.transpose();
    CommutatorMatrix::new(m, rows_a.norm() * rows_b.norm())
}

/// `K_ij = [y_i, z_j]` for `y = top rows of A`, `z = top rows of B`;
/// `m = A_a B_b^T - A_b B_a^T`.
pub fn commutator_matrix(a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<CommutatorMatrix> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!("commutator of {}-mode and {}-mode transforms", a.n(), b.n())));
    }
    commutator_of_rows(&a.top_rows(), &b.top_rows())
}

/// `ln((πe)^n |det K|)`, `-inf` when `det K = 0`.
pub fn shannon_bound(a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<ExtReal> {
    Ok(commutator_matrix(a, b)?.shannon_bound())
}

/// `B_b A_a^T - B_a A_b^T`, the matrix whose determinant sets the bound
/// between the two transforms' output densities.
pub fn lct_pair_matrix(a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<DMatrix<f64>> {
    if a.n() != b.n() {
        return Err(Error::Dimension("mode mismatch".into()));
    }
    Ok(b.b() * a.a().transpose() - b.a() * a.b().transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::symplectic::{fourier_form, identity, random_symplectic, rotation};

    #[test]
    fn identity_against_fourier_is_unit() {
        for n in 1..=3 {
            let k = commutator_matrix(&identity(n), &fourier_form(n)).unwrap();
            // K = [x, p] = i·1
            assert_eq!(k.m(), &DMatrix::identity(n, n));
            assert_eq!(k.det_abs(), 1.0);
        }
    }

    #[test]
    fn same_measurement_is_degenerate() {
        for seed in 0..10 {
            let a = random_symplectic(3, seed);
            let k = commutator_matrix(&a, &a).unwrap();
            assert!(max_abs(k.m()) < 1e-13);
            assert_eq!(k.det_abs(), 0.0);
            assert_eq!(k.shannon_bound(), ExtReal::NegInfinity);
        }
    }

    #[test]
    fn rotated_quadratures_give_sine() {
        for (t, p) in [(0.3, 1.1), (-0.5, 2.0), (1.0, 1.0 + PI / 6.0)] {
            let k = commutator_matrix(&rotation(t), &rotation(p)).unwrap();
            assert!((k.det_abs() - (t - p).sin().abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn shannon_bound_values() {
        let b = shannon_bound(&identity(1), &fourier_form(1)).unwrap();
        assert!((b.finite().unwrap() - 2.144_729_885_849_4).abs() < 1e-12);
        let b = shannon_bound(&rotation(0.0), &rotation(PI / 6.0)).unwrap();
        assert!((b.finite().unwrap() - (PI * E / 2.0).ln()).abs() < 1e-12);
        assert!((b.finite().unwrap() - 1.451_582_705).abs() < 1e-8);
    }

    #[test]
    fn lct_pair_matrix_is_transpose_of_commutator() {
        let a = random_symplectic(2, 1);
        let b = random_symplectic(2, 2);
        let k = commutator_matrix(&a, &b).unwrap();
        let lm = lct_pair_matrix(&a, &b).unwrap();
        assert!(max_abs(&(lm - k.m().transpose())) < 1e-12);
    }
}
