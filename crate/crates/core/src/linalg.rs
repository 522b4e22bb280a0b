//! Small dense helpers shared by the phase-space modules.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Standard symplectic form `[[0, 1], [-1, 0]]` for `n` modes.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn require_square(m: &DMatrix<f64>, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("{what} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(m.nrows())
}

pub fn require_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    let asym = max_asymmetry(m);
    let scale = max_abs(m).max(1.0);
    if asym > tol * scale {
        return Err(Error::Asymmetric(asym));
    }
    Ok(())
}

pub fn inverse(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    m.clone().try_inverse().ok_or_else(|| Error::Singular(what.to_string()))
}

/// Symmetric part, used to scrub rounding asymmetry from products that are
/// symmetric in exact arithmetic.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Determinant of a symmetric positive-definite matrix via Cholesky.
pub fn spd_determinant(m: &DMatrix<f64>, what: &str) -> Result<f64> {
    let chol = nalgebra::Cholesky::new(symmetrize(m)).ok_or_else(|| Error::NotPositiveDefinite(what.to_string()))?;
    let l = chol.l();
    let det = l.diagonal().iter().map(|v| v * v).product::<f64>();
    if det.is_nan() || det <= 0.0 {
        return Err(Error::NotPositiveDefinite(what.to_string()));
    }
    Ok(det)
}

pub fn is_diagonal(m: &DMatrix<f64>, rel_tol: f64) -> bool {
    let scale = m.diagonal().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].abs() > rel_tol * scale {
                return false;
            }
        }
    }
    true
}

/// Row-major flattening.
pub fn to_row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<DMatrix<f64>> {
    if data.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            data.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_squares_to_minus_identity() {
        let j = symplectic_form(3);
        let jj = &j * &j;
        assert!(max_abs(&(jj + DMatrix::identity(6, 6))) == 0.0);
    }

    #[test]
    fn spd_determinant_rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(spd_determinant(&m, "m").is_err());
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((spd_determinant(&m, "m").unwrap() - 3.0).abs() < 1e-14);
    }
}
