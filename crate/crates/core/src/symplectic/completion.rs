//! Completion of a set of commuting measured quadratures to a full
//! symplectic matrix via symplectic Gram–Schmidt.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::SymplecticMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, symplectic_form};

const ISOTROPY_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-10;

/// `n` quadratures on `N` modes; row `i` holds `(a_i1..a_iN, a'_i1..a'_iN)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRowSet {
    rows: DMatrix<f64>,
}

impl QuadratureRowSet {
    /// Checks shape, pairwise commutation and linear independence.
    pub fn new(rows: DMatrix<f64>) -> Result<Self> {
        let set = Self::from_rows_unchecked(rows)?;
        set.validate()?;
        Ok(set)
    }

    /// Shape check only.
    pub fn from_rows_unchecked(rows: DMatrix<f64>) -> Result<Self> {
        if rows.nrows() == 0 || !rows.ncols().is_multiple_of(2) || rows.nrows() > rows.ncols() / 2 {
            return Err(Error::Dimension(format!(
                "need n x 2N rows with 1 <= n <= N, got {}x{}",
                rows.nrows(),
                rows.ncols()
            )));
        }
        Ok(Self { rows })
    }

    pub fn from_row_major(n: usize, modes: usize, data: &[f64]) -> Result<Self> {
        Self::new(linalg::from_row_major(n, 2 * modes, data)?)
    }

    /// The first `n` rows of a symplectic matrix.
    pub fn top_of(s: &SymplecticMatrix, n: usize) -> Result<Self> {
        if n == 0 || n > s.n() {
            return Err(Error::Dimension(format!("cannot take {n} rows of a {}-mode matrix", s.n())));
        }
        Self::new(s.matrix().rows(0, n).into_owned())
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn modes(&self) -> usize {
        self.rows.ncols() / 2
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn validate(&self) -> Result<()> {
        let j = symplectic_form(self.modes());
        let gram = &self.rows * &j * self.rows.transpose();
        let scale = self.rows.norm().powi(2).max(1.0);
        let deviation = max_abs(&gram);
        if deviation > ISOTROPY_TOL * scale {
            return Err(Error::NotIsotropic { deviation });
        }
        let sv = self.rows.clone().singular_values();
        let largest = sv.iter().cloned().fold(0.0, f64::max);
        let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if largest == 0.0 || smallest <= RANK_TOL * largest {
            return Err(Error::RankDeficient);
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RowSetJson {
    n: usize,
    #[serde(rename = "N")]
    modes: usize,
    rows: Vec<f64>,
}

impl Serialize for QuadratureRowSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RowSetJson { n: self.n(), modes: self.modes(), rows: linalg::to_row_major(&self.rows) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadratureRowSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RowSetJson::deserialize(d)?;
        QuadratureRowSet::from_row_major(raw.n, raw.modes, &raw.rows).map_err(serde::de::Error::custom)
    }
}

fn omega(j: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (u.transpose() * j * v)[(0, 0)]
}

/// Removes the components of `v` along the symplectic pairs `(e_k, f_k)`,
/// leaving a vector that is symplectically orthogonal to all of them.
fn project_out(j: &DMatrix<f64>, v: &mut DVector<f64>, pairs: &[(DVector<f64>, DVector<f64>)]) {
    for (e, f) in pairs {
        let wf = omega(j, v, f);
        let we = omega(j, v, e);
        *v -= e * wf - f * we;
    }
}

/// A symplectic matrix whose first `n` rows are exactly the given rows.
///
/// Conjugate partners for the given rows are obtained from a minimum-norm
/// solve and corrected to be mutually commuting; the remaining `N - n` pairs
/// come from symplectic Gram–Schmidt on the standard basis, pivoting on the
/// largest symplectic product.
pub fn symplectic_completion(rows: &QuadratureRowSet) -> Result<SymplecticMatrix> {
    rows.validate()?;
    let n = rows.n();
    let big_n = rows.modes();
    let dim = 2 * big_n;
    let j = symplectic_form(big_n);
    let e = rows.rows().clone();

    // F0 with E J F0^T = 1, then F = F0 - G E / 2 with G = F0 J F0^T restores
    // F J F^T = 0 without disturbing the duality.
    let ej = &e * &j;
    let gram = &ej * ej.transpose();
    let gram_inv = linalg::inverse(&gram, "row Gram matrix")?;
    let f0 = (ej.transpose() * gram_inv).transpose();
    let g = &f0 * &j * f0.transpose();
    let f = &f0 - (&g * &e) * 0.5;

    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> =
        (0..n).map(|i| (e.row(i).transpose(), f.row(i).transpose())).collect();

    let mut candidates: Vec<DVector<f64>> = (0..dim)
        .map(|k| {
            let mut v = DVector::zeros(dim);
            v[k] = 1.0;
            project_out(&j, &mut v, &pairs);
            v
        })
        .collect();

    let mut extra: Vec<(DVector<f64>, DVector<f64>)> = Vec::with_capacity(big_n - n);
    for _ in n..big_n {
        // Pivot: the pair of candidates with the largest |ω(u, v)|.
        let mut best = (0, 0, 0.0_f64);
        for (a, u) in candidates.iter().enumerate() {
            for (b, v) in candidates.iter().enumerate().skip(a + 1) {
                let w = omega(&j, u, v);
                if w.abs() > best.2.abs() {
                    best = (a, b, w);
                }
            }
        }
        if best.2.abs() < 1e-12 {
            return Err(Error::RankDeficient);
        }
        let u = candidates[best.0].clone();
        let v = &candidates[best.1] / best.2;
        let u_norm = u.norm();
        // Balance the pair so neither vector dominates.
        let scale = (v.norm() / u_norm).sqrt();
        let (u, v) = (u * scale, v / scale);
        let new_pair = [(u.clone(), v.clone())];
        for c in candidates.iter_mut() {
            project_out(&j, c, &new_pair);
        }
        extra.push((u, v));
    }
    pairs.extend(extra);

    let mut s = DMatrix::zeros(dim, dim);
    for (k, (y, q)) in pairs.iter().enumerate() {
        s.set_row(k, &y.transpose());
        s.set_row(big_n + k, &q.transpose());
    }
    // The given rows are copied verbatim.
    for i in 0..n {
        s.set_row(i, &e.row(i));
    }
    SymplecticMatrix::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{is_symplectic, random_symplectic};

    #[test]
    fn pure_position_rows() {
        for (n, big_n) in [(1, 1), (1, 3), (2, 3), (3, 3)] {
            let eye = DMatrix::<f64>::identity(2 * big_n, 2 * big_n);
            let rows = QuadratureRowSet::new(eye.rows(0, n).into_owned()).unwrap();
            let s = symplectic_completion(&rows).unwrap();
            assert_eq!(s.matrix().rows(0, n), eye.rows(0, n));
            assert!(is_symplectic(s.matrix(), 1e-10).unwrap());
        }
    }

    #[test]
    fn mixed_single_row() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rows = QuadratureRowSet::from_row_major(1, 2, &[h, 0.0, h, 0.0]).unwrap();
        let s = symplectic_completion(&rows).unwrap();
        assert!(is_symplectic(s.matrix(), 1e-10).unwrap());
        assert_eq!(s.matrix().row(0).iter().cloned().collect::<Vec<_>>(), vec![h, 0.0, h, 0.0]);
    }

    #[test]
    fn conjugate_pair_is_not_isotropic() {
        let r = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(QuadratureRowSet::new(r.clone()), Err(Error::NotIsotropic { .. })));
        let set = QuadratureRowSet::from_rows_unchecked(r).unwrap();
        assert!(matches!(symplectic_completion(&set), Err(Error::NotIsotropic { .. })));
    }

    #[test]
    fn dependent_rows_are_rank_deficient() {
        let r = DMatrix::from_row_slice(2, 4, &[1.0, 1.0, 0.0, 0.0, 2.0, 2.0, 0.0, 0.0]);
        assert!(matches!(QuadratureRowSet::new(r), Err(Error::RankDeficient)));
    }

    #[test]
    fn random_isotropic_rows_complete() {
        for seed in 0..50 {
            let big_n = 2 + (seed as usize % 3);
            let n = 1 + (seed as usize % big_n);
            let src = random_symplectic(big_n, seed);
            let rows = QuadratureRowSet::top_of(&src, n).unwrap();
            let s = symplectic_completion(&rows).unwrap();
            assert!(is_symplectic(s.matrix(), 1e-10).unwrap(), "seed {seed}");
            assert_eq!(s.matrix().rows(0, n), src.matrix().rows(0, n));
        }
    }

    #[test]
    fn json_shape() {
        let rows = QuadratureRowSet::from_row_major(1, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let v = serde_json::to_value(&rows).unwrap();
        assert_eq!(v["N"], 2);
        let back: QuadratureRowSet = serde_json::from_value(v).unwrap();
        assert_eq!(back, rows);
    }
}
