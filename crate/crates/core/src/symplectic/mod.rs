//! Symplectic phase-space algebra.
//!
//! Quadratures are ordered `(x_1..x_n, p_1..p_n)` with `[x_k, p_l] = i δ_kl`
//! (ħ = 1), so the symplectic form is `J = [[0, 1], [-1, 0]]`. A matrix `S`
//! maps input quadratures `r` to output quadratures `S r`; its first `n` rows
//! are the jointly measured quadratures of the associated Gaussian measurement.

mod builders;
mod commutator;
mod completion;

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, symplectic_form};

pub use builders::{chirp, dilation, direct_sum, fourier_form, identity, random_symplectic, rotation, squeezer};
pub use commutator::{commutator_matrix, commutator_of_rows, lct_pair_matrix, shannon_bound, CommutatorMatrix};
pub use completion::{symplectic_completion, QuadratureRowSet};

/// Tolerance used when a constructor validates `S J S^T = J`, relative to
/// `max(1, |S|_max^2)`.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// `|det b| < SINGULAR_B_REL * |b|_F^n` marks the b block as singular.
pub const SINGULAR_B_REL: f64 = 1e-12;

/// True iff `max |S J S^T - J| <= tol`.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let dim = linalg::require_square(s, "symplectic candidate")?;
    if dim % 2 != 0 {
        return Err(Error::Dimension(format!("symplectic matrices have even dimension, got {dim}")));
    }
    Ok(symplectic_deviation(s) <= tol)
}

fn symplectic_deviation(s: &DMatrix<f64>) -> f64 {
    let j = symplectic_form(s.nrows() / 2);
    max_abs(&(s * &j * s.transpose() - j))
}

#[derive(Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    m: DMatrix<f64>,
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymplecticMatrix(n={}) {}", self.n, self.m)
    }
}

impl SymplecticMatrix {
    /// Validates `S J S^T = J` at [`SYMPLECTIC_TOL`] (scaled by the entry size).
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let dim = linalg::require_square(&m, "symplectic matrix")?;
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::Dimension(format!("symplectic matrices have positive even dimension, got {dim}")));
        }
        let scale = max_abs(&m).powi(2).max(1.0);
        let deviation = symplectic_deviation(&m);
        if deviation > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(Self { n: dim / 2, m })
    }

    /// Skips validation; callers guarantee the symplectic property.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows().is_multiple_of(2));
        Self { n: m.nrows() / 2, m }
    }

    pub fn from_blocks(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        for (name, blk) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if blk.nrows() != n || blk.ncols() != n {
                return Err(Error::Dimension(format!(
                    "block {name} must be {n}x{n}, got {}x{}",
                    blk.nrows(),
                    blk.ncols()
                )));
            }
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(b);
        m.view_mut((n, 0), (n, n)).copy_from(c);
        m.view_mut((n, n), (n, n)).copy_from(d);
        Self::new(m)
    }

    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(linalg::from_row_major(2 * n, 2 * n, entries)?)
    }

    /// Mode count.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn a(&self) -> DMatrix<f64> {
        self.m.view((0, 0), (self.n, self.n)).into_owned()
    }
    pub fn b(&self) -> DMatrix<f64> {
        self.m.view((0, self.n), (self.n, self.n)).into_owned()
    }
    pub fn c(&self) -> DMatrix<f64> {
        self.m.view((self.n, 0), (self.n, self.n)).into_owned()
    }
    pub fn d(&self) -> DMatrix<f64> {
        self.m.view((self.n, self.n), (self.n, self.n)).into_owned()
    }

    /// The measured rows `[a b]` (n×2n).
    pub fn top_rows(&self) -> DMatrix<f64> {
        self.m.view((0, 0), (self.n, 2 * self.n)).into_owned()
    }

    pub fn deviation(&self) -> f64 {
        symplectic_deviation(&self.m)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        max_abs(&(&self.m - DMatrix::identity(2 * self.n, 2 * self.n))) <= tol
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "cannot compose {}-mode and {}-mode symplectic matrices",
                self.n, other.n
            )));
        }
        Ok(Self::from_matrix_unchecked(&self.m * &other.m))
    }

    /// `J S^T J^T`, i.e. `[[d^T, -b^T], [-c^T, a^T]]`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let n = self.n;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.d().transpose());
        m.view_mut((0, n), (n, n)).copy_from(&(-self.b().transpose()));
        m.view_mut((n, 0), (n, n)).copy_from(&(-self.c().transpose()));
        m.view_mut((n, n), (n, n)).copy_from(&self.a().transpose());
        Self::from_matrix_unchecked(m)
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        Self::from_matrix_unchecked(self.m.transpose())
    }

    /// Whether the b block passes the singularity threshold.
    pub fn b_is_invertible(&self) -> bool {
        b_block_det(&self.b()).is_ok()
    }

    /// Chirp–dilation–Fourier–chirp factorization.
    pub fn decompose(&self) -> Result<Decomposition> {
        let b = self.b();
        b_block_det(&b)?;
        let b_inv = linalg::inverse(&b, "b block")?;
        let chirp_in = linalg::symmetrize(&(&b_inv * self.a()));
        let chirp_out = linalg::symmetrize(&(self.d() * &b_inv));
        Ok(Decomposition { chirp_in, dilation: b, chirp_out })
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        linalg::to_row_major(&self.m)
    }
}

/// Determinant of `b` after checking it against the singularity threshold.
pub(crate) fn b_block_det(b: &DMatrix<f64>) -> Result<f64> {
    let n = b.nrows() as i32;
    let det = b.determinant();
    let norm = b.norm();
    if norm == 0.0 || det.abs() < SINGULAR_B_REL * norm.powi(n) {
        return Err(Error::NonInvertibleBBlock { det });
    }
    Ok(det)
}

/// `S = [[1,0],[chirp_out,1]] · [[b,0],[0,b^{-T}]] · J · [[1,0],[chirp_in,1]]`
/// with `chirp_in = b^{-1} a`, `chirp_out = d b^{-1}`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub chirp_in: DMatrix<f64>,
    pub dilation: DMatrix<f64>,
    pub chirp_out: DMatrix<f64>,
}

impl Decomposition {
    /// Multiplies the four factors back together.
    pub fn reassemble(&self) -> Result<DMatrix<f64>> {
        let n = self.dilation.nrows();
        let b_inv_t = linalg::inverse(&self.dilation, "dilation")?.transpose();
        let chirp_out = builders::chirp(&self.chirp_out)?.into_matrix();
        let chirp_in = builders::chirp(&self.chirp_in)?.into_matrix();
        let mut dil = DMatrix::zeros(2 * n, 2 * n);
        dil.view_mut((0, 0), (n, n)).copy_from(&self.dilation);
        dil.view_mut((n, n), (n, n)).copy_from(&b_inv_t);
        Ok(chirp_out * dil * symplectic_form(n) * chirp_in)
    }
}

#[derive(Serialize, Deserialize)]
struct SymplecticJson {
    n: usize,
    entries: Vec<f64>,
}

impl Serialize for SymplecticMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymplecticJson { n: self.n, entries: self.to_row_major() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymplecticMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SymplecticJson::deserialize(d)?;
        SymplecticMatrix::from_row_major(raw.n, &raw.entries).map_err(serde::de::Error::custom)
    }
}
