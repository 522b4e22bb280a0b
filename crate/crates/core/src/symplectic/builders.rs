use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SymplecticMatrix;
use crate::error::Result;
use crate::linalg;

pub fn identity(n: usize) -> SymplecticMatrix {
    SymplecticMatrix::from_matrix_unchecked(DMatrix::identity(2 * n, 2 * n))
}

/// Single-mode phase-space rotation mapping `x` to `x cos θ + p sin θ`.
pub fn rotation(theta: f64) -> SymplecticMatrix {
    let (s, c) = theta.sin_cos();
    SymplecticMatrix::from_matrix_unchecked(DMatrix::from_row_slice(2, 2, &[c, s, -s, c]))
}

/// The n-dimensional Fourier transform `[[0, 1], [-1, 0]]`, with exact zeros.
pub fn fourier_form(n: usize) -> SymplecticMatrix {
    SymplecticMatrix::from_matrix_unchecked(linalg::symplectic_form(n))
}

/// Block-diagonal combination acting on the union of the modes, keeping the
/// `(x..., p...)` ordering.
pub fn direct_sum(parts: &[SymplecticMatrix]) -> SymplecticMatrix {
    let n: usize = parts.iter().map(|p| p.n()).sum();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    let mut off = 0;
    for p in parts {
        let k = p.n();
        let src = p.matrix();
        for i in 0..k {
            for j in 0..k {
                m[(off + i, off + j)] = src[(i, j)];
                m[(off + i, n + off + j)] = src[(i, k + j)];
                m[(n + off + i, off + j)] = src[(k + i, j)];
                m[(n + off + i, n + off + j)] = src[(k + i, k + j)];
            }
        }
        off += k;
    }
    SymplecticMatrix::from_matrix_unchecked(m)
}

/// `[[1, 0], [r, 1]]`; `r` must be symmetric.
pub fn chirp(r: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    let n = linalg::require_square(r, "chirp matrix")?;
    linalg::require_symmetric(r, 1e-12)?;
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m.view_mut((n, 0), (n, n)).copy_from(r);
    Ok(SymplecticMatrix::from_matrix_unchecked(m))
}

/// `[[b, 0], [0, b^{-T}]]`.
pub fn dilation(b: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    let n = linalg::require_square(b, "dilation matrix")?;
    let inv_t = linalg::inverse(b, "dilation matrix")?.transpose();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(b);
    m.view_mut((n, n), (n, n)).copy_from(&inv_t);
    Ok(SymplecticMatrix::from_matrix_unchecked(m))
}

/// Single-parameter squeezers, `x_k -> e^{-s_k} x_k`, `p_k -> e^{s_k} p_k`.
pub fn squeezer(s: &[f64]) -> SymplecticMatrix {
    let n = s.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (k, sk) in s.iter().enumerate() {
        m[(k, k)] = (-sk).exp();
        m[(n + k, n + k)] = sk.exp();
    }
    SymplecticMatrix::from_matrix_unchecked(m)
}

fn beam_splitter(n: usize, j: usize, k: usize, t: f64) -> DMatrix<f64> {
    let (s, c) = t.sin_cos();
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for off in [0, n] {
        m[(off + j, off + j)] = c;
        m[(off + j, off + k)] = s;
        m[(off + k, off + j)] = -s;
        m[(off + k, off + k)] = c;
    }
    m
}

fn phase_shifts(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let parts: Vec<_> = (0..n).map(|_| rotation(rng.random_range(0.0..2.0 * PI))).collect();
    direct_sum(&parts).into_matrix()
}

fn passive(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut m = phase_shifts(n, rng);
    for j in 0..n {
        for k in (j + 1)..n {
            m = beam_splitter(n, j, k, rng.random_range(0.0..2.0 * PI)) * m;
        }
    }
    phase_shifts(n, rng) * m
}

/// Deterministic random symplectic matrix: passive · squeeze · passive · chirp,
/// each factor exactly symplectic. Squeezing and chirp strengths are kept
/// moderate so that gridded states stay resolvable.
pub fn random_symplectic(n: usize, seed: u64) -> SymplecticMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p1 = passive(n, &mut rng);
    let squeeze: Vec<f64> = (0..n).map(|_| rng.random_range(-0.6..0.6)).collect();
    let z = squeezer(&squeeze).into_matrix();
    let p2 = passive(n, &mut rng);
    let mut r = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-0.6..0.6);
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    let c = chirp(&r).expect("symmetric by construction").into_matrix();
    SymplecticMatrix::from_matrix_unchecked(p1 * z * p2 * c)
}
