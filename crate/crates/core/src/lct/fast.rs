use std::f64::consts::PI;

use super::grid::GriddedWaveFunction;
use super::ops::{chirp_apply, dilate, fourier_nd};
use super::resolve::ResolutionPlan;
use crate::error::{Error, Result};
use crate::linalg::{self, max_abs};
use crate::symplectic::{direct_sum, rotation, SymplecticMatrix};

fn check_modes(wf: &GriddedWaveFunction, s: &SymplecticMatrix) -> Result<()> {
    if wf.n() != s.n() {
        return Err(Error::Dimension(format!("{}-dimensional wavefunction with a {}-mode transform", wf.n(), s.n())));
    }
    Ok(())
}

/// Factorized LCT: chirp `b^{-1}a`, Fourier transform, dilation `b^{-1}`,
/// chirp `d b^{-1}`.
///
/// The input is first zero-padded and refined (see [`ResolutionPlan`]) so
/// that the chirped spectrum and the output window are resolved; the output
/// grid therefore has at least as many samples as the input. The prefactor
/// is `((2π)^n |det b|)^{-1/2}` with no metaplectic phase.
pub fn lct_apply_fast(wf: &GriddedWaveFunction, s: &SymplecticMatrix) -> Result<GriddedWaveFunction> {
    check_modes(wf, s)?;
    let dec = s.decompose()?;
    let b_inv = linalg::inverse(&dec.dilation, "b block")?;
    let b_diagonal = linalg::is_diagonal(&dec.dilation, 1e-14);
    let plan = ResolutionPlan::for_blocks(wf, &dec.chirp_in, &dec.dilation, &s.c(), &s.d(), b_diagonal);
    log::debug!("resolution plan {plan:?} for {:?} samples", wf.grid.points);
    let work = plan.apply(wf)?;
    let work = chirp_apply(&work, &dec.chirp_in)?;
    let work = fourier_nd(&work);
    let work = dilate(&work, &b_inv)?;
    chirp_apply(&work, &dec.chirp_out)
}

/// How [`lct_apply_routed`] evaluated a transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Route {
    /// Invertible b block: single factorized pass.
    Fast,
    /// `b = 0`: the transform is a dilation by `a^{-1}` followed by a chirp.
    PointMap,
    /// Singular b block: a fractional Fourier step by `theta` on every mode,
    /// then the remainder `S R(theta)^{-1}`.
    Composed { theta: f64 },
}

const FALLBACK_ANGLES: [f64; 6] = [PI / 2.0, PI / 4.0, 3.0 * PI / 4.0, PI / 3.0, 2.0 * PI / 3.0, PI / 6.0];

/// LCT of `wf` by `S` for any symplectic `S`; returns the route taken.
pub fn lct_apply_routed(wf: &GriddedWaveFunction, s: &SymplecticMatrix) -> Result<(GriddedWaveFunction, Route)> {
    check_modes(wf, s)?;
    if s.b_is_invertible() {
        return Ok((lct_apply_fast(wf, s)?, Route::Fast));
    }
    let b = s.b();
    if max_abs(&b) <= 1e-14 * max_abs(s.matrix()).max(1.0) {
        // y = a x: ψ'(y) = |det a|^{-1/2} e^{i/2 y^T (c a^{-1}) y} ψ(a^{-1} y)
        let a_inv = linalg::inverse(&s.a(), "a block")?;
        let r = linalg::symmetrize(&(s.c() * &a_inv));
        let out = dilate(wf, &a_inv)?;
        return Ok((chirp_apply(&out, &r)?, Route::PointMap));
    }
    let n = s.n();
    let mut best: Option<(f64, f64, SymplecticMatrix)> = None;
    for &theta in &FALLBACK_ANGLES {
        let r = direct_sum(&vec![rotation(theta); n]);
        let rest = s.compose(&r.inverse())?;
        let rb = rest.b();
        let quality = rb.determinant().abs() / rb.norm().powi(n as i32).max(f64::MIN_POSITIVE);
        if rest.b_is_invertible() && best.as_ref().is_none_or(|(q, _, _)| quality > *q) {
            best = Some((quality, theta, rest));
        }
    }
    let (_, theta, rest) = best.ok_or(Error::NonInvertibleBBlock { det: b.determinant() })?;
    log::debug!("singular b block; composing through a rotation by {theta}");
    let first = lct_apply_fast(wf, &direct_sum(&vec![rotation(theta); n]))?;
    Ok((lct_apply_fast(&first, &rest)?, Route::Composed { theta }))
}

/// [`lct_apply_routed`] without the route.
pub fn lct_apply(wf: &GriddedWaveFunction, s: &SymplecticMatrix) -> Result<GriddedWaveFunction> {
    lct_apply_routed(wf, s).map(|(w, _)| w)
}
