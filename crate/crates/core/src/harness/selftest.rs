//! A quick invariant suite behind `lctur selftest`.

use std::f64::consts::{E, PI};

use serde::Serialize;

use super::report::Status;
use super::verify::{verify_birula, verify_guanlei, verify_theorem1, verify_theorem3, TestState};
use crate::entropy::shannon_entropy;
use crate::error::Result;
use crate::lct::{density_l2_distance, fourier_nd, lct_apply_direct, lct_apply_fast, probability_density, GridSpec};
use crate::states::{fock_wavefunction, gaussian_wavefunction, GaussianState};
use crate::symplectic::{fourier_form, identity, random_symplectic, rotation, SymplecticMatrix};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn selftest() -> Vec<Check> {
    vec![
        check(
            "vacuum saturates the position-momentum bound",
            (|| {
                let mut worst = 0.0_f64;
                for n in 1..=3 {
                    worst = worst.max(verify_birula(&GaussianState::vacuum(n).into())?.slack_f64().abs());
                }
                Ok((worst <= 1e-9, format!("max |slack| {worst:e}")))
            })(),
        ),
        check(
            "rotated quadratures: slack = -ln|sin(theta - phi)|",
            (|| {
                let mut worst = 0.0_f64;
                let st: TestState = GaussianState::vacuum(1).into();
                for k in 1..20 {
                    let gap = PI * k as f64 / 20.0;
                    let r = verify_guanlei(&st, gap + 0.1, 0.1)?;
                    worst = worst.max((r.slack_f64() + gap.sin().ln()).abs());
                }
                Ok((worst <= 1e-9, format!("max deviation {worst:e}")))
            })(),
        ),
        check(
            "random Gaussian tuples respect the entropic and covariance bounds",
            (|| {
                let mut worst = f64::INFINITY;
                for seed in 0..60u64 {
                    let n = 1 + (seed % 3) as usize;
                    let st: TestState = GaussianState::correlated_gaussian(n, 1000 + seed).into();
                    let a = random_symplectic(n, 2000 + seed);
                    let b = random_symplectic(n, 3000 + seed);
                    for r in [verify_theorem1(&st, &a, &b)?, verify_theorem3(&st, &a, &b)?] {
                        if r.status == Status::Violation {
                            return Ok((false, format!("seed {seed}: {} slack {}", r.relation, r.slack)));
                        }
                        worst = worst.min(r.slack_f64());
                    }
                }
                Ok((true, format!("min slack {worst:e}")))
            })(),
        ),
        check(
            "identical measurements give a vacuous bound",
            (|| {
                let r = verify_theorem1(&GaussianState::vacuum(2).into(), &identity(2), &identity(2))?;
                Ok((r.status == Status::Vacuous, format!("status {}", r.status)))
            })(),
        ),
        check(
            "fast transform agrees with direct quadrature",
            (|| {
                let grid = GridSpec::symmetric(1, 256, 10.0)?;
                let wf = fock_wavefunction(&[1], &grid)?;
                let s = rotation(0.7).compose(&SymplecticMatrix::from_row_major(1, &[1.0, 0.0, 0.3, 1.0])?)?;
                let fast = lct_apply_fast(&wf, &s)?;
                let direct = lct_apply_direct(&wf, &s, &fast.grid)?;
                let err = density_l2_distance(&fast, &direct)?;
                Ok((err <= 1e-6, format!("L2 density error {err:e}")))
            })(),
        ),
        check(
            "Fourier matrix matches the dedicated transform",
            (|| {
                let grid = GridSpec::symmetric(1, 256, 10.0)?;
                let wf = gaussian_wavefunction(&GaussianState::squeezed(&[0.3]), &grid)?;
                let a = crate::lct::lct_apply(&wf, &fourier_form(1))?;
                let b = fourier_nd(&wf);
                let err = density_l2_distance(&a, &b)?;
                Ok((err <= 1e-12, format!("L2 density error {err:e}")))
            })(),
        ),
        check(
            "grid entropy of the vacuum matches the closed form",
            (|| {
                let grid = GridSpec::symmetric(1, 512, 12.0)?;
                let wf = gaussian_wavefunction(&GaussianState::vacuum(1), &grid)?;
                let h = shannon_entropy(&probability_density(&wf), &grid)?;
                let err = (h - 0.5 * (PI * E).ln()).abs();
                Ok((err <= 1e-6, format!("error {err:e}")))
            })(),
        ),
    ]
}
