//! Runs each uncertainty relation once and prints its report.

use lct_uncertainty::entropy::RenyiOrderPair;
use lct_uncertainty::harness::{
    random_rows, verify_birula, verify_guanlei, verify_huang, verify_lemma1, verify_theorem1, verify_theorem1_extended,
    verify_theorem2, verify_theorem3, TestState, VerificationReport,
};
use lct_uncertainty::lct::GridSpec;
use lct_uncertainty::states::{cat_wavefunction, GaussianState};
use lct_uncertainty::symplectic::{random_symplectic, rotation};
use num_complex::Complex64;

fn show(r: &VerificationReport) {
    println!(
        "{:18} n={} N={} {:8} lhs {:>10.6} bound {:>10.6} slack {:>10.3e} {}",
        r.relation.as_str(),
        r.n,
        r.modes,
        format!("{:?}", r.path).to_lowercase(),
        r.lhs,
        r.bound.to_f64(),
        r.slack_f64(),
        r.status
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let st: TestState = GaussianState::correlated_gaussian(2, 1).into();
    let (a, b) = (random_symplectic(2, 10), random_symplectic(2, 11));

    show(&verify_birula(&GaussianState::vacuum(3).into())?);
    show(&verify_theorem1(&st, &a, &b)?);
    show(&verify_theorem2(&st, &a, &b, RenyiOrderPair::conjugate(2.0)?)?);
    show(&verify_theorem3(&st, &a, &b)?);
    show(&verify_guanlei(&GaussianState::squeezed(&[0.3]).into(), 1.1, 0.2)?);

    let wide: TestState = GaussianState::correlated_gaussian(4, 2).into();
    show(&verify_theorem1_extended(&wide, &random_rows(2, 4, 1)?, &random_rows(2, 4, 2)?)?);
    show(&verify_huang(&wide, &random_rows(1, 4, 3)?, &random_rows(1, 4, 4)?)?);

    // Non-Gaussian state on the grid
    let cat = cat_wavefunction(Complex64::new(1.5, 0.0), &GridSpec::symmetric(1, 512, 12.0)?)?;
    show(&verify_theorem1(&cat.clone().into(), &rotation(0.3), &rotation(1.4))?);
    show(&verify_lemma1(&cat, &rotation(0.3), &rotation(1.4))?);

    // Identical measurements: the bound is -inf
    show(&verify_theorem1(&st, &a, &a)?);
    Ok(())
}
