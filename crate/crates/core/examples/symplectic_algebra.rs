//! Symplectic matrices, their factorization and the commutator matrix that
//! sets the entropic bound.

use lct_uncertainty::symplectic::{
    commutator_matrix, direct_sum, fourier_form, identity, random_symplectic, rotation, shannon_bound, squeezer,
    symplectic_completion, QuadratureRowSet,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Builders
    let s = direct_sum(&[rotation(0.6), squeezer(&[0.4])]);
    println!("rotation ⊕ squeezer:{}", s.matrix());
    println!("symplectic deviation |S J S^T - J|: {:.2e}", s.deviation());

    // Group operations
    let r = random_symplectic(3, 42);
    let round_trip = r.compose(&r.inverse())?;
    println!("random 3-mode S, S S^-1 == 1: {}", round_trip.is_identity(1e-9));

    // Chirp / dilation / Fourier factorization
    let dec = r.decompose()?;
    let err = (dec.reassemble()? - r.matrix()).amax();
    println!("decomposition reassembly error: {err:.2e}");

    // Commutator matrix and Shannon bound
    for n in 1..=3 {
        let k = commutator_matrix(&identity(n), &fourier_form(n))?;
        println!("n = {n}: |det K| = {}, bound = {}", k.det_abs(), shannon_bound(&identity(n), &fourier_form(n))?);
    }
    let k = commutator_matrix(&rotation(1.2), &rotation(0.2))?;
    println!("rotated quadratures, |det K| = {:.6} (sin 1.0 = {:.6})", k.det_abs(), 1.0f64.sin());
    let k = commutator_matrix(&r, &r)?;
    println!("A == B: degenerate = {}, bound = {}", k.is_degenerate(), k.shannon_bound());

    // Completing two commuting rows to a full 3-mode symplectic matrix
    let rows = QuadratureRowSet::top_of(&random_symplectic(3, 7), 2)?;
    let full = symplectic_completion(&rows)?;
    println!("completion of 2 rows: deviation {:.2e}", full.deviation());
    Ok(())
}
