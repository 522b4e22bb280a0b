use lct_uncertainty::linalg::{max_abs, symplectic_form};
use lct_uncertainty::symplectic::{
    commutator_matrix, direct_sum, is_symplectic, random_symplectic, rotation, shannon_bound, squeezer,
    symplectic_completion, QuadratureRowSet, SYMPLECTIC_TOL,
};
use lct_uncertainty::ExtReal;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_matrices_are_symplectic(n in 1usize..5, seed in any::<u64>()) {
        let s = random_symplectic(n, seed);
        prop_assert!(is_symplectic(s.matrix(), SYMPLECTIC_TOL).unwrap());
        prop_assert!(s.deviation() < 1e-9);
    }

    #[test]
    fn inverse_composes_to_identity(n in 1usize..5, seed in any::<u64>()) {
        let s = random_symplectic(n, seed);
        prop_assert!(s.compose(&s.inverse()).unwrap().is_identity(1e-8));
        prop_assert!(s.inverse().compose(&s).unwrap().is_identity(1e-8));
    }

    #[test]
    fn decomposition_reassembles(n in 1usize..5, seed in any::<u64>()) {
        let s = random_symplectic(n, seed);
        prop_assume!(s.b_is_invertible());
        let back = s.decompose().unwrap().reassemble().unwrap();
        let err = max_abs(&(back - s.matrix())) / max_abs(s.matrix());
        prop_assert!(err < 1e-9, "relative error {err}");
    }

    #[test]
    fn bound_is_invariant_under_common_transform(n in 1usize..4, sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>()) {
        let (a, b, c) = (random_symplectic(n, sa), random_symplectic(n, sb), random_symplectic(n, sc));
        let before = shannon_bound(&a, &b).unwrap();
        let after = shannon_bound(&a.compose(&c).unwrap(), &b.compose(&c).unwrap()).unwrap();
        match (before, after) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => prop_assert!(rel_close(x, y, 1e-7), "{x} vs {y}"),
            (x, y) => prop_assert_eq!(x, y),
        }
    }

    #[test]
    fn commutator_determinant_is_symmetric(n in 1usize..5, sa in any::<u64>(), sb in any::<u64>()) {
        let (a, b) = (random_symplectic(n, sa), random_symplectic(n, sb));
        let ab = commutator_matrix(&a, &b).unwrap().det_abs();
        let ba = commutator_matrix(&b, &a).unwrap().det_abs();
        prop_assert!(rel_close(ab, ba, 1e-9), "{ab} vs {ba}");
    }

    #[test]
    fn completion_extends_rows(modes in 1usize..5, n_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let n = 1 + ((modes - 1) as f64 * n_frac) as usize;
        let full = random_symplectic(modes, seed);
        let rows = QuadratureRowSet::top_of(&full, n).unwrap();
        let s = symplectic_completion(&rows).unwrap();
        prop_assert!(is_symplectic(s.matrix(), 1e-8).unwrap());
        let head = s.matrix().rows(0, n).clone_owned();
        let err = max_abs(&(head - rows.rows())) / max_abs(rows.rows());
        prop_assert!(err < 1e-9, "rows changed by {err}");
    }

    #[test]
    fn rotation_pairs_follow_sine(theta in -3.0f64..3.0, phi in -3.0f64..3.0) {
        let k = commutator_matrix(&rotation(theta), &rotation(phi)).unwrap();
        prop_assert!((k.det_abs() - (theta - phi).sin().abs()).abs() < 1e-12);
    }
}

#[test]
fn non_isotropic_rows_are_rejected() {
    // x and p of the same mode do not commute.
    let rows = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    assert!(QuadratureRowSet::new(rows).is_err());
}

#[test]
fn direct_sum_preserves_form() {
    let s = direct_sum(&[squeezer(&[0.7]), rotation(1.1)]);
    let j = symplectic_form(2);
    let m = s.matrix();
    assert!(max_abs(&(m * &j * m.transpose() - &j)) < 1e-12);
}
