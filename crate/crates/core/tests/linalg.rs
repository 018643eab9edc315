use std::f64::consts::{FRAC_PI_2, TAU};

use entropic_bell::linalg::{
    conjugate_by_local_unitaries, mach_zehnder_matrix, reck_pairs, reck_unitary, tensor_product, ComplexMatrix,
    PhaseSettings,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn settings_strategy(dim: usize) -> impl Strategy<Value = PhaseSettings> {
    let n = reck_pairs(dim).len();
    (
        prop::collection::vec((0.0..TAU, 0.0..TAU), n),
        prop::collection::vec(0.0..TAU, dim),
    )
        .prop_map(move |(angles, alphas)| PhaseSettings::new(dim, &angles, &alphas).unwrap())
}

fn matrix_strategy(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |v| {
        ComplexMatrix::from_rows(dim, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

#[test]
fn mz_two_modes_quarter_turn() {
    let t = mach_zehnder_matrix(2, 2, 1, 0.0, FRAC_PI_2).unwrap();
    assert!(t.max_abs_diff(&ComplexMatrix::diagonal(&[c(-1.0), c(1.0)])) < 1e-15);
}

#[test]
fn mz_zero_angle_swaps_modes() {
    let t = mach_zehnder_matrix(3, 2, 1, 0.0, 0.0).unwrap();
    let want = ComplexMatrix::from_rows(
        3,
        vec![c(0.0), c(1.0), c(0.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)],
    )
    .unwrap();
    assert!(t.max_abs_diff(&want) < 1e-15);
}

#[test]
fn mz_generic_is_unitary() {
    let t = mach_zehnder_matrix(3, 3, 1, 1.3, 0.7).unwrap();
    assert!(t.unitarity_defect() < 1e-12);
}

#[test]
fn mz_rejects_bad_modes() {
    assert!(mach_zehnder_matrix(3, 1, 2, 0.0, 0.0).is_err());
    assert!(mach_zehnder_matrix(3, 4, 1, 0.0, 0.0).is_err());
    assert!(mach_zehnder_matrix(3, 2, 0, 0.0, 0.0).is_err());
}

#[test]
fn reck_diagonal_settings() {
    let u = reck_unitary(&PhaseSettings::diagonal(3));
    assert!(u.max_abs_diff(&ComplexMatrix::diagonal(&[c(1.0), c(-1.0), c(1.0)])) < 1e-15);
}

#[test]
fn reck_qubit_swap_is_self_inverse() {
    let s = PhaseSettings::new(2, &[(0.0, 0.0)], &[0.0, 0.0]).unwrap();
    let u = reck_unitary(&s);
    let swap = ComplexMatrix::from_rows(2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
    assert!(u.max_abs_diff(&swap) < 1e-15);
    assert!((&u * &u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
}

#[test]
fn tensor_identities() {
    let i6 = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
    assert!(i6.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-15);
    let z = ComplexMatrix::diagonal(&[c(1.0), c(-1.0)]);
    let zi = tensor_product(&z, &ComplexMatrix::identity(2));
    assert!(zi.max_abs_diff(&ComplexMatrix::diagonal(&[c(1.0), c(1.0), c(-1.0), c(-1.0)])) < 1e-15);
}

#[test]
fn conjugation_examples() {
    let rho = ComplexMatrix::from_fn(9, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64));
    let id = ComplexMatrix::identity(3);
    assert!(conjugate_by_local_unitaries(&rho, &id, &id).unwrap().max_abs_diff(&rho) < 1e-14);

    let mixed = ComplexMatrix::identity(9).scale(1.0 / 9.0);
    let ua = reck_unitary(&PhaseSettings::from_flat(3, &[0.3, 1.1, 2.0, 0.4, 5.0, 2.2]).unwrap());
    let ub = reck_unitary(&PhaseSettings::from_flat(3, &[1.7, 0.2, 4.1, 3.3, 0.9, 1.4]).unwrap());
    let out = conjugate_by_local_unitaries(&mixed, &ua, &ub).unwrap();
    assert!(out.max_abs_diff(&mixed) < 1e-15);
    assert!(conjugate_by_local_unitaries(&mixed, &ua, &ComplexMatrix::identity(2)).is_err());
}

proptest! {
    #[test]
    fn reck_is_unitary(s in settings_strategy(3)) {
        prop_assert!(reck_unitary(&s).unitarity_defect() < 1e-12);
    }

    #[test]
    fn reck_qubit_is_unitary(s in settings_strategy(2)) {
        prop_assert!(reck_unitary(&s).unitarity_defect() < 1e-12);
    }

    #[test]
    fn tensor_matches_index_definition(a in matrix_strategy(2), b in matrix_strategy(2)) {
        let k = tensor_product(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        prop_assert_eq!(k[(2 * i + r, 2 * j + s)], a[(i, j)] * b[(r, s)]);
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_preserves_trace(
        sa in settings_strategy(3),
        sb in settings_strategy(3),
        v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9),
    ) {
        let psi: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        prop_assume!(norm > 1e-6);
        let rho = ComplexMatrix::projector(&psi).scale(1.0 / norm);
        let out = conjugate_by_local_unitaries(&rho, &reck_unitary(&sa), &reck_unitary(&sb)).unwrap();
        prop_assert!((out.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(out.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn folded_angles_round_trip(s in settings_strategy(3)) {
        let again = PhaseSettings::from_flat(3, &s.flat_angles()).unwrap();
        prop_assert_eq!(again.flat_angles(), s.flat_angles());
        prop_assert!(s.flat_angles().iter().all(|x| (0.0..TAU).contains(x)));
    }
}
