mod common;

use halfradial::fov::{
    fov_boundary, fov_disk_check, max_poly_on_fov, numerical_radius, radius, support,
    DEFAULT_REFINE_TOL,
};
use halfradial::linalg::{spectral_norm, svd};
use halfradial::oracle::wa_sample_points;
use halfradial::{cis, ComplexMatrix, C64};
use proptest::prelude::*;

use common::{random_coeffs, random_matrix, shift_plus_half, structural_decoy};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn radius_between_half_norm_and_norm(n in 2usize..=10, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let r = radius(&a).unwrap().radius;
        let norm = spectral_norm(&a).unwrap();
        prop_assert!(r >= norm / 2.0 - 1e-8);
        prop_assert!(r <= norm + 1e-8);
    }

    #[test]
    fn maximizer_attains_radius(n in 2usize..=8, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let res = radius(&a).unwrap();
        prop_assert!((res.attained(&a) - res.radius).abs() <= 1e-9 * res.radius.max(1.0));
        prop_assert!((res.maximizer.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radius_invariant_under_rotation_and_adjoint(n in 2usize..=8, seed in any::<u64>(), phi in 0.0f64..std::f64::consts::TAU) {
        let a = random_matrix(n, seed);
        let r = radius(&a).unwrap().radius;
        let rotated = radius(&a.scale(cis(phi))).unwrap().radius;
        let adj = radius(&a.adjoint()).unwrap().radius;
        prop_assert!((r - rotated).abs() <= 1e-9 * r);
        prop_assert!((r - adj).abs() <= 1e-9 * r);
    }

    #[test]
    fn radius_is_subadditive(n in 2usize..=8, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let b = random_matrix(n, seed.wrapping_mul(31).wrapping_add(7));
        let lhs = radius(&(&a + &b)).unwrap().radius;
        let rhs = radius(&a).unwrap().radius + radius(&b).unwrap().radius;
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn radius_is_unitarily_invariant(n in 2usize..=8, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let q = halfradial::linalg::haar_unitary(n, seed ^ 0xabc).unwrap();
        let r = radius(&a).unwrap().radius;
        let rq = radius(&a.conjugate_by(&q)).unwrap().radius;
        prop_assert!((r - rq).abs() <= 1e-9 * r);
    }

    #[test]
    fn rayleigh_samples_lie_in_outer_approximation(n in 2usize..=8, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let boundary = fov_boundary(&a, 256).unwrap();
        let r = radius(&a).unwrap().radius;
        for zeta in wa_sample_points(&a, 200, seed).unwrap() {
            prop_assert!(boundary.outer_contains(zeta, 1e-10));
            prop_assert!(zeta.norm() <= r + 1e-10);
        }
    }

    #[test]
    fn polynomial_max_dominates_spectrum(n in 2usize..=6, deg in 1usize..=4, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let coeffs = random_coeffs(deg, seed ^ 1);
        let max = max_poly_on_fov(&a, &coeffs, 256).unwrap();
        for zeta in wa_sample_points(&a, 50, seed).unwrap() {
            prop_assert!(halfradial::fov::eval_poly(&coeffs, zeta).norm() <= max * (1.0 + 1e-6) + 1e-12);
        }
    }
}

#[test]
fn boundary_points_satisfy_their_support() {
    let a = random_matrix(5, 42);
    for s in fov_boundary(&a, 64).unwrap().samples {
        assert!(((cis(s.theta) * s.point).re - s.support).abs() < 1e-10);
        assert!((support(&a, s.theta).unwrap() - s.support).abs() < 1e-14);
    }
}

#[test]
fn hermitian_radius_is_spectral_radius() {
    let g = random_matrix(6, 3);
    let h = &g + &g.adjoint();
    let r = radius(&h).unwrap().radius;
    let rho = svd(&h).unwrap().sigma_max();
    assert!((r - rho).abs() < 1e-10 * rho);
}

#[test]
fn normal_matrix_radius_is_largest_eigenvalue_modulus() {
    let q = halfradial::linalg::haar_unitary(4, 9).unwrap();
    let d = ComplexMatrix::diagonal(&[
        C64::new(1.0, 2.0),
        C64::new(-0.5, 0.0),
        C64::new(0.0, -1.5),
        C64::new(2.0, -0.1),
    ]);
    let a = d.conjugate_by(&q);
    let expected = C64::new(1.0, 2.0).norm();
    assert!((radius(&a).unwrap().radius - expected).abs() < 1e-10);
}

#[test]
fn fixtures() {
    let j = ComplexMatrix::shift();
    assert!((radius(&j).unwrap().radius - 0.5).abs() < 1e-12);
    assert!(fov_disk_check(&j, 256, 1e-8).unwrap().is_disk);

    assert!((radius(&structural_decoy()).unwrap().radius - 0.9).abs() < 1e-10);
    assert!(
        !fov_disk_check(&structural_decoy(), 256, 1e-8)
            .unwrap()
            .is_disk
    );

    let r3 = numerical_radius(&shift_plus_half(), 1024, DEFAULT_REFINE_TOL).unwrap();
    assert!((r3.radius - 0.5).abs() < 1e-10);
}

#[test]
fn zero_and_scalar_matrices() {
    let z = ComplexMatrix::zeros(3);
    assert_eq!(radius(&z).unwrap().radius, 0.0);
    let s = ComplexMatrix::identity(3).scale(C64::new(0.0, -2.5));
    assert!((radius(&s).unwrap().radius - 2.5).abs() < 1e-12);
}

#[test]
fn rejects_bad_arguments() {
    let a = random_matrix(3, 1);
    assert!(numerical_radius(&a, 8, 1e-12).is_err());
    assert!(numerical_radius(&a, 512, 0.0).is_err());
    assert!(fov_boundary(&a, 2).is_err());
    assert!(
        radius(&ComplexMatrix::from_row_major(2, 3, vec![C64::new(1.0, 0.0); 6]).unwrap()).is_err()
    );
}
