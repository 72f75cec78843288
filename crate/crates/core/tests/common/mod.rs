#![allow(dead_code)]

use halfradial::linalg::{gaussian_matrix, seeded_rng};
use halfradial::{ComplexMatrix, C64};

pub fn structural_decoy() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 0.0, 0.0], [0.0, 0.9, 0.0], [1.0, 0.0, 0.0]]).unwrap()
}

pub fn shift_plus_half() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.5]]).unwrap()
}

pub fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix(n, n, &mut seeded_rng(seed))
}

pub fn random_coeffs(degree: usize, seed: u64) -> Vec<C64> {
    gaussian_matrix(degree + 1, 1, &mut seeded_rng(seed))
        .column(0)
        .iter()
        .copied()
        .collect()
}

pub fn unit(n: usize, i: usize) -> halfradial::CVector {
    let mut v = halfradial::CVector::zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}
