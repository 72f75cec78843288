//! Dense complex linear-algebra kernel: SVD, extremal Hermitian eigenpairs,
//! range/null-space splitting, orthonormal completion and Haar unitaries.
//!
//! Decompositions are delegated to `nalgebra`; everything here adds the
//! validation, ordering and thresholding conventions the rest of the crate
//! relies on.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{inner, CVector, ComplexMatrix, C64};

/// Relative tolerance on `‖H − H*‖_F` accepted by the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default relative cutoff deciding membership in `R(A*)` versus `N(A)`.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Tolerance on `‖V*V − I‖_F` accepted by [`orthonormal_complete`].
pub const COMPLETION_INPUT_TOL: f64 = 1e-8;

/// Deterministic generator used by every randomized routine.
pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full SVD `A = U diag(σ) V*` with `σ` non-increasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// `‖A − U Σ V*‖_F`.
    pub fn reconstruction_error(&self, a: &ComplexMatrix) -> f64 {
        let sigma: Vec<C64> = self
            .singular_values
            .iter()
            .map(|&s| C64::new(s, 0.0))
            .collect();
        let usv = &(&self.u * &ComplexMatrix::diagonal(&sigma)) * &self.v.adjoint();
        (a - &usv).frobenius_norm()
    }
}

fn check_square(a: &ComplexMatrix) -> Result<usize> {
    a.order()
}

/// Singular value decomposition of a square matrix.
///
/// No rank decisions are made here; callers threshold `singular_values`.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    let n = check_square(a)?;
    let dec = a.as_dmatrix().clone().svd(true, true);
    let (u, v_t) = match (dec.u, dec.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => {
            return Err(Error::NumericalFailure(
                "SVD did not return singular vectors".into(),
            ))
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));

    let v = v_t.adjoint();
    let mut u_sorted = DMatrix::zeros(n, n);
    let mut v_sorted = DMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u.column(src));
        v_sorted.set_column(dst, &v.column(src));
        sigma.push(dec.singular_values[src].max(0.0));
    }
    Ok(SvdResult {
        u: ComplexMatrix::wrap(u_sorted),
        singular_values: sigma,
        v: ComplexMatrix::wrap(v_sorted),
    })
}

/// Largest singular value, `‖A‖₂`.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    check_square(a)?;
    if a.is_zero() {
        return Ok(0.0);
    }
    let sv = a.as_dmatrix().singular_values();
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

/// `‖H − H*‖_F / ‖H‖_F`, zero for the zero matrix.
pub fn hermitian_defect(h: &ComplexMatrix) -> f64 {
    let scale = h.frobenius_norm();
    if scale == 0.0 {
        return 0.0;
    }
    (h - &h.adjoint()).frobenius_norm() / scale
}

fn symmetrized(h: &ComplexMatrix) -> Result<DMatrix<C64>> {
    check_square(h)?;
    let residual = hermitian_defect(h);
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let d = h.as_dmatrix();
    Ok((d + d.adjoint()) * C64::new(0.5, 0.0))
}

/// Maximum eigenvalue of a Hermitian matrix and a unit eigenvector for it.
pub fn hermitian_eigmax(h: &ComplexMatrix) -> Result<(f64, CVector)> {
    let sym = symmetrized(h)?;
    let eig = SymmetricEigen::new(sym);
    let (idx, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::InvalidParameter("empty matrix".into()))?;
    let q = eig.eigenvectors.column(idx).into_owned();
    let q = q.normalize();
    Ok((lambda, q))
}

/// Maximum eigenvalue of a Hermitian matrix without eigenvectors.
pub fn hermitian_lambda_max(h: &ComplexMatrix) -> Result<f64> {
    let sym = symmetrized(h)?;
    Ok(sym
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = symmetrized(h)?;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `A^k` by repeated multiplication; `A^0 = I`.
pub fn matrix_power(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let n = check_square(a)?;
    let mut p = ComplexMatrix::identity(n);
    for _ in 0..k {
        p = &p * a;
    }
    Ok(p)
}

/// Split of a vector into its `R(A*)` and `N(A)` components.
#[derive(Debug, Clone)]
pub struct OrthoSplit {
    /// Component in `R(A*)`.
    pub x: CVector,
    /// Component in `N(A)`.
    pub y: CVector,
    /// Set when `A = 0`, where `R(A*) = {0}` and the split is trivial.
    pub degenerate: bool,
}

/// Decomposes `z = x + y` with `x ∈ R(A*)` and `y ∈ N(A)`.
///
/// `R(A*)` is spanned by the right singular vectors with
/// `σ_i > rank_tol · σ_max`.
pub fn orthogonal_decompose(a: &ComplexMatrix, z: &CVector, rank_tol: f64) -> Result<OrthoSplit> {
    let n = check_square(a)?;
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rank_tol must lie in (0, 1), got {rank_tol}"
        )));
    }
    if a.is_zero() {
        return Ok(OrthoSplit {
            x: CVector::zeros(n),
            y: z.clone(),
            degenerate: true,
        });
    }
    let dec = svd(a)?;
    let cutoff = rank_tol * dec.sigma_max();
    let mut x = CVector::zeros(n);
    for (i, &s) in dec.singular_values.iter().enumerate() {
        if s <= cutoff {
            break;
        }
        let vi = dec.v.column(i);
        x += &vi * inner(z, &vi);
    }
    let y = z - &x;
    Ok(OrthoSplit {
        x,
        y,
        degenerate: false,
    })
}

/// `‖V*V − I‖_F` for the matrix with the given columns.
pub fn orthonormality_defect(columns: &[CVector]) -> f64 {
    let k = columns.len();
    let mut acc = 0.0;
    for i in 0..k {
        for j in 0..k {
            let g = inner(&columns[j], &columns[i]);
            let target = if i == j { 1.0 } else { 0.0 };
            acc += (g - C64::new(target, 0.0)).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Extends `k` orthonormal vectors in `C^n` to an `n x n` unitary whose first
/// `k` columns are exactly the input.
pub fn orthonormal_complete(n: usize, columns: &[CVector]) -> Result<ComplexMatrix> {
    if columns.len() > n {
        return Err(Error::InvalidParameter(format!(
            "{} vectors cannot be orthonormal in C^{n}",
            columns.len()
        )));
    }
    if let Some(c) = columns.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let residual = orthonormality_defect(columns);
    if residual > COMPLETION_INPUT_TOL {
        return Err(Error::NotOrthonormal { residual });
    }

    let mut basis: Vec<CVector> = columns.to_vec();
    let project_out = |v: &mut CVector, basis: &[CVector]| {
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for b in basis {
                let c = inner(v, b);
                *v -= b * c;
            }
        }
    };

    while basis.len() < n {
        // candidate standard basis vector with the largest residual
        let mut best: Option<(f64, CVector)> = None;
        for j in 0..n {
            let mut e = CVector::zeros(n);
            e[j] = C64::new(1.0, 0.0);
            project_out(&mut e, &basis);
            let norm = e.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, e));
            }
        }
        let (norm, mut e) = best.expect("n > 0");
        if norm < 1e-8 {
            return Err(Error::NumericalFailure(
                "orthonormal completion lost rank".into(),
            ));
        }
        e /= C64::new(norm, 0.0);
        basis.push(e);
    }
    Ok(ComplexMatrix::from_columns(n, &basis))
}

/// Matrix with i.i.d. standard complex Gaussian entries (`E|g|² = 1`).
pub fn gaussian_matrix(n_rows: usize, n_cols: usize, rng: &mut Rng) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let data = DMatrix::from_fn(n_rows, n_cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(scale * re, scale * im)
    });
    ComplexMatrix::wrap(data)
}

/// Uniformly distributed unit vector in `C^n`.
pub fn random_unit_vector(n: usize, rng: &mut Rng) -> CVector {
    loop {
        let g = gaussian_matrix(n, 1, rng).column(0);
        let norm = g.norm();
        if norm > 1e-300 {
            return g / C64::new(norm, 0.0);
        }
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` pushed into `Q`.
pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    Ok(haar_unitary_with(n, &mut rng))
}

pub(crate) fn haar_unitary_with(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng).into_dmatrix();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / C64::new(d.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    ComplexMatrix::wrap(q)
}

/// `‖Q*Q − I‖_F`.
pub fn unitarity_defect(q: &ComplexMatrix) -> f64 {
    let n = q.n_cols();
    let g = &q.adjoint() * q;
    (&g - &ComplexMatrix::identity(n)).frobenius_norm()
}

/// Spectral norm of a possibly rectangular (or empty) matrix.
pub fn rect_spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.n_rows() == 0 || m.n_cols() == 0 {
        return 0.0;
    }
    m.as_dmatrix()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn structural_decoy() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[0.0, 0.0, 0.0], [0.0, 0.9, 0.0], [1.0, 0.0, 0.0]]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn svd_of_identity_shift_and_decoy() {
        let s = svd(&ComplexMatrix::identity(3)).unwrap();
        assert!(s.singular_values.iter().all(|&x| close(x, 1.0, 1e-15)));

        let s = svd(&ComplexMatrix::shift()).unwrap();
        assert!(close(s.singular_values[0], 1.0, 1e-15));
        assert!(close(s.singular_values[1], 0.0, 1e-15));

        let a = structural_decoy();
        let s = svd(&a).unwrap();
        for (got, want) in s.singular_values.iter().zip([1.0, 0.9, 0.0]) {
            assert!(close(*got, want, 1e-14), "{:?}", s.singular_values);
        }
        assert!(s.reconstruction_error(&a) <= 1e-14);
    }

    #[test]
    fn svd_rejects_non_square() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(svd(&a).unwrap_err(), Error::NotSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn eigmax_examples() {
        let d = ComplexMatrix::diagonal(&[ONE, -ONE]);
        let (l, q) = hermitian_eigmax(&d).unwrap();
        assert!(close(l, 1.0, 1e-15));
        assert!(close(q[0].norm(), 1.0, 1e-14) && q[1].norm() < 1e-14);

        let j = ComplexMatrix::shift();
        let h = (&j + &j.adjoint()).scale_real(0.5);
        let (l, q) = hermitian_eigmax(&h).unwrap();
        assert!(close(l, 0.5, 1e-15));
        let resid = (h.apply(&q) - &q * C64::new(l, 0.0)).norm();
        assert!(resid <= 1e-12);

        let (l, _) = hermitian_eigmax(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn eigmax_rejects_non_hermitian() {
        let err = hermitian_eigmax(&ComplexMatrix::shift()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn spectral_norm_scales() {
        let j = ComplexMatrix::shift();
        assert!(close(spectral_norm(&j).unwrap(), 1.0, 1e-15));
        let alpha = C64::new(-1.5, 2.0);
        assert!(close(spectral_norm(&j.scale(alpha)).unwrap(), 2.5, 1e-14));
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(4)).unwrap(), 0.0);
    }

    #[test]
    fn powers() {
        let j = ComplexMatrix::shift();
        assert!(matrix_power(&j, 2).unwrap().is_zero());
        assert_eq!(matrix_power(&j, 1).unwrap(), j);
        assert_eq!(matrix_power(&j, 0).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn decompose_shift() {
        let j = ComplexMatrix::shift();
        let z = CVector::from_vec(vec![ONE, ONE]) * C64::new(FRAC_1_SQRT_2, 0.0);
        let s = orthogonal_decompose(&j, &z, DEFAULT_RANK_TOL).unwrap();
        assert!(!s.degenerate);
        assert!(s.x[0].norm() < 1e-15 && close(s.x[1].re, FRAC_1_SQRT_2, 1e-15));
        assert!(s.y[1].norm() < 1e-15 && close(s.y[0].re, FRAC_1_SQRT_2, 1e-15));
    }

    #[test]
    fn decompose_nonsingular_and_zero() {
        let a = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [0.0, 3.0]]).unwrap();
        let z = CVector::from_vec(vec![C64::new(0.3, -1.0), C64::new(2.0, 0.5)]);
        let s = orthogonal_decompose(&a, &z, DEFAULT_RANK_TOL).unwrap();
        assert!((&s.x - &z).norm() <= 1e-14 * z.norm());
        assert!(s.y.norm() <= 1e-14);

        let s = orthogonal_decompose(&ComplexMatrix::zeros(2), &z, DEFAULT_RANK_TOL).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.y, z);
        assert_eq!(s.x.norm(), 0.0);
    }

    #[test]
    fn decompose_validates_arguments() {
        let j = ComplexMatrix::shift();
        let z = CVector::zeros(3);
        assert!(matches!(
            orthogonal_decompose(&j, &z, 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
        let z = CVector::zeros(2);
        assert!(matches!(
            orthogonal_decompose(&j, &z, 1.5),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn completion_examples() {
        let e1 = CVector::from_vec(vec![ONE, ZERO]);
        let q = orthonormal_complete(2, std::slice::from_ref(&e1)).unwrap();
        assert_eq!(q.column(0), e1);
        assert!(close(q.get(1, 1).norm(), 1.0, 1e-15));

        assert_eq!(
            orthonormal_complete(3, &[]).unwrap(),
            ComplexMatrix::identity(3)
        );

        let w = CVector::from_vec(vec![ONE, ONE]) * C64::new(FRAC_1_SQRT_2, 0.0);
        let q = orthonormal_complete(2, std::slice::from_ref(&w)).unwrap();
        assert_eq!(q.column(0), w);
        assert!(unitarity_defect(&q) <= 1e-14);
    }

    #[test]
    fn completion_rejects_non_orthonormal() {
        let v = CVector::from_vec(vec![ONE, ONE]);
        assert!(matches!(
            orthonormal_complete(2, &[v]),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn haar_examples() {
        let q = haar_unitary(1, 7).unwrap();
        assert!(close(q.get(0, 0).norm(), 1.0, 1e-15));
        assert_eq!(haar_unitary(4, 99).unwrap(), haar_unitary(4, 99).unwrap());
        assert_ne!(haar_unitary(4, 99).unwrap(), haar_unitary(4, 100).unwrap());
        assert!(unitarity_defect(&haar_unitary(5, 3).unwrap()) <= 1e-12);
    }
}
