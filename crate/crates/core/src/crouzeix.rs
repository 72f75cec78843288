//! Crouzeix ratios `‖p(A)‖ / max_{ζ∈W(A)} |p(ζ)|`, the Crabb–Choi–Crouzeix
//! matrix, and recovery of the `r(A)(C_k ⊕ B)` structure of matrices whose
//! `k`-th power attains ratio 2.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::fov::{self, max_poly_on_fov, DEFAULT_BOUNDARY_COUNT};
use crate::halfradial::{self, require_admissible};
use crate::linalg::{
    gaussian_matrix, haar_unitary_with, matrix_power, orthonormal_complete, seeded_rng,
    spectral_norm, svd,
};
use crate::matrix::{inner, CVector, ComplexMatrix, C64, ONE, ZERO};

/// Tolerance on the Crabb chain norms and orthogonality; errors compound over
/// `k` matrix-vector products.
pub const CHAIN_TOL: f64 = 1e-6;
/// Non-monomial ratios this close to 2 are flagged.
pub const NOTEWORTHY_TOL: f64 = 1e-6;
/// Proven universal Crouzeix constant `1 + √2`.
pub const PROVEN_CONSTANT: f64 = 1.0 + SQRT_2;
pub const MAX_TAIL_ATTEMPTS: usize = 100;

/// Crabb–Choi–Crouzeix matrix `C_n` of order `n + 1`: superdiagonal
/// `(√2, 1, …, 1, √2)`, and `C_1 = 2J`.
pub fn ccc_matrix(n: usize) -> Result<ComplexMatrix> {
    if n < 1 {
        return Err(Error::InvalidParameter("CCC matrix needs n >= 1".into()));
    }
    let mut c = ComplexMatrix::zeros(n + 1).into_dmatrix();
    if n == 1 {
        c[(0, 1)] = C64::new(2.0, 0.0);
    } else {
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { SQRT_2 } else { 1.0 };
            c[(i, i + 1)] = C64::new(w, 0.0);
        }
    }
    Ok(ComplexMatrix::wrap(c))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Polynomial {
    Monomial(usize),
    /// Ascending-degree coefficients.
    Coefficients(Vec<C64>),
}

#[derive(Debug, Clone)]
pub struct CrouzeixRatio {
    pub polynomial: Polynomial,
    /// `‖p(A)‖`
    pub numerator: f64,
    /// `max_{ζ∈W(A)} |p(ζ)|`
    pub denominator: f64,
    pub ratio: f64,
    /// Boundary-sweep value of the denominator (monomials only; cross-check).
    pub sweep_denominator: Option<f64>,
    /// Sweep and analytic denominators agree within the discretization bound.
    pub cross_check_ok: bool,
    /// Non-monomial ratio within `NOTEWORTHY_TOL` of 2.
    pub noteworthy: bool,
}

fn safe_ratio(numerator: f64, denominator: f64) -> f64 {
    if denominator > 0.0 {
        numerator / denominator
    } else {
        0.0
    }
}

/// `‖A^k‖ / r(A)^k` with an analytic denominator.
fn monomial_ratio_parts(a: &ComplexMatrix, k: usize) -> Result<(f64, f64, f64)> {
    let power = matrix_power(a, k)?;
    let numerator = spectral_norm(&power)?;
    let r = fov::radius(a)?.radius;
    Ok((numerator, r, r.powi(k as i32)))
}

/// Monomial ratio `‖A^k‖ / r(A)^k`, cross-checked against the boundary sweep.
pub fn crouzeix_monomial_ratio(a: &ComplexMatrix, k: usize) -> Result<CrouzeixRatio> {
    a.order()?;
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if k < 1 {
        return Err(Error::InvalidParameter(
            "monomial degree must be at least 1".into(),
        ));
    }
    let (numerator, r, denominator) = monomial_ratio_parts(a, k)?;

    let mut coeffs = vec![ZERO; k + 1];
    coeffs[k] = ONE;
    let count = DEFAULT_BOUNDARY_COUNT;
    let sweep = max_poly_on_fov(a, &coeffs, count)?;
    // boundary points lie within ~2π/count·‖A‖ of the extremal circle arc
    let h = 2.0 * std::f64::consts::TAU / count as f64 * a.frobenius_norm();
    let lower = (r - h).max(0.0).powi(k as i32);
    let slack = 1e-12 * denominator.max(f64::MIN_POSITIVE);
    let cross_check_ok = sweep <= denominator + slack && sweep >= lower - slack;

    Ok(CrouzeixRatio {
        polynomial: Polynomial::Monomial(k),
        numerator,
        denominator,
        ratio: safe_ratio(numerator, denominator),
        sweep_denominator: Some(sweep),
        cross_check_ok,
        noteworthy: false,
    })
}

/// `p(A)` by Horner's rule, ascending-degree coefficients.
pub fn eval_matrix_poly(a: &ComplexMatrix, coeffs: &[C64]) -> Result<ComplexMatrix> {
    let n = a.order()?;
    let identity = ComplexMatrix::identity(n);
    let mut acc = ComplexMatrix::zeros(n);
    for &c in coeffs.iter().rev() {
        acc = &(&acc * a) + &identity.scale(c);
    }
    Ok(acc)
}

/// `‖p(A)‖ / max_{ζ∈W(A)} |p(ζ)|` with the denominator from the boundary sweep.
pub fn crouzeix_poly_ratio(a: &ComplexMatrix, coeffs: &[C64]) -> Result<CrouzeixRatio> {
    crouzeix_poly_ratio_with(a, coeffs, DEFAULT_BOUNDARY_COUNT)
}

pub fn crouzeix_poly_ratio_with(
    a: &ComplexMatrix,
    coeffs: &[C64],
    count: usize,
) -> Result<CrouzeixRatio> {
    a.order()?;
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if coeffs.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    let degree = coeffs
        .iter()
        .rposition(|c| c.norm() > 0.0)
        .ok_or(Error::ZeroPolynomial)?;
    if degree < 1 {
        return Err(Error::InvalidParameter(
            "polynomial degree must be at least 1".into(),
        ));
    }
    let numerator = spectral_norm(&eval_matrix_poly(a, coeffs)?)?;
    let denominator = max_poly_on_fov(a, coeffs, count)?;
    let ratio = safe_ratio(numerator, denominator);
    let is_monomial = coeffs[..degree].iter().all(|c| c.norm() == 0.0);
    Ok(CrouzeixRatio {
        polynomial: Polynomial::Coefficients(coeffs.to_vec()),
        numerator,
        denominator,
        ratio,
        sweep_denominator: None,
        cross_check_ok: true,
        noteworthy: !is_monomial && (ratio - 2.0).abs() <= NOTEWORTHY_TOL,
    })
}

/// Two-sided test of `‖A^k‖ = 2 max_{ζ∈W(A)} |ζ^k|`.
#[derive(Debug, Clone)]
pub struct ExtremalityReport {
    pub k: usize,
    /// `A^k` half-radial and `r(A^k) = r(A)^k`.
    pub verdict: bool,
    pub power_half_radial: bool,
    /// `None` when `A^k = 0`.
    pub power_gap: Option<f64>,
    pub power_radius: f64,
    pub radius_to_k: f64,
    /// `|r(A^k) − r(A)^k| / r(A)^k`
    pub power_radius_residual: f64,
    pub ratio: CrouzeixRatio,
    /// `|ratio − 2| ≤ 4τ`
    pub ratio_extremal: bool,
    /// The structural and ratio tests gave the same answer.
    pub agree: bool,
}

/// `A^k` half-radial with `r(A^k) = r(A)^k`, checked against the monomial ratio.
pub fn monomial_extremality_test(
    a: &ComplexMatrix,
    k: usize,
    tau: f64,
) -> Result<ExtremalityReport> {
    require_admissible(a)?;
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let ratio = crouzeix_monomial_ratio(a, k)?;
    let power = matrix_power(a, k)?;
    let radius_to_k = ratio.denominator;

    let (power_half_radial, power_gap, power_radius) = if power.is_zero() {
        (false, None, 0.0)
    } else {
        let report = halfradial::is_half_radial(&power, tau)?;
        (report.verdict, Some(report.gap), report.radius)
    };
    let power_radius_residual = if radius_to_k > 0.0 {
        (power_radius - radius_to_k).abs() / radius_to_k
    } else {
        0.0
    };
    let verdict = power_half_radial && power_radius_residual <= tau;
    let ratio_extremal = (ratio.ratio - 2.0).abs() <= 4.0 * tau;
    Ok(ExtremalityReport {
        k,
        verdict,
        power_half_radial,
        power_gap,
        power_radius,
        radius_to_k,
        power_radius_residual,
        agree: verdict == ratio_extremal,
        ratio,
        ratio_extremal,
    })
}

/// `[Ã^k v, …, Ã v, v]` for `Ã = A/r(A)` and a maximum right singular vector
/// `v` of `Ã^k`.
#[derive(Debug, Clone)]
pub struct CrabbChain {
    pub k: usize,
    pub v: CVector,
    pub chain: Vec<CVector>,
    /// `[Ã^k v/2, Ã^{k−1} v/√2, …, Ã v/√2, v]`, orthonormal columns.
    pub q_k: ComplexMatrix,
    /// `‖Ã^k v‖, …, ‖Ã v‖, ‖v‖`; nominally `(2, √2, …, √2, 1)`.
    pub norm_profile: Vec<f64>,
    /// `‖Ã^{k+1} v‖`
    pub annihilation: f64,
    /// Largest off-diagonal entry of the chain's Gram matrix.
    pub gram_offdiag: f64,
    pub radius: f64,
}

/// Expected chain norms `(2, √2, …, √2, 1)`.
pub fn nominal_profile(k: usize) -> Vec<f64> {
    (0..=k)
        .map(|i| match i {
            0 => 2.0,
            i if i == k => 1.0,
            _ => SQRT_2,
        })
        .collect()
}

pub fn crabb_chain(a: &ComplexMatrix, k: usize) -> Result<CrabbChain> {
    let n = require_admissible(a)?;
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "chain length k must satisfy 1 <= k < n = {n}, got {k}"
        )));
    }
    let radius = fov::radius(a)?.radius;
    let normalized = a.scale_real(1.0 / radius);
    let power = matrix_power(&normalized, k)?;
    let v = svd(&power)?.v.column(0);

    let mut chain = vec![v.clone()];
    for _ in 0..k {
        let next = normalized.apply(chain.last().expect("non-empty"));
        chain.push(next);
    }
    let annihilation = normalized.apply(chain.last().expect("non-empty")).norm();
    chain.reverse();

    let norm_profile: Vec<f64> = chain.iter().map(|c| c.norm()).collect();
    let mut gram_offdiag: f64 = 0.0;
    for i in 0..chain.len() {
        for j in (i + 1)..chain.len() {
            gram_offdiag = gram_offdiag.max(inner(&chain[i], &chain[j]).norm());
        }
    }

    let nominal = nominal_profile(k);
    let profile_ok = norm_profile
        .iter()
        .zip(&nominal)
        .all(|(got, want)| (got - want).abs() <= CHAIN_TOL);
    if !profile_ok || annihilation > CHAIN_TOL || gram_offdiag > CHAIN_TOL {
        return Err(Error::CrabbStructure {
            profile: norm_profile,
        });
    }

    let columns: Vec<CVector> = chain
        .iter()
        .zip(&nominal)
        .map(|(c, w)| c / C64::new(*w, 0.0))
        .collect();
    Ok(CrabbChain {
        k,
        v,
        q_k: ComplexMatrix::from_columns(n, &columns),
        chain,
        norm_profile,
        annihilation,
        gram_offdiag,
        radius,
    })
}

/// Unitary similarity `A/r(A) = Q (C_k ⊕ B) Q*`.
#[derive(Debug, Clone)]
pub struct CrabbDecomposition {
    pub k: usize,
    pub radius: f64,
    pub q_full: ComplexMatrix,
    /// Order `n − 1 − k`, possibly empty.
    pub b: ComplexMatrix,
    /// `‖Ã Q − Q (C_k ⊕ B)‖_F`
    pub residual: f64,
    /// `max(‖(I − Q_k Q_k*) Ã Q_k‖, ‖(I − Q_k Q_k*) Ã* Q_k‖)`
    pub reducing_residual: f64,
    pub b_radius: f64,
    /// `‖B^k‖`
    pub b_power_norm: f64,
    pub chain: CrabbChain,
}

pub fn crabb_decomposition(a: &ComplexMatrix, k: usize, tau: f64) -> Result<CrabbDecomposition> {
    let n = require_admissible(a)?;
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < n = {n}, got {k}"
        )));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let (numerator, _, denominator) = monomial_ratio_parts(a, k)?;
    let ratio = safe_ratio(numerator, denominator);
    if (ratio - 2.0).abs() > 2.0 * tau {
        return Err(Error::NotExtremal { k, ratio });
    }

    let chain = crabb_chain(a, k)?;
    let normalized = a.scale_real(1.0 / chain.radius);
    let q_k = &chain.q_k;
    let projector = &ComplexMatrix::identity(n) - &(q_k * &q_k.adjoint());
    let forward = (&projector * &(&normalized * q_k)).frobenius_norm();
    let backward = (&projector * &(&normalized.adjoint() * q_k)).frobenius_norm();
    let reducing_residual = forward.max(backward);
    if reducing_residual > tau {
        return Err(Error::NumericalFailure(format!(
            "chain span is not reducing (residual {reducing_residual:.3e})"
        )));
    }

    let q_full = orthonormal_complete(n, &q_k.columns())?;
    let tail = n - (k + 1);
    let q_tail = ComplexMatrix::from_columns(n, &q_full.columns()[k + 1..]);
    let b = &(&q_tail.adjoint() * &normalized) * &q_tail;
    let model = ccc_matrix(k)?.direct_sum(&b);
    let residual = (&(&normalized * &q_full) - &(&q_full * &model)).frobenius_norm();

    let (b_radius, b_power_norm) = if tail == 0 {
        (0.0, 0.0)
    } else {
        (
            fov::radius(&b)?.radius,
            spectral_norm(&matrix_power(&b, k)?)?,
        )
    };
    if residual > tau || b_radius > 1.0 + tau || b_power_norm > 2.0 + tau {
        return Err(Error::NumericalFailure(format!(
            "Crabb decomposition violates its bounds: residual {residual:.3e}, r(B) {b_radius:.9}, ‖B^k‖ {b_power_norm:.9}"
        )));
    }
    Ok(CrabbDecomposition {
        k,
        radius: chain.radius,
        q_full,
        b,
        residual,
        reducing_residual,
        b_radius,
        b_power_norm,
        chain,
    })
}

/// Pieces of `A = scale · Q (C_k ⊕ B) Q*`.
#[derive(Debug, Clone)]
pub struct SynthesizedCrabbForm {
    pub a: ComplexMatrix,
    pub q: ComplexMatrix,
    pub b: ComplexMatrix,
    pub k: usize,
    pub scale: f64,
}

/// Tail block with `r(B) = b_radius_frac` (≤ 1), redrawn unless `‖B^k‖ ≤ 2`.
pub fn random_crabb_tail(
    size: usize,
    k: usize,
    b_radius_frac: f64,
    seed: u64,
) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&b_radius_frac) {
        return Err(Error::InvalidParameter(format!(
            "b_radius_frac must lie in [0, 1], got {b_radius_frac}"
        )));
    }
    if size == 0 {
        return Ok(ComplexMatrix::wrap(nalgebra::DMatrix::zeros(0, 0)));
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..MAX_TAIL_ATTEMPTS {
        let g = gaussian_matrix(size, size, &mut rng);
        let rg = fov::radius(&g)?.radius;
        if rg == 0.0 {
            continue;
        }
        let b = g.scale_real(b_radius_frac / rg);
        if spectral_norm(&matrix_power(&b, k)?)? <= 2.0 {
            return Ok(b);
        }
    }
    Err(Error::NumericalFailure(
        "could not draw a tail block with ‖B^k‖ <= 2".into(),
    ))
}

/// `scale · Q (C_k ⊕ B) Q*` with Haar `Q`.
pub fn synthesize_crabb_form(
    k: usize,
    b: &ComplexMatrix,
    scale: f64,
    seed: u64,
) -> Result<SynthesizedCrabbForm> {
    let core = ccc_matrix(k)?.direct_sum(b);
    let mut rng = seeded_rng(seed);
    let q = haar_unitary_with(core.n_rows(), &mut rng);
    let a = core.conjugate_by(&q).scale_real(scale);
    Ok(SynthesizedCrabbForm {
        a,
        q,
        b: b.clone(),
        k,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ccc_layout() {
        let c1 = ccc_matrix(1).unwrap();
        assert_eq!(c1, ComplexMatrix::shift().scale_real(2.0));

        let c2 = ccc_matrix(2).unwrap();
        assert_eq!(c2.n_rows(), 3);
        assert_eq!(c2.get(0, 1).re, SQRT_2);
        assert_eq!(c2.get(1, 2).re, SQRT_2);

        let c4 = ccc_matrix(4).unwrap();
        let sup: Vec<f64> = (0..4).map(|i| c4.get(i, i + 1).re).collect();
        assert_eq!(sup, vec![SQRT_2, 1.0, 1.0, SQRT_2]);
        let nonzero = c4.to_row_major().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 4);

        assert!(ccc_matrix(0).is_err());
    }

    #[test]
    fn ccc_power_is_rank_one() {
        for n in 1..=6 {
            let p = matrix_power(&ccc_matrix(n).unwrap(), n).unwrap();
            let mut want = ComplexMatrix::zeros(n + 1).into_dmatrix();
            want[(0, n)] = C64::new(2.0, 0.0);
            assert!((p.as_dmatrix() - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn monomial_ratio_fixtures() {
        let c = ccc_matrix(3).unwrap();
        let r = crouzeix_monomial_ratio(&c, 3).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-10, "{}", r.ratio);
        assert!(r.cross_check_ok);

        let r = crouzeix_monomial_ratio(&ComplexMatrix::shift(), 1).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-12);

        let d = ComplexMatrix::diagonal(&[ONE, C64::new(0.5, 0.0)]);
        let r = crouzeix_monomial_ratio(&d, 3).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!(r.cross_check_ok);

        assert_eq!(
            crouzeix_monomial_ratio(&ComplexMatrix::zeros(2), 1).unwrap_err(),
            Error::ZeroMatrix
        );
    }

    #[test]
    fn extremality_fixtures() {
        let c = ccc_matrix(4).unwrap();
        let r = monomial_extremality_test(&c, 4, 1e-8).unwrap();
        assert!(r.verdict && r.agree);

        let r = monomial_extremality_test(&ComplexMatrix::shift(), 1, 1e-8).unwrap();
        assert!(r.verdict && r.agree);

        let r = monomial_extremality_test(&ComplexMatrix::diagonal(&[ONE, -ONE]), 1, 1e-8).unwrap();
        assert!(!r.verdict && r.agree);

        let r = monomial_extremality_test(&ComplexMatrix::shift(), 2, 1e-8).unwrap();
        assert!(!r.verdict && r.power_gap.is_none() && r.agree);
    }

    #[test]
    fn chain_on_ccc() {
        for n in 1..=5 {
            let chain = crabb_chain(&ccc_matrix(n).unwrap(), n).unwrap();
            for (got, want) in chain.norm_profile.iter().zip(nominal_profile(n)) {
                assert!((got - want).abs() < 1e-12);
            }
            // v = e_{n+1} up to phase
            assert!((chain.v[n].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_on_scaled_shift() {
        let chain = crabb_chain(&ComplexMatrix::shift().scale_real(2.0), 1).unwrap();
        assert_eq!(chain.norm_profile.len(), 2);
        assert!((chain.norm_profile[0] - 2.0).abs() < 1e-12);
        assert!(crate::linalg::unitarity_defect(&chain.q_k) < 1e-12);
    }

    #[test]
    fn chain_reports_profile_when_structure_is_absent() {
        let d = ComplexMatrix::diagonal(&[ONE, C64::new(0.5, 0.0), C64::new(0.2, 0.0)]);
        match crabb_chain(&d, 2) {
            Err(Error::CrabbStructure { profile }) => assert_eq!(profile.len(), 3),
            other => panic!("expected CrabbStructure, got {other:?}"),
        }
    }

    #[test]
    fn decomposition_of_ccc_has_empty_tail() {
        let c = ccc_matrix(3).unwrap();
        let d = crabb_decomposition(&c, 3, 1e-6).unwrap();
        assert_eq!(d.b.n_rows(), 0);
        assert!(d.residual <= 1e-10);
    }

    #[test]
    fn decomposition_round_trip() {
        let b = ComplexMatrix::from_real_rows(&[[0.3, 0.1], [0.0, -0.2]]).unwrap();
        let s = synthesize_crabb_form(2, &b, 1.7, 21).unwrap();
        let d = crabb_decomposition(&s.a, 2, 1e-6).unwrap();
        assert!((d.radius - 1.7).abs() < 1e-10);
        assert!(d.residual <= 1e-8, "{}", d.residual);
        assert!(d.b_radius <= 1.0 && d.b_power_norm <= 2.0);
        // B is recovered up to unitary similarity
        let r_true = fov::radius(&b).unwrap().radius;
        assert!((d.b_radius - r_true).abs() < 1e-8);
    }

    #[test]
    fn decomposition_rejects_non_extremal() {
        let d = ComplexMatrix::diagonal(&[ONE, C64::new(0.5, 0.0), C64::new(0.2, 0.0)]);
        assert!(matches!(
            crabb_decomposition(&d, 1, 1e-6),
            Err(Error::NotExtremal { .. })
        ));
    }

    #[test]
    fn poly_ratio_fixtures() {
        let j = ComplexMatrix::shift();
        let r = crouzeix_poly_ratio(&j, &[ZERO, ONE]).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-10);
        assert!(!r.noteworthy, "monomials are never flagged");

        let r = crouzeix_poly_ratio(&j, &[ZERO, ZERO, ONE]).unwrap();
        assert_eq!(r.numerator, 0.0);
        assert_eq!(r.ratio, 0.0);

        assert_eq!(
            crouzeix_poly_ratio(&j, &[ZERO, ZERO]).unwrap_err(),
            Error::ZeroPolynomial
        );
        assert_eq!(
            crouzeix_poly_ratio(&j, &[]).unwrap_err(),
            Error::EmptyPolynomial
        );
    }

    #[test]
    fn matrix_horner_matches_powers() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [0.5, -1.0]]).unwrap();
        let coeffs = [C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-3.0, 0.0)];
        let p = eval_matrix_poly(&a, &coeffs).unwrap();
        let want = &(&ComplexMatrix::identity(2) + &a.scale(coeffs[1]))
            + &matrix_power(&a, 2).unwrap().scale(coeffs[2]);
        assert!((&p - &want).frobenius_norm() < 1e-13);
    }
}
