//! Field of values and numerical radius.
//!
//! Everything here is driven by the support function of `W(A)`:
//! `g(θ) = λ_max(H_θ)` with `H_θ = (e^{iθ}A + e^{−iθ}A*)/2`. The half-plane
//! `Re(e^{iθ}ζ) ≤ g(θ)` contains `W(A)` and touches it at `⟨A q_θ, q_θ⟩`
//! for any top eigenvector `q_θ`, and `r(A) = max_θ g(θ)`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::golden;
use crate::linalg::{hermitian_eigmax, hermitian_lambda_max, spectral_norm};
use crate::matrix::{cis, inner, CVector, ComplexMatrix, C64, ZERO};

pub const DEFAULT_GRID_SIZE: usize = 512;
pub const DEFAULT_REFINE_TOL: f64 = 1e-12;
pub const DEFAULT_BOUNDARY_COUNT: usize = 1024;
pub const MIN_GRID_SIZE: usize = 64;
pub const MIN_BOUNDARY_COUNT: usize = 8;
pub const MIN_DISK_CHECK_COUNT: usize = 64;

/// `(e^{iθ}A + e^{−iθ}A*)/2`, Hermitian by construction.
pub fn rotated_hermitian_part(a: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let n = a.order()?;
    let w = cis(theta);
    let m = a.as_dmatrix();
    let mut h = nalgebra::DMatrix::from_element(n, n, ZERO);
    for i in 0..n {
        h[(i, i)] = C64::new((w * m[(i, i)]).re, 0.0);
        for j in (i + 1)..n {
            let hij = (w * m[(i, j)] + (w * m[(j, i)]).conj()) * 0.5;
            h[(i, j)] = hij;
            h[(j, i)] = hij.conj();
        }
    }
    Ok(ComplexMatrix::wrap(h))
}

/// Support function `g(θ) = λ_max(H_θ)`.
pub fn support(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    hermitian_lambda_max(&rotated_hermitian_part(a, theta)?)
}

/// Support value together with the boundary point `⟨A q_θ, q_θ⟩`.
pub fn support_point(a: &ComplexMatrix, theta: f64) -> Result<(f64, C64, CVector)> {
    let (lambda, q) = hermitian_eigmax(&rotated_hermitian_part(a, theta)?)?;
    let point = inner(&a.apply(&q), &q);
    Ok((lambda, point, q))
}

#[derive(Debug, Clone)]
pub struct NumericalRadiusResult {
    pub radius: f64,
    pub theta_star: f64,
    /// Unit vector with `|⟨A z, z⟩| = radius`.
    pub maximizer: CVector,
    pub grid_size: usize,
    pub refined: bool,
    /// Number of grid-local maxima that were refined.
    pub refined_maxima: usize,
}

impl NumericalRadiusResult {
    /// `|⟨A z*, z*⟩|`.
    pub fn attained(&self, a: &ComplexMatrix) -> f64 {
        inner(&a.apply(&self.maximizer), &self.maximizer).norm()
    }
}

/// Numerical radius with the default grid and refinement tolerance.
pub fn radius(a: &ComplexMatrix) -> Result<NumericalRadiusResult> {
    numerical_radius(a, DEFAULT_GRID_SIZE, DEFAULT_REFINE_TOL)
}

/// `r(A) = max_θ λ_max(H_θ)`.
///
/// `g` is sampled on a uniform grid over `[0, 2π)`; every grid-local maximum
/// that could still beat the best grid value is refined by golden-section
/// search down to a bracket of width `refine_tol`.
pub fn numerical_radius(
    a: &ComplexMatrix,
    grid_size: usize,
    refine_tol: f64,
) -> Result<NumericalRadiusResult> {
    let n = a.order()?;
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if grid_size < MIN_GRID_SIZE {
        return Err(Error::InvalidParameter(format!(
            "grid_size must be at least {MIN_GRID_SIZE}, got {grid_size}"
        )));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "refine_tol must be positive, got {refine_tol}"
        )));
    }
    if a.is_zero() {
        let mut e1 = CVector::zeros(n);
        e1[0] = C64::new(1.0, 0.0);
        return Ok(NumericalRadiusResult {
            radius: 0.0,
            theta_star: 0.0,
            maximizer: e1,
            grid_size,
            refined: false,
            refined_maxima: 0,
        });
    }

    let step = TAU / grid_size as f64;
    let grid: Vec<f64> = (0..grid_size)
        .map(|j| support(a, j as f64 * step))
        .collect::<Result<_>>()?;
    let (mut best_theta, mut best_value) = grid
        .iter()
        .enumerate()
        .map(|(j, &g)| (j as f64 * step, g))
        .fold(
            (0.0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );

    // |g'(θ)| ≤ ‖A‖ ≤ ‖A‖_F, so a bracket around grid point j cannot exceed
    // g_j + ‖A‖_F·step.
    let lipschitz = a.frobenius_norm();
    let flat_tol = 4.0 * f64::EPSILON * best_value.abs().max(lipschitz * 1e-3);
    let grid_best = best_value;

    let mut refined_maxima = 0;
    for j in 0..grid_size {
        let prev = grid[(j + grid_size - 1) % grid_size];
        let next = grid[(j + 1) % grid_size];
        let g = grid[j];
        if g < prev || g < next {
            continue;
        }
        if g + lipschitz * step < grid_best {
            continue;
        }
        refined_maxima += 1;
        let center = j as f64 * step;
        let mut failure = None;
        let found = golden::maximize(
            |t| match support(a, t) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    f64::NEG_INFINITY
                }
            },
            center - step,
            center + step,
            refine_tol,
            flat_tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        if found.value > best_value {
            best_value = found.value;
            best_theta = found.x;
        }
    }

    let theta_star = best_theta.rem_euclid(TAU);
    let (lambda, _, q) = support_point(a, theta_star)?;
    Ok(NumericalRadiusResult {
        radius: lambda.max(best_value).max(0.0),
        theta_star,
        maximizer: q,
        grid_size,
        refined: refined_maxima > 0,
        refined_maxima,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub theta: f64,
    /// `λ_max(H_θ)`
    pub support: f64,
    /// `⟨A q_θ, q_θ⟩`
    pub point: C64,
}

/// Support-function sweep of `W(A)`.
///
/// The convex hull of the points is an inner approximation of `W(A)`; the
/// intersection of the half-planes `Re(e^{iθ}ζ) ≤ support` an outer one.
#[derive(Debug, Clone)]
pub struct FovBoundary {
    pub samples: Vec<BoundarySample>,
}

impl FovBoundary {
    pub fn points(&self) -> Vec<C64> {
        self.samples.iter().map(|s| s.point).collect()
    }

    /// Largest violation of the outer half-planes by `zeta` (non-positive if inside).
    pub fn outer_excess(&self, zeta: C64) -> f64 {
        self.samples
            .iter()
            .map(|s| (cis(s.theta) * zeta).re - s.support)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn outer_contains(&self, zeta: C64, tol: f64) -> bool {
        self.outer_excess(zeta) <= tol
    }

    pub fn support_range(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.support), hi.max(s.support))
            })
    }
}

/// Samples the boundary of `W(A)` at `θ_j = 2πj/count`.
pub fn fov_boundary(a: &ComplexMatrix, count: usize) -> Result<FovBoundary> {
    a.order()?;
    if count < MIN_BOUNDARY_COUNT {
        return Err(Error::InvalidParameter(format!(
            "boundary count must be at least {MIN_BOUNDARY_COUNT}, got {count}"
        )));
    }
    let samples = (0..count)
        .map(|j| {
            let theta = TAU * j as f64 / count as f64;
            let (support, point, _) = support_point(a, theta)?;
            Ok(BoundarySample {
                theta,
                support,
                point,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FovBoundary { samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskCheck {
    pub is_disk: bool,
    pub norm: f64,
    pub support_min: f64,
    pub support_max: f64,
    /// `(max − min)` of the supports relative to `‖A‖`.
    pub spread: f64,
    /// `|max support − ‖A‖/2|` relative to `‖A‖`.
    pub radius_offset: f64,
    pub note: Option<String>,
}

/// Tests whether `W(A)` is the disk centred at zero of radius `‖A‖/2`.
pub fn fov_disk_check(a: &ComplexMatrix, count: usize, tau: f64) -> Result<DiskCheck> {
    a.order()?;
    if count < MIN_DISK_CHECK_COUNT {
        return Err(Error::InvalidParameter(format!(
            "disk check needs at least {MIN_DISK_CHECK_COUNT} directions, got {count}"
        )));
    }
    let norm = spectral_norm(a)?;
    if norm == 0.0 {
        return Ok(DiskCheck {
            is_disk: true,
            norm,
            support_min: 0.0,
            support_max: 0.0,
            spread: 0.0,
            radius_offset: 0.0,
            note: Some("zero matrix: W(A) = {0}, vacuously a disk of radius 0".into()),
        });
    }
    let step = TAU / count as f64;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..count {
        let g = support(a, j as f64 * step)?;
        lo = lo.min(g);
        hi = hi.max(g);
    }
    let spread = (hi - lo) / norm;
    let radius_offset = (hi - norm / 2.0).abs() / norm;
    Ok(DiskCheck {
        is_disk: spread <= tau && radius_offset <= tau,
        norm,
        support_min: lo,
        support_max: hi,
        spread,
        radius_offset,
        note: None,
    })
}

/// Evaluates `p(ζ) = Σ c_i ζ^i` by Horner's rule (coefficients in ascending degree).
pub fn eval_poly(coeffs: &[C64], zeta: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * zeta + c)
}

/// `max_{ζ ∈ W(A)} |p(ζ)|`, coefficients in ascending degree.
///
/// By the maximum-modulus principle the maximum sits on the boundary; it is
/// taken over the boundary sweep and then polished by a local search around
/// the best sample. Every probed point lies in `W(A)`, so the value never
/// overestimates the true maximum.
pub fn max_poly_on_fov(a: &ComplexMatrix, coeffs: &[C64], count: usize) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if count < MIN_DISK_CHECK_COUNT {
        return Err(Error::InvalidParameter(format!(
            "boundary count must be at least {MIN_DISK_CHECK_COUNT}, got {count}"
        )));
    }
    let boundary = fov_boundary(a, count)?;
    let (best_idx, best) = boundary
        .samples
        .iter()
        .enumerate()
        .map(|(j, s)| (j, eval_poly(coeffs, s.point).norm()))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );

    let step = TAU / count as f64;
    let center = boundary.samples[best_idx].theta;
    let mut failure = None;
    let polished = golden::maximize(
        |t| match support_point(a, t) {
            Ok((_, p, _)) => eval_poly(coeffs, p).norm(),
            Err(e) => {
                failure = Some(e);
                f64::NEG_INFINITY
            }
        },
        center - step,
        center + step,
        1e-10,
        4.0 * f64::EPSILON * best.max(f64::MIN_POSITIVE),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best.max(polished.value))
}
