//! Certification and structure of half-radial matrices, `‖A‖ = 2r(A)`.
//!
//! A nonzero `A` is half-radial iff any of the following holds:
//!
//! * some unit maximizer `z` of `|⟨Az, z⟩|` has an `R(A*)` component `x`
//!   with `⟨Ax, x⟩ = 0` (the set `Θ_A` is non-empty);
//! * for a unit `v ∈ V_max(A)`, `v ∈ R(A*) ∩ N(A*)` and `(v + Av/‖A‖)/√2`
//!   maximizes `|⟨Az, z⟩|`;
//! * `W(A)` is the centred disk of radius `‖A‖/2`;
//! * `A` is unitarily similar to `(‖A‖ I_m ⊗ J) ⊕ B` with `‖B‖ < ‖A‖` and
//!   `r(B) ≤ ‖A‖/2`, where `m = dim V_max(A)`.
//!
//! The subspace conditions reported by [`structural_diagnostics`] are
//! necessary but not sufficient.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::fov::{self, fov_disk_check, numerical_radius, DEFAULT_GRID_SIZE, DEFAULT_REFINE_TOL};
use crate::linalg::{
    gaussian_matrix, haar_unitary_with, orthogonal_decompose, orthonormal_complete,
    orthonormality_defect, rect_spectral_norm, seeded_rng, spectral_norm, svd, DEFAULT_RANK_TOL,
};
use crate::matrix::{cis, inner, CVector, ComplexMatrix, C64};

/// Relative clustering tolerance defining the multiplicity of `σ_max`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
/// Relative tolerance on `|‖A‖ − 2r(A)| / ‖A‖`.
pub const DEFAULT_TAU: f64 = 1e-8;
/// Gaps in `(τ, BORDERLINE_FACTOR·τ)` are reported as borderline.
pub const BORDERLINE_FACTOR: f64 = 100.0;
/// Attempts at drawing a tail block with `‖B‖ < σ` during synthesis.
pub const MAX_SYNTHESIS_ATTEMPTS: usize = 100;

/// Tolerances and grid sizes used by the certification routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    pub tau: f64,
    pub cluster_tol: f64,
    pub grid_size: usize,
    pub refine_tol: f64,
    /// Directions used by the disk check.
    pub disk_count: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            tau: DEFAULT_TAU,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            grid_size: DEFAULT_GRID_SIZE,
            refine_tol: DEFAULT_REFINE_TOL,
            disk_count: DEFAULT_GRID_SIZE,
        }
    }
}

impl CertifyConfig {
    pub fn with_tau(tau: f64) -> Self {
        Self {
            tau,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in (0, 1), got {}",
                self.tau
            )));
        }
        if !(self.cluster_tol > 0.0 && self.cluster_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cluster tolerance must lie in (0, 1), got {}",
                self.cluster_tol
            )));
        }
        Ok(())
    }
}

/// Rejects the zero matrix and `n < 2`.
pub fn require_admissible(a: &ComplexMatrix) -> Result<usize> {
    let n = a.order()?;
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(n)
}

/// Orthonormal bases of the maximum right and left singular subspaces.
#[derive(Debug, Clone)]
pub struct MaxSingularSubspaces {
    pub sigma_max: f64,
    pub multiplicity: usize,
    /// `n x m`, columns span `V_max(A)`.
    pub v_basis: ComplexMatrix,
    /// `n x m`, columns span `U_max(A)`; column `i` is paired with `v_basis` column `i`.
    pub u_basis: ComplexMatrix,
    pub cluster_tol: f64,
    pub singular_values: Vec<f64>,
}

impl MaxSingularSubspaces {
    /// Number of singular values `≤ ε·σ_max`.
    pub fn zero_multiplicity(&self) -> usize {
        let cutoff = self.cluster_tol * self.sigma_max;
        self.singular_values
            .iter()
            .filter(|&&s| s <= cutoff)
            .count()
    }

    /// `‖v − P v‖` for the orthogonal projector `P` onto `V_max(A)`.
    pub fn distance_to_vmax(&self, v: &CVector) -> f64 {
        let mut p = CVector::zeros(v.len());
        for c in self.v_basis.columns() {
            p += &c * inner(v, &c);
        }
        (v - p).norm()
    }
}

/// `m` = number of `σ_i ≥ (1 − ε)σ_max`; the bases are the matching SVD columns.
pub fn max_singular_subspaces(a: &ComplexMatrix, cluster_tol: f64) -> Result<MaxSingularSubspaces> {
    let n = a.order()?;
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !(cluster_tol > 0.0 && cluster_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cluster tolerance must lie in (0, 1), got {cluster_tol}"
        )));
    }
    let dec = svd(a)?;
    let sigma_max = dec.sigma_max();
    let multiplicity = dec
        .singular_values
        .iter()
        .take_while(|&&s| s >= (1.0 - cluster_tol) * sigma_max)
        .count();
    let v_cols: Vec<CVector> = (0..multiplicity).map(|i| dec.v.column(i)).collect();
    let u_cols: Vec<CVector> = (0..multiplicity).map(|i| dec.u.column(i)).collect();
    Ok(MaxSingularSubspaces {
        sigma_max,
        multiplicity,
        v_basis: ComplexMatrix::from_columns(n, &v_cols),
        u_basis: ComplexMatrix::from_columns(n, &u_cols),
        cluster_tol,
        singular_values: dec.singular_values,
    })
}

/// Outcome of one named condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
}

impl Check {
    fn within(residual: f64, tol: f64) -> Self {
        Self {
            passed: residual <= tol,
            residual,
        }
    }
}

/// The necessary subspace conditions on `V_max(A)` and `U_max(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralDiagnostics {
    pub multiplicity: usize,
    pub zero_multiplicity: usize,
    /// `‖A* V_max‖ / ‖A‖`
    pub vmax_in_null_astar: Check,
    /// `‖A U_max‖ / ‖A‖`
    pub umax_in_null_a: Check,
    /// `‖U_max* V_max‖`
    pub subspace_orthogonality: Check,
    /// residual = `max(0, m − n/2)`
    pub mult_le_half_n: Check,
    /// residual = `max(0, m − #{σ_i ≤ ε σ_max})`
    pub zero_mult_ge_m: Check,
}

impl StructuralDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    pub fn checks(&self) -> [(&'static str, Check); 5] {
        [
            ("vmax_in_null_Astar", self.vmax_in_null_astar),
            ("umax_in_null_A", self.umax_in_null_a),
            ("subspace_orthogonality", self.subspace_orthogonality),
            ("mult_le_half_n", self.mult_le_half_n),
            ("zero_mult_ge_m", self.zero_mult_ge_m),
        ]
    }
}

fn structural_from_subspaces(
    a: &ComplexMatrix,
    subspaces: &MaxSingularSubspaces,
    tau: f64,
) -> StructuralDiagnostics {
    let n = a.n_rows();
    let norm = subspaces.sigma_max;
    let m = subspaces.multiplicity;
    let zero_multiplicity = subspaces.zero_multiplicity();

    let astar_v = &a.adjoint() * &subspaces.v_basis;
    let a_u = a * &subspaces.u_basis;
    let cross = &subspaces.u_basis.adjoint() * &subspaces.v_basis;

    let excess = |lhs: usize, rhs: f64| (lhs as f64 - rhs).max(0.0);
    StructuralDiagnostics {
        multiplicity: m,
        zero_multiplicity,
        vmax_in_null_astar: Check::within(rect_spectral_norm(&astar_v) / norm, tau),
        umax_in_null_a: Check::within(rect_spectral_norm(&a_u) / norm, tau),
        subspace_orthogonality: Check::within(rect_spectral_norm(&cross), tau),
        mult_le_half_n: Check::within(excess(m, n as f64 / 2.0), 0.0),
        zero_mult_ge_m: Check::within(excess(m, zero_multiplicity as f64), 0.0),
    }
}

/// Checks `V_max ⊆ N(A*)`, `U_max ⊆ N(A)`, `V_max ⟂ U_max`, `m ≤ n/2` and
/// that the zero singular value has multiplicity at least `m`.
pub fn structural_diagnostics(
    a: &ComplexMatrix,
    cluster_tol: f64,
    tau: f64,
) -> Result<StructuralDiagnostics> {
    require_admissible(a)?;
    let subspaces = max_singular_subspaces(a, cluster_tol)?;
    Ok(structural_from_subspaces(a, &subspaces, tau))
}

/// Verdict and per-condition diagnostics for `‖A‖ = 2r(A)`.
#[derive(Debug, Clone)]
pub struct HalfRadialReport {
    pub verdict: bool,
    /// Gap in `(τ, 100τ)`: too close to call either way with confidence.
    pub borderline: bool,
    pub norm: f64,
    pub radius: f64,
    pub theta_star: f64,
    /// `|‖A‖ − 2r(A)| / ‖A‖`
    pub gap: f64,
    pub tol: f64,
    pub cluster_tol: f64,
    pub structural: StructuralDiagnostics,
    /// `(v + Av/‖A‖)/√2` for the first basis vector of `V_max` lies in `Θ_A`.
    pub theta_nonempty: Check,
    pub disk_check: Check,
}

impl HalfRadialReport {
    pub fn multiplicity(&self) -> usize {
        self.structural.multiplicity
    }

    /// All seven named conditions in a fixed order.
    pub fn diagnostics(&self) -> Vec<(&'static str, Check)> {
        let mut out = vec![("theta_nonempty", self.theta_nonempty)];
        out.extend(self.structural.checks());
        out.push(("disk_check", self.disk_check));
        out
    }

    pub fn all_diagnostics_passed(&self) -> bool {
        self.diagnostics().iter().all(|(_, c)| c.passed)
    }
}

/// Certifies half-radiality with default settings and tolerance `tau`.
pub fn is_half_radial(a: &ComplexMatrix, tau: f64) -> Result<HalfRadialReport> {
    certify(a, &CertifyConfig::with_tau(tau))
}

/// Verdict is `|‖A‖ − 2r(A)| ≤ τ‖A‖`; every diagnostic is evaluated regardless.
pub fn certify(a: &ComplexMatrix, config: &CertifyConfig) -> Result<HalfRadialReport> {
    require_admissible(a)?;
    config.validate()?;
    let subspaces = max_singular_subspaces(a, config.cluster_tol)?;
    let norm = subspaces.sigma_max;
    let nr = numerical_radius(a, config.grid_size, config.refine_tol)?;
    let radius = nr.radius;
    let gap = (norm - 2.0 * radius).abs() / norm;
    let tau = config.tau;

    let structural = structural_from_subspaces(a, &subspaces, tau);

    let v = subspaces.v_basis.column(0);
    let u = subspaces.u_basis.column(0);
    let z = (&v + &u) * C64::new(FRAC_1_SQRT_2, 0.0);
    let membership = theta_membership(a, &z, tau, radius, norm)?;
    let theta_nonempty = Check {
        passed: membership.member,
        residual: membership.worst_residual(),
    };

    let disk = fov_disk_check(a, config.disk_count, tau)?;
    let disk_check = Check {
        passed: disk.is_disk,
        residual: disk.spread.max(disk.radius_offset),
    };

    Ok(HalfRadialReport {
        verdict: gap <= tau,
        borderline: gap > tau && gap < BORDERLINE_FACTOR * tau,
        norm,
        radius,
        theta_star: nr.theta_star,
        gap,
        tol: tau,
        cluster_tol: config.cluster_tol,
        structural,
        theta_nonempty,
        disk_check,
    })
}

/// Result of testing a unit vector of `V_max(A)` against the maximizer
/// characterization.
#[derive(Debug, Clone)]
pub struct MaximizerCheck {
    pub passed: bool,
    pub z: CVector,
    /// `|⟨Az, z⟩|`
    pub rayleigh: f64,
    pub radius: f64,
    /// `‖v − P_{R(A*)} v‖`
    pub v_range_residual: f64,
    /// `‖A* v‖ / ‖A‖`
    pub v_null_residual: f64,
    /// `‖w − P_{R(A)} w‖` with `w = Av/‖A‖`
    pub av_range_residual: f64,
    /// `‖A w‖ / ‖A‖`
    pub av_null_residual: f64,
    /// `| |⟨Az, z⟩| − r(A) | / ‖A‖`
    pub maximizer_residual: f64,
}

/// Tests `v ∈ R(A*) ∩ N(A*)`, `Av ∈ R(A) ∩ N(A)` and that
/// `z = (v + Av/‖A‖)/√2` maximizes `|⟨Az, z⟩|`.
pub fn check_maximizer_condition(
    a: &ComplexMatrix,
    v: &CVector,
    tau: f64,
) -> Result<MaximizerCheck> {
    let n = require_admissible(a)?;
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let subspaces = max_singular_subspaces(a, DEFAULT_CLUSTER_TOL)?;
    let v = v / C64::new(v.norm(), 0.0);
    let distance = subspaces.distance_to_vmax(&v);
    if distance > tau.max(1e-12) {
        return Err(Error::NotInVmax { residual: distance });
    }
    let norm = subspaces.sigma_max;
    let radius = fov::radius(a)?.radius;

    let w = a.apply(&v) / C64::new(norm, 0.0);
    let v_split = orthogonal_decompose(a, &v, DEFAULT_RANK_TOL)?;
    let w_split = orthogonal_decompose(&a.adjoint(), &w, DEFAULT_RANK_TOL)?;
    let v_range_residual = v_split.y.norm();
    let v_null_residual = a.adjoint().apply(&v).norm() / norm;
    let av_range_residual = w_split.y.norm();
    let av_null_residual = a.apply(&w).norm() / norm;

    let z = (&v + &w) * C64::new(FRAC_1_SQRT_2, 0.0);
    let rayleigh = inner(&a.apply(&z), &z).norm();
    let maximizer_residual = (rayleigh - radius).abs() / norm;

    let passed = [
        v_range_residual,
        v_null_residual,
        av_range_residual,
        av_null_residual,
        maximizer_residual,
    ]
    .iter()
    .all(|&r| r <= tau);
    Ok(MaximizerCheck {
        passed,
        z,
        rayleigh,
        radius,
        v_range_residual,
        v_null_residual,
        av_range_residual,
        av_null_residual,
        maximizer_residual,
    })
}

/// An element of `Ω_A` with its `R(A*)`/`N(A)` split.
#[derive(Debug, Clone)]
pub struct MaximizerSample {
    pub z: CVector,
    pub v: CVector,
    pub u: CVector,
    pub alpha: f64,
    pub beta: f64,
    /// Component of `z` in `R(A*)`.
    pub x: CVector,
    /// Component of `z` in `N(A)`.
    pub y: CVector,
    /// `⟨Ax, y⟩`
    pub gamma: C64,
}

/// A matrix that passed certification, with the data needed to sample `Ω_A`.
#[derive(Debug, Clone)]
pub struct CertifiedHalfRadial {
    a: ComplexMatrix,
    report: HalfRadialReport,
    subspaces: MaxSingularSubspaces,
}

impl CertifiedHalfRadial {
    pub fn new(a: &ComplexMatrix, config: &CertifyConfig) -> Result<Self> {
        let report = certify(a, config)?;
        if !report.verdict {
            return Err(Error::NotHalfRadial { gap: report.gap });
        }
        let subspaces = max_singular_subspaces(a, config.cluster_tol)?;
        Ok(Self {
            a: a.clone(),
            report,
            subspaces,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn report(&self) -> &HalfRadialReport {
        &self.report
    }

    pub fn subspaces(&self) -> &MaxSingularSubspaces {
        &self.subspaces
    }

    /// `z = (e^{iα}v + e^{iβ}u)/√2` with `u = Av/‖A‖`.
    pub fn sample_omega(&self, v: &CVector, alpha: f64, beta: f64) -> Result<MaximizerSample> {
        let n = self.a.n_rows();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if (v.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "v must have unit norm, got {}",
                v.norm()
            )));
        }
        let distance = self.subspaces.distance_to_vmax(v);
        if distance > 1e-8 {
            return Err(Error::NotInVmax { residual: distance });
        }
        let norm = self.subspaces.sigma_max;
        let u = self.a.apply(v) / C64::new(norm, 0.0);
        let z = (v * cis(alpha) + &u * cis(beta)) * C64::new(FRAC_1_SQRT_2, 0.0);
        let split = orthogonal_decompose(&self.a, &z, DEFAULT_RANK_TOL)?;
        let gamma = inner(&self.a.apply(&split.x), &split.y);
        Ok(MaximizerSample {
            z,
            v: v.clone(),
            u,
            alpha,
            beta,
            x: split.x,
            y: split.y,
            gamma,
        })
    }
}

/// Samples `Ω_A` after certifying `A` with default settings.
pub fn sample_omega(
    a: &ComplexMatrix,
    v: &CVector,
    alpha: f64,
    beta: f64,
) -> Result<MaximizerSample> {
    CertifiedHalfRadial::new(a, &CertifyConfig::default())?.sample_omega(v, alpha, beta)
}

/// Residuals of the three defining conditions of `Θ_A`.
#[derive(Debug, Clone)]
pub struct ThetaMembership {
    pub member: bool,
    /// `|‖z‖ − 1|`
    pub norm_residual: f64,
    /// `| |⟨Az, z⟩| − r(A) | / max(1, r(A))`
    pub radius_residual: f64,
    /// `|⟨Ax, x⟩| / ‖A‖`
    pub quadratic_residual: f64,
    pub x: CVector,
    pub y: CVector,
}

impl ThetaMembership {
    pub fn worst_residual(&self) -> f64 {
        self.norm_residual
            .max(self.radius_residual)
            .max(self.quadratic_residual)
    }
}

fn theta_membership(
    a: &ComplexMatrix,
    z: &CVector,
    tau: f64,
    radius: f64,
    norm: f64,
) -> Result<ThetaMembership> {
    let split = orthogonal_decompose(a, z, DEFAULT_RANK_TOL)?;
    let norm_residual = (z.norm() - 1.0).abs();
    let radius_residual = (inner(&a.apply(z), z).norm() - radius).abs() / radius.max(1.0);
    let quadratic_residual = if norm > 0.0 {
        inner(&a.apply(&split.x), &split.x).norm() / norm
    } else {
        0.0
    };
    Ok(ThetaMembership {
        member: norm_residual <= tau && radius_residual <= tau && quadratic_residual <= tau,
        norm_residual,
        radius_residual,
        quadratic_residual,
        x: split.x,
        y: split.y,
    })
}

/// `z ∈ Θ_A`: unit norm, maximizes `|⟨Az, z⟩|`, and `⟨Ax, x⟩ = 0` for its
/// `R(A*)` component `x`.
pub fn is_in_theta(a: &ComplexMatrix, z: &CVector, tau: f64) -> Result<ThetaMembership> {
    let n = a.order()?;
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    let radius = fov::radius(a)?.radius;
    is_in_theta_with_radius(a, z, tau, radius)
}

/// As [`is_in_theta`] with a precomputed `r(A)`.
pub fn is_in_theta_with_radius(
    a: &ComplexMatrix,
    z: &CVector,
    tau: f64,
    radius: f64,
) -> Result<ThetaMembership> {
    let n = a.order()?;
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    let norm = spectral_norm(a)?;
    theta_membership(a, z, tau, radius, norm)
}

/// `σ (I_m ⊗ J)`.
pub fn shift_blocks(m: usize, sigma: f64) -> ComplexMatrix {
    let mut out = ComplexMatrix::wrap(nalgebra::DMatrix::zeros(0, 0));
    let block = ComplexMatrix::shift().scale_real(sigma);
    for _ in 0..m {
        out = out.direct_sum(&block);
    }
    out
}

/// Unitary similarity `Q* A Q = (σ I_m ⊗ J) ⊕ B`.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    pub q: ComplexMatrix,
    pub m: usize,
    pub sigma: f64,
    /// `(n − 2m) x (n − 2m)`, possibly empty.
    pub b: ComplexMatrix,
    /// `‖Q* A Q − ((σ I_m ⊗ J) ⊕ B)‖_F`
    pub residual: f64,
    pub b_norm: f64,
    pub b_radius: f64,
}

/// Relative residual bound for an accepted canonical decomposition.
pub const CANONICAL_RESIDUAL_TOL: f64 = 1e-8;

/// Builds `Q = [u_1, v_1, …, u_m, v_m, P]` for a certified half-radial `A`.
pub fn canonical_decomposition(
    a: &ComplexMatrix,
    cluster_tol: f64,
) -> Result<CanonicalDecomposition> {
    let config = CertifyConfig {
        cluster_tol,
        ..CertifyConfig::default()
    };
    let certified = CertifiedHalfRadial::new(a, &config)?;
    let n = a.n_rows();
    let sub = certified.subspaces();
    let m = sub.multiplicity;
    let sigma = sub.sigma_max;

    let mut columns = Vec::with_capacity(2 * m);
    for i in 0..m {
        let v = sub.v_basis.column(i);
        // pair u_i = A v_i / σ
        let u = a.apply(&v) / C64::new(sigma, 0.0);
        columns.push(u);
        columns.push(v);
    }
    let defect = orthonormality_defect(&columns);
    if defect > 1e-8 {
        return Err(Error::NotOrthonormal { residual: defect });
    }
    let q = orthonormal_complete(n, &columns)?;
    let rotated = &(&q.adjoint() * a) * &q;
    let tail = n - 2 * m;
    let b = rotated.principal_block(2 * m, tail);
    let model = shift_blocks(m, sigma).direct_sum(&b);
    let residual = (&rotated - &model).frobenius_norm();
    if residual > CANONICAL_RESIDUAL_TOL * sigma {
        return Err(Error::NumericalFailure(format!(
            "canonical decomposition residual {residual:.3e} exceeds {:.1e}·‖A‖",
            CANONICAL_RESIDUAL_TOL
        )));
    }
    let (b_norm, b_radius) = if tail == 0 {
        (0.0, 0.0)
    } else {
        (spectral_norm(&b)?, fov::radius(&b)?.radius)
    };
    Ok(CanonicalDecomposition {
        q,
        m,
        sigma,
        b,
        residual,
        b_norm,
        b_radius,
    })
}

/// Pieces of a synthesized half-radial matrix `A = Q((σ I_m ⊗ J) ⊕ B)Q*`.
#[derive(Debug, Clone)]
pub struct SynthesizedHalfRadial {
    pub a: ComplexMatrix,
    pub q: ComplexMatrix,
    pub b: ComplexMatrix,
    pub m: usize,
    pub sigma: f64,
    pub seed: u64,
}

/// Draws a random half-radial matrix of order `n` with `dim V_max = m`.
///
/// The tail block is a complex Gaussian matrix rescaled so that
/// `r(B) = b_radius_frac·σ/2`, redrawn while `‖B‖ ≥ σ`.
pub fn synthesize_half_radial_parts(
    n: usize,
    m: usize,
    sigma: f64,
    b_radius_frac: f64,
    seed: u64,
) -> Result<SynthesizedHalfRadial> {
    if m < 1 || 2 * m > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m <= n/2, got n = {n}, m = {m}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !(0.0..1.0).contains(&b_radius_frac) {
        return Err(Error::InvalidParameter(format!(
            "b_radius_frac must lie in [0, 1), got {b_radius_frac}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let tail = n - 2 * m;
    let b = if tail == 0 {
        ComplexMatrix::wrap(nalgebra::DMatrix::zeros(0, 0))
    } else {
        let target = b_radius_frac * sigma / 2.0;
        let mut accepted = None;
        for _ in 0..MAX_SYNTHESIS_ATTEMPTS {
            let g = gaussian_matrix(tail, tail, &mut rng);
            let rg = fov::radius(&g)?.radius;
            if rg == 0.0 {
                continue;
            }
            let b = g.scale_real(target / rg);
            if spectral_norm(&b)? < sigma {
                accepted = Some(b);
                break;
            }
        }
        accepted.ok_or_else(|| {
            Error::NumericalFailure("could not draw a tail block with ‖B‖ < σ".into())
        })?
    };
    let q = haar_unitary_with(n, &mut rng);
    let a = shift_blocks(m, sigma).direct_sum(&b).conjugate_by(&q);
    Ok(SynthesizedHalfRadial {
        a,
        q,
        b,
        m,
        sigma,
        seed,
    })
}

/// Random half-radial matrix; the result is certified before it is returned.
pub fn synthesize_half_radial(
    n: usize,
    m: usize,
    sigma: f64,
    b_radius_frac: f64,
    seed: u64,
) -> Result<ComplexMatrix> {
    let parts = synthesize_half_radial_parts(n, m, sigma, b_radius_frac, seed)?;
    let report = is_half_radial(&parts.a, DEFAULT_TAU)?;
    if !report.verdict {
        return Err(Error::NumericalFailure(format!(
            "synthesized matrix failed certification (gap {:.3e})",
            report.gap
        )));
    }
    Ok(parts.a)
}
