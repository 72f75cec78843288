//! Brute-force references for `r(A)` and membership in `W(A)`.
//!
//! The grid oracle evaluates the same support function as [`crate::fov`] but
//! on a dense grid with no refinement; it is the equality reference. The
//! ascent oracle optimizes `|⟨Az, z⟩|` directly over unit vectors and only
//! ever produces lower bounds.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{random_unit_vector, seeded_rng, spectral_norm};
use crate::matrix::{cis, inner, CVector, ComplexMatrix, C64};

pub const MIN_GRID_POINTS: usize = 10_000;
pub const MIN_RESTARTS: usize = 8;
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_ASCENT_ITERS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    ThetaGrid,
    SphereAscent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub method: OracleMethod,
    pub evaluations: usize,
    /// Only set for the ascent oracle.
    pub seed: Option<u64>,
}

fn require_nontrivial(a: &ComplexMatrix) -> Result<usize> {
    let n = a.order()?;
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    Ok(n)
}

/// `max_j λ_max(H_{θ_j})` over `n_theta` uniform angles, all eigenvalues
/// computed at each angle.
pub fn radius_grid_oracle(a: &ComplexMatrix, n_theta: usize) -> Result<OracleResult> {
    require_nontrivial(a)?;
    if n_theta < MIN_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid oracle needs at least {MIN_GRID_POINTS} angles, got {n_theta}"
        )));
    }
    // H_θ = cos θ · Re A − sin θ · Im A
    let d = a.as_dmatrix();
    let re = (d + d.adjoint()) * C64::new(0.5, 0.0);
    let im = (d - d.adjoint()) * C64::new(0.0, -0.5);
    let mut h = re.clone();
    let mut value = f64::NEG_INFINITY;
    for j in 0..n_theta {
        let (s, c) = (TAU * j as f64 / n_theta as f64).sin_cos();
        for ((hij, &rij), &kij) in h.iter_mut().zip(re.iter()).zip(im.iter()) {
            *hij = rij * c - kij * s;
        }
        let top = h
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        value = value.max(top);
    }
    Ok(OracleResult {
        value: value.max(0.0),
        method: OracleMethod::ThetaGrid,
        evaluations: n_theta,
        seed: None,
    })
}

/// Lower bound on `r(A)` by alternating ascent from random unit starts.
///
/// With `φ = arg⟨Az, z⟩` fixed, `z ↦ (e^{−iφ}A + e^{iφ}A*)z + 2‖A‖z` is a power
/// step for a positive semidefinite shift of `2H_{−φ}`, which cannot decrease
/// `Re(e^{−iφ}⟨Az, z⟩) = |⟨Az, z⟩|`; re-choosing `φ` cannot decrease it either.
pub fn radius_ascent_oracle(
    a: &ComplexMatrix,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<OracleResult> {
    let n = require_nontrivial(a)?;
    if restarts < MIN_RESTARTS {
        return Err(Error::InvalidParameter(format!(
            "ascent oracle needs at least {MIN_RESTARTS} restarts, got {restarts}"
        )));
    }
    let norm = spectral_norm(a)?;
    let adj = a.adjoint();
    let mut rng = seeded_rng(seed);
    let mut best = 0.0_f64;
    let mut evaluations = 0;
    let shift = C64::new(2.0 * norm, 0.0);

    for _ in 0..restarts {
        let mut z = random_unit_vector(n, &mut rng);
        let mut value = inner(&a.apply(&z), &z).norm();
        evaluations += 1;
        for _ in 0..iters {
            if norm == 0.0 {
                break;
            }
            let rq = inner(&a.apply(&z), &z);
            let phase = if rq.norm() > 0.0 {
                rq / rq.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            let next = a.apply(&z) * phase.conj() + adj.apply(&z) * phase + &z * shift;
            let len = next.norm();
            if len == 0.0 {
                break;
            }
            z = next / C64::new(len, 0.0);
            let updated = inner(&a.apply(&z), &z).norm();
            evaluations += 1;
            let gain = updated - value;
            value = value.max(updated);
            if gain <= 1e-16 * norm {
                break;
            }
        }
        best = best.max(value);
    }
    Ok(OracleResult {
        value: best,
        method: OracleMethod::SphereAscent,
        evaluations,
        seed: Some(seed),
    })
}

/// `⟨Az, z⟩` for `count` random unit vectors; each is an element of `W(A)`.
pub fn wa_sample_points(a: &ComplexMatrix, count: usize, seed: u64) -> Result<Vec<C64>> {
    let n = a.order()?;
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    Ok((0..count)
        .map(|_| {
            let z = random_unit_vector(n, &mut rng);
            inner(&a.apply(&z), &z)
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct ConvexityWitness {
    pub target: C64,
    pub z: CVector,
    /// `|⟨Az, z⟩ − target|`
    pub residual: f64,
}

fn unit_in_span(w1: &CVector, w2: &CVector, s: f64, psi: f64) -> CVector {
    w1 * C64::new(s.cos(), 0.0) + w2 * (cis(psi) * s.sin())
}

/// Searches `span{z1, z2}` for a unit vector whose Rayleigh quotient hits
/// `t⟨Az1, z1⟩ + (1−t)⟨Az2, z2⟩`.
///
/// The compression of `A` to that span has an elliptical field of values
/// containing both endpoints, so the target is attainable there.
pub fn convexity_witness(
    a: &ComplexMatrix,
    z1: &CVector,
    z2: &CVector,
    t: f64,
) -> Result<ConvexityWitness> {
    let n = a.order()?;
    if z1.len() != n || z2.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z1.len().max(z2.len()),
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in [0, 1], got {t}"
        )));
    }
    let rq = |z: &CVector| inner(&a.apply(z), z);
    let u1 = z1 / C64::new(z1.norm(), 0.0);
    let u2 = z2 / C64::new(z2.norm(), 0.0);
    let target = rq(&u1) * t + rq(&u2) * (1.0 - t);

    let mut w2 = &u2 - &u1 * inner(&u2, &u1);
    let len = w2.norm();
    if len < 1e-12 {
        // z1 and z2 are parallel: both endpoints coincide
        return Ok(ConvexityWitness {
            target,
            residual: (rq(&u1) - target).norm(),
            z: u1,
        });
    }
    w2 /= C64::new(len, 0.0);
    let w1 = u1;

    let miss = |s: f64, psi: f64| (rq(&unit_in_span(&w1, &w2, s, psi)) - target).norm();

    let (ns, npsi) = (64, 128);
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..=ns {
        let s = std::f64::consts::FRAC_PI_2 * i as f64 / ns as f64;
        for j in 0..npsi {
            let psi = TAU * j as f64 / npsi as f64;
            let m = miss(s, psi);
            if m < best.2 {
                best = (s, psi, m);
            }
        }
    }
    // compass search
    let (mut s, mut psi, mut m) = best;
    let mut step = std::f64::consts::FRAC_PI_2 / ns as f64;
    while step > 1e-12 && m > 1e-13 {
        let mut moved = false;
        for (ds, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let cand = miss(s + ds, psi + dp);
            if cand < m {
                s += ds;
                psi += dp;
                m = cand;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(ConvexityWitness {
        target,
        z: unit_in_span(&w1, &w2, s, psi),
        residual: m,
    })
}
