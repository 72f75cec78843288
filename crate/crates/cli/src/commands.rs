use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use halfradial::crouzeix::{
    ccc_matrix, crabb_decomposition, crouzeix_monomial_ratio, monomial_extremality_test,
    CrabbDecomposition, CHAIN_TOL,
};
use halfradial::fov::{fov_boundary, numerical_radius, NumericalRadiusResult};
use halfradial::halfradial::{
    canonical_decomposition, certify, require_admissible, synthesize_half_radial,
    CanonicalDecomposition, CertifyConfig, CANONICAL_RESIDUAL_TOL,
};
use halfradial::linalg::{haar_unitary, spectral_norm};
use halfradial::oracle::{radius_ascent_oracle, DEFAULT_ASCENT_ITERS, DEFAULT_RESTARTS};
use halfradial::{ComplexMatrix, Error};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::io::{matrix_grid, matrix_json, parse_matrix, read_input, Metadata};
use crate::report::*;

/// Relative accuracy attributed to the SVD-based spectral norm.
pub const NORM_TOL: f64 = 1e-12;
/// Slack allowed between the ascent lower bound and the refined radius.
pub const ORACLE_CONSISTENCY_TOL: f64 = 1e-8;
/// Largest power examined when `--k-max` is not given.
pub const DEFAULT_K_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub tau: f64,
    pub eps: f64,
    pub grid: usize,
    pub refine_tol: f64,
    pub boundary_count: usize,
    pub seed: u64,
    pub format: Format,
}

impl Settings {
    fn certify_config(&self) -> CertifyConfig {
        CertifyConfig {
            tau: self.tau,
            cluster_tol: self.eps,
            grid_size: self.grid,
            refine_tol: self.refine_tol,
            disk_count: self.boundary_count,
        }
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            tau: self.tau,
            eps: self.eps,
            grid: self.grid,
            refine_tol: self.refine_tol,
            boundary_count: self.boundary_count,
        }
    }

    fn render<T: serde::Serialize>(&self, report: &T, text: impl FnOnce(&T) -> String) -> String {
        match self.format {
            Format::Json => to_json(report),
            Format::Text => text(report),
        }
    }
}

struct Loaded {
    matrix: ComplexMatrix,
    info: InputInfo,
}

fn load(path: &str) -> Result<Loaded> {
    let bytes = read_input(path)?;
    let digest = Sha256::digest(&bytes);
    let sha256 = digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    let parsed = parse_matrix(&bytes)?;
    let name = parsed
        .metadata
        .get("name")
        .and_then(|v| v.as_str())
        .map(str::to_owned);
    let n = parsed.matrix.n_rows();
    Ok(Loaded {
        matrix: parsed.matrix,
        info: InputInfo { sha256, n, name },
    })
}

fn default_k_max(n: usize) -> usize {
    n.saturating_sub(1).clamp(1, DEFAULT_K_CAP)
}

fn radius_info(nr: &NumericalRadiusResult, settings: &Settings) -> RadiusInfo {
    RadiusInfo {
        value: nr.radius,
        tol: settings.refine_tol,
        theta_star: nr.theta_star,
        method: "theta-grid+golden",
        grid: nr.grid_size,
    }
}

fn decomposition_summary(d: &CanonicalDecomposition) -> DecompositionSummary {
    DecompositionSummary {
        m: d.m,
        sigma: d.sigma,
        b_order: d.b.n_rows(),
        b_norm: d.b_norm,
        b_radius: d.b_radius,
        residual: Tagged::new(d.residual, CANONICAL_RESIDUAL_TOL * d.sigma),
    }
}

fn crabb_summary(d: &CrabbDecomposition) -> CrabbSummary {
    CrabbSummary {
        k: d.k,
        radius: d.radius,
        b_order: d.b.n_rows(),
        b_radius: d.b_radius,
        b_power_norm: d.b_power_norm,
        residual: Tagged::new(d.residual, CHAIN_TOL),
        reducing_residual: d.reducing_residual,
        norm_profile: d.chain.norm_profile.clone(),
    }
}

/// `Ok(None)` with a reason when the matrix is not extremal for `k`.
fn try_crabb(
    a: &ComplexMatrix,
    k: usize,
    tau: f64,
) -> Result<std::result::Result<CrabbSummary, String>> {
    let n = a.n_rows();
    if k >= n {
        return Ok(Err(format!("k = {k} must be below n = {n}")));
    }
    match crabb_decomposition(a, k, tau) {
        Ok(d) => Ok(Ok(crabb_summary(&d))),
        Err(e @ Error::NotExtremal { .. }) => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn crouzeix_rows(a: &ComplexMatrix, k_max: usize, tau: f64) -> Result<Vec<CrouzeixRow>> {
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let rep = monomial_extremality_test(a, k, tau)?;
        let (crabb, crabb_skipped) = if rep.verdict {
            match try_crabb(a, k, tau)? {
                Ok(c) => (Some(c), None),
                Err(why) => (None, Some(why)),
            }
        } else {
            (None, None)
        };
        rows.push(CrouzeixRow {
            k,
            power_norm: rep.ratio.numerator,
            radius_to_k: rep.radius_to_k,
            ratio: Tagged::new(rep.ratio.ratio, 4.0 * tau),
            extremal: rep.verdict,
            ratio_extremal: rep.ratio_extremal,
            agree: rep.agree,
            crabb,
            crabb_skipped,
        });
    }
    Ok(rows)
}

fn check_k_max(k_max: usize) -> Result<()> {
    if k_max < 1 {
        return Err(Error::InvalidParameter("--k-max must be at least 1".into()).into());
    }
    Ok(())
}

pub fn analyze(path: &str, k_max: Option<usize>, settings: &Settings) -> Result<String> {
    let Loaded { matrix: a, info } = load(path)?;
    let n = require_admissible(&a)?;
    let k_max = k_max.unwrap_or_else(|| default_k_max(n));
    check_k_max(k_max)?;
    let config = settings.certify_config();
    let report = certify(&a, &config)?;

    let diagnostics = report
        .diagnostics()
        .into_iter()
        .map(|(name, c)| {
            let tol = if name.starts_with("mult") || name.starts_with("zero") {
                0.0
            } else {
                settings.tau
            };
            (
                name,
                DiagnosticEntry {
                    passed: c.passed,
                    residual: c.residual,
                    tol,
                },
            )
        })
        .collect::<BTreeMap<_, _>>();

    let ascent = radius_ascent_oracle(&a, DEFAULT_RESTARTS, DEFAULT_ASCENT_ITERS, settings.seed)?;
    let decomposition = if report.verdict {
        match canonical_decomposition(&a, settings.eps) {
            Ok(d) => Some(decomposition_summary(&d)),
            Err(Error::NotHalfRadial { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    let out = AnalysisReport {
        schema: ANALYZE_SCHEMA,
        tool: TOOL,
        input: info,
        tolerances: settings.tolerances(),
        norm: Tagged::new(report.norm, NORM_TOL),
        radius: RadiusInfo {
            value: report.radius,
            tol: settings.refine_tol,
            theta_star: report.theta_star,
            method: "theta-grid+golden",
            grid: settings.grid,
        },
        half_radial: HalfRadialSection {
            verdict: report.verdict,
            borderline: report.borderline,
            gap: Tagged::new(report.gap, settings.tau),
            multiplicity: report.multiplicity(),
            zero_multiplicity: report.structural.zero_multiplicity,
            diagnostics,
        },
        oracle: OracleSection {
            method: "sphere-ascent",
            value: ascent.value,
            seed: settings.seed,
            restarts: DEFAULT_RESTARTS,
            consistent: ascent.value <= report.radius + ORACLE_CONSISTENCY_TOL * report.norm,
            consistency_tol: ORACLE_CONSISTENCY_TOL,
        },
        decomposition,
        crouzeix: crouzeix_rows(&a, k_max, settings.tau)?,
        seeds: vec![settings.seed],
    };
    Ok(settings.render(&out, AnalysisReport::text))
}

pub fn radius(path: &str, settings: &Settings) -> Result<String> {
    let Loaded { matrix: a, info } = load(path)?;
    let nr = numerical_radius(&a, settings.grid, settings.refine_tol)?;
    let out = RadiusReport {
        schema: RADIUS_SCHEMA,
        tool: TOOL,
        input: info,
        norm: Tagged::new(spectral_norm(&a)?, NORM_TOL),
        radius: radius_info(&nr, settings),
        attained: nr.attained(&a),
        refined_maxima: nr.refined_maxima,
        maximizer: nr.maximizer.iter().map(|z| [z.re, z.im]).collect(),
    };
    Ok(settings.render(&out, RadiusReport::text))
}

/// Boundary CSV: `theta,support,re,im`, 17 significant digits.
pub fn fov(path: &str, settings: &Settings) -> Result<String> {
    let Loaded { matrix: a, .. } = load(path)?;
    let boundary = fov_boundary(&a, settings.boundary_count)?;
    let mut out = String::from("theta,support,re,im\n");
    for s in &boundary.samples {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            s.theta, s.support, s.point.re, s.point.im
        );
    }
    Ok(out)
}

pub fn crouzeix(path: &str, k_max: Option<usize>, settings: &Settings) -> Result<String> {
    let Loaded { matrix: a, info } = load(path)?;
    let n = require_admissible(&a)?;
    let k_max = k_max.unwrap_or_else(|| default_k_max(n));
    check_k_max(k_max)?;
    let rows = crouzeix_rows(&a, k_max, settings.tau)?;
    let radius = numerical_radius(&a, settings.grid, settings.refine_tol)?.radius;
    let out = CrouzeixReport {
        schema: CROUZEIX_SCHEMA,
        tool: TOOL,
        input: info,
        tau: settings.tau,
        radius,
        rows,
    };
    Ok(settings.render(&out, CrouzeixReport::text))
}

pub fn crabb(path: &str, k: usize, settings: &Settings) -> Result<String> {
    let Loaded { matrix: a, info } = load(path)?;
    let n = require_admissible(&a)?;
    if k < 1 || k >= n {
        return Err(
            Error::InvalidParameter(format!("k must satisfy 1 <= k < n = {n}, got {k}")).into(),
        );
    }
    let ratio = crouzeix_monomial_ratio(&a, k)?.ratio;
    let (decomposition, reason) = match try_crabb(&a, k, settings.tau)? {
        Ok(c) => (Some(c), None),
        Err(why) => (None, Some(why)),
    };
    let out = CrabbReport {
        schema: CRABB_SCHEMA,
        tool: TOOL,
        input: info,
        k,
        tau: settings.tau,
        ratio: Tagged::new(ratio, 2.0 * settings.tau),
        decomposition,
        reason,
    };
    Ok(settings.render(&out, CrabbReport::text))
}

pub fn certify_decomposition(path: &str, settings: &Settings) -> Result<String> {
    let Loaded { matrix: a, info } = load(path)?;
    require_admissible(&a)?;
    let report = certify(&a, &settings.certify_config())?;
    let decomposition = if report.verdict {
        match canonical_decomposition(&a, settings.eps) {
            Ok(d) => Some(decomposition_summary(&d)),
            Err(Error::NotHalfRadial { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let out = DecompositionReport {
        schema: DECOMPOSITION_SCHEMA,
        tool: TOOL,
        input: info,
        tolerances: settings.tolerances(),
        verdict: report.verdict,
        gap: Tagged::new(report.gap, settings.tau),
        norm: report.norm,
        radius: report.radius,
        decomposition,
    };
    Ok(settings.render(&out, DecompositionReport::text))
}

#[derive(Debug, Clone)]
pub enum GenerateKind {
    Ccc {
        n: usize,
    },
    HalfRadial {
        n: usize,
        m: usize,
        sigma: f64,
        frac: f64,
        seed: u64,
    },
    Haar {
        n: usize,
        seed: u64,
    },
}

pub fn generate(kind: &GenerateKind, settings: &Settings) -> Result<String> {
    let version = env!("CARGO_PKG_VERSION");
    let (a, metadata) = match *kind {
        GenerateKind::Ccc { n } => (
            ccc_matrix(n)?,
            meta([
                ("name", json!(format!("C_{n}"))),
                (
                    "provenance",
                    json!(format!("hrad {version} generate ccc {n}")),
                ),
            ]),
        ),
        GenerateKind::HalfRadial {
            n,
            m,
            sigma,
            frac,
            seed,
        } => (
            synthesize_half_radial(n, m, sigma, frac, seed)?,
            meta([
                ("name", json!(format!("halfradial-{n}-{m}"))),
                ("seed", json!(seed)),
                (
                    "provenance",
                    json!(format!(
                        "hrad {version} generate halfradial {n} {m} {sigma:?} {frac:?} {seed}"
                    )),
                ),
            ]),
        ),
        GenerateKind::Haar { n, seed } => (
            haar_unitary(n, seed)?,
            meta([
                ("name", json!(format!("haar-{n}"))),
                ("seed", json!(seed)),
                (
                    "provenance",
                    json!(format!("hrad {version} generate haar {n} {seed}")),
                ),
            ]),
        ),
    };
    Ok(match settings.format {
        Format::Json => matrix_json(&a, metadata),
        Format::Text => matrix_grid(&a),
    })
}

fn meta<const N: usize>(pairs: [(&str, serde_json::Value); N]) -> Metadata {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

/// 1: usage or parse error, 2: degenerate input, 3: numerical failure.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::ZeroMatrix | Error::TooSmall { .. }) => 2,
        Some(
            Error::NumericalFailure(_)
            | Error::NotOrthonormal { .. }
            | Error::NotHermitian { .. }
            | Error::CrabbStructure { .. },
        ) => 3,
        _ => 1,
    }
}
