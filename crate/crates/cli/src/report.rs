//! Machine-readable reports and their text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub const ANALYZE_SCHEMA: &str = "halfradial-report/1";
pub const RADIUS_SCHEMA: &str = "halfradial-radius/1";
pub const CROUZEIX_SCHEMA: &str = "halfradial-crouzeix/1";
pub const CRABB_SCHEMA: &str = "halfradial-crabb/1";
pub const DECOMPOSITION_SCHEMA: &str = "halfradial-decomposition/1";

/// A value and the tolerance it was computed under.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tagged {
    pub value: f64,
    pub tol: f64,
}

impl Tagged {
    pub fn new(value: f64, tol: f64) -> Self {
        Self { value, tol }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: Tool = Tool {
    name: "hrad",
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub sha256: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tau: f64,
    pub eps: f64,
    pub grid: usize,
    pub refine_tol: f64,
    pub boundary_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusInfo {
    pub value: f64,
    pub tol: f64,
    pub theta_star: f64,
    pub method: &'static str,
    pub grid: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticEntry {
    pub passed: bool,
    pub residual: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HalfRadialSection {
    pub verdict: bool,
    pub borderline: bool,
    pub gap: Tagged,
    pub multiplicity: usize,
    pub zero_multiplicity: usize,
    pub diagnostics: BTreeMap<&'static str, DiagnosticEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub method: &'static str,
    pub value: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Ascent value does not exceed the refined radius by more than `consistency_tol`.
    pub consistent: bool,
    pub consistency_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub m: usize,
    pub sigma: f64,
    pub b_order: usize,
    pub b_norm: f64,
    pub b_radius: f64,
    pub residual: Tagged,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrabbSummary {
    pub k: usize,
    pub radius: f64,
    pub b_order: usize,
    pub b_radius: f64,
    pub b_power_norm: f64,
    pub residual: Tagged,
    pub reducing_residual: f64,
    pub norm_profile: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrouzeixRow {
    pub k: usize,
    pub power_norm: f64,
    pub radius_to_k: f64,
    pub ratio: Tagged,
    pub extremal: bool,
    pub ratio_extremal: bool,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crabb: Option<CrabbSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crabb_skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub input: InputInfo,
    pub tolerances: Tolerances,
    pub norm: Tagged,
    pub radius: RadiusInfo,
    pub half_radial: HalfRadialSection,
    pub oracle: OracleSection,
    pub decomposition: Option<DecompositionSummary>,
    pub crouzeix: Vec<CrouzeixRow>,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub input: InputInfo,
    pub norm: Tagged,
    pub radius: RadiusInfo,
    pub attained: f64,
    pub refined_maxima: usize,
    pub maximizer: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrouzeixReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub input: InputInfo,
    pub tau: f64,
    pub radius: f64,
    pub rows: Vec<CrouzeixRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrabbReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub input: InputInfo,
    pub k: usize,
    pub tau: f64,
    pub ratio: Tagged,
    pub decomposition: Option<CrabbSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub input: InputInfo,
    pub tolerances: Tolerances,
    pub verdict: bool,
    pub gap: Tagged,
    pub norm: f64,
    pub radius: f64,
    pub decomposition: Option<DecompositionSummary>,
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn input_line(out: &mut String, input: &InputInfo) {
    let name = input
        .name
        .as_deref()
        .map(|n| format!(" ({n})"))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "input      n = {}{name}, sha256 {}",
        input.n, input.sha256
    );
}

fn decomposition_lines(out: &mut String, d: &DecompositionSummary) {
    let _ = writeln!(
        out,
        "canonical form  Q*AQ = ({:.12} I_{} ⊗ J) ⊕ B",
        d.sigma, d.m
    );
    let _ = writeln!(
        out,
        "  B: order {}, ‖B‖ = {:.12}, r(B) = {:.12}",
        d.b_order, d.b_norm, d.b_radius
    );
    let _ = writeln!(
        out,
        "  residual {:.3e} (tol {:.1e})",
        d.residual.value, d.residual.tol
    );
}

fn crabb_lines(out: &mut String, c: &CrabbSummary) {
    let _ = writeln!(
        out,
        "  Crabb decomposition at k = {}: A/r(A) = Q (C_{} ⊕ B) Q*",
        c.k, c.k
    );
    let profile: Vec<String> = c.norm_profile.iter().map(|x| format!("{x:.9}")).collect();
    let _ = writeln!(
        out,
        "    r(A) = {:.12}, chain norms ({})",
        c.radius,
        profile.join(", ")
    );
    if c.b_order == 0 {
        let _ = writeln!(out, "    B: empty");
    } else {
        let _ = writeln!(
            out,
            "    B: order {}, r(B) = {:.12}, ‖B^{}‖ = {:.12}",
            c.b_order, c.b_radius, c.k, c.b_power_norm
        );
    }
    let _ = writeln!(
        out,
        "    residual {:.3e} (tol {:.1e}), reducing residual {:.3e}",
        c.residual.value, c.residual.tol, c.reducing_residual
    );
}

fn crouzeix_table(out: &mut String, rows: &[CrouzeixRow]) {
    let _ = writeln!(
        out,
        "{:>3}  {:>20}  {:>20}  {:>16}  extremal",
        "k", "‖A^k‖", "r(A)^k", "ratio"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:>20.12}  {:>20.12}  {:>16.12}  {}",
            row.k,
            row.power_norm,
            row.radius_to_k,
            row.ratio.value,
            yes_no(row.extremal)
        );
    }
    for row in rows {
        if let Some(c) = &row.crabb {
            crabb_lines(out, c);
        } else if let Some(why) = &row.crabb_skipped {
            let _ = writeln!(out, "  Crabb decomposition at k = {} skipped: {why}", row.k);
        }
    }
}

impl AnalysisReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        input_line(&mut out, &self.input);
        let _ = writeln!(out, "norm       ‖A‖ = {:.15}", self.norm.value);
        let _ = writeln!(
            out,
            "radius     r(A) = {:.15} at θ* = {:.12} (tol {:.1e}, grid {})",
            self.radius.value, self.radius.theta_star, self.radius.tol, self.radius.grid
        );
        let _ = writeln!(
            out,
            "oracle     ascent lower bound {:.15} (seed {}, consistent: {})",
            self.oracle.value,
            self.oracle.seed,
            yes_no(self.oracle.consistent)
        );
        let hr = &self.half_radial;
        let _ = writeln!(
            out,
            "half-radial  {}{}  gap |‖A‖ − 2r(A)|/‖A‖ = {:.3e} (τ = {:.1e})",
            yes_no(hr.verdict),
            if hr.borderline { " (borderline)" } else { "" },
            hr.gap.value,
            hr.gap.tol
        );
        let _ = writeln!(
            out,
            "  dim V_max = {}, zero singular values = {}",
            hr.multiplicity, hr.zero_multiplicity
        );
        for (name, d) in &hr.diagnostics {
            let _ = writeln!(
                out,
                "  {:<24} {:<4} residual {:.3e}",
                name,
                if d.passed { "pass" } else { "FAIL" },
                d.residual
            );
        }
        if let Some(d) = &self.decomposition {
            decomposition_lines(&mut out, d);
        }
        if !self.crouzeix.is_empty() {
            crouzeix_table(&mut out, &self.crouzeix);
        }
        out
    }
}

impl RadiusReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        input_line(&mut out, &self.input);
        let _ = writeln!(out, "‖A‖   = {:.15}", self.norm.value);
        let _ = writeln!(out, "r(A)  = {:.15}", self.radius.value);
        let _ = writeln!(out, "θ*    = {:.15}", self.radius.theta_star);
        let _ = writeln!(
            out,
            "|⟨Az*, z*⟩| = {:.15} (grid {}, {} maxima refined, tol {:.1e})",
            self.attained, self.radius.grid, self.refined_maxima, self.radius.tol
        );
        out
    }
}

impl CrouzeixReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        input_line(&mut out, &self.input);
        let _ = writeln!(out, "r(A) = {:.15}, τ = {:.1e}", self.radius, self.tau);
        crouzeix_table(&mut out, &self.rows);
        out
    }
}

impl CrabbReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        input_line(&mut out, &self.input);
        let _ = writeln!(
            out,
            "k = {}, ‖A^k‖/r(A)^k = {:.12}",
            self.k, self.ratio.value
        );
        match (&self.decomposition, &self.reason) {
            (Some(c), _) => crabb_lines(&mut out, c),
            (None, Some(why)) => {
                let _ = writeln!(out, "no decomposition: {why}");
            }
            (None, None) => {}
        }
        out
    }
}

impl DecompositionReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        input_line(&mut out, &self.input);
        let _ = writeln!(
            out,
            "‖A‖ = {:.15}, r(A) = {:.15}, half-radial {} (gap {:.3e}, τ = {:.1e})",
            self.norm,
            self.radius,
            yes_no(self.verdict),
            self.gap.value,
            self.gap.tol
        );
        match &self.decomposition {
            Some(d) => decomposition_lines(&mut out, d),
            None => {
                let _ = writeln!(out, "no canonical decomposition: matrix is not half-radial");
            }
        }
        out
    }
}
