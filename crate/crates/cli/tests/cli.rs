use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const SHIFT: &str = "0 0\t1 0\n0 0\t0 0\n";
const DECOY: &str = "0 0  0 0    0 0\n0 0  0.9 0  0 0\n1 0  0 0    0 0\n";

fn hrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrad"))
        .args(args)
        .output()
        .expect("spawn hrad")
}

fn hrad_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hrad"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn hrad");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.path().join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", s(&p)]);
    let o = hrad(&full);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    p
}

#[test]
fn analyze_shift() {
    let dir = TempDir::new().unwrap();
    let j = write(&dir, "j.txt", SHIFT);
    let r = json(&hrad(&["analyze", s(&j), "--format", "json"]));
    assert_eq!(r["schema"], "halfradial-report/1");
    assert_eq!(r["half_radial"]["verdict"], true);
    assert_eq!(r["half_radial"]["multiplicity"], 1);
    assert!((r["radius"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert_eq!(r["radius"]["tol"].as_f64(), Some(1e-12));
    assert_eq!(r["decomposition"]["m"], 1);
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn analyze_surfaces_structural_decoy() {
    let r = json(&hrad_stdin(&["analyze", "-", "--format", "json"], DECOY));
    let hr = &r["half_radial"];
    assert_eq!(hr["verdict"], false);
    for name in [
        "vmax_in_null_Astar",
        "umax_in_null_A",
        "subspace_orthogonality",
        "mult_le_half_n",
        "zero_mult_ge_m",
    ] {
        assert_eq!(hr["diagnostics"][name]["passed"], true, "{name}");
    }
    assert_eq!(hr["diagnostics"]["theta_nonempty"]["passed"], false);
    assert!(r["decomposition"].is_null());
    assert!((r["radius"]["value"].as_f64().unwrap() - 0.9).abs() < 1e-8);
}

#[test]
fn analyze_ccc3() {
    let dir = TempDir::new().unwrap();
    let c3 = generate(&dir, "c3.json", &["ccc", "3"]);
    let r = json(&hrad(&["analyze", s(&c3), "--format", "json"]));
    assert_eq!(r["half_radial"]["verdict"], false);
    let rows = r["crouzeix"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["k"], 3);
    assert_eq!(rows[2]["extremal"], true);
    assert_eq!(rows[0]["extremal"], false);
}

#[test]
fn generate_ccc_superdiagonal() {
    let o = hrad(&["generate", "ccc", "2"]);
    let f = json(&o);
    assert_eq!(f["n"], 3);
    let e = &f["entries"];
    assert_eq!(e[0][1][0].as_f64(), Some(std::f64::consts::SQRT_2));
    assert_eq!(e[1][2][0].as_f64(), Some(std::f64::consts::SQRT_2));
    assert_eq!(e[0][2][0].as_f64(), Some(0.0));
    assert_eq!(f["metadata"]["name"], "C_2");
    assert!(f["metadata"]["provenance"]
        .as_str()
        .unwrap()
        .contains("generate ccc 2"));
}

#[test]
fn generated_half_radial_is_certified() {
    let dir = TempDir::new().unwrap();
    let p = generate(
        &dir,
        "hr.json",
        &["halfradial", "5", "1", "2.0", "0.5", "42"],
    );
    let f: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(f["metadata"]["seed"], 42);
    let r = json(&hrad(&["analyze", s(&p), "--format", "json"]));
    assert_eq!(r["half_radial"]["verdict"], true);
    assert_eq!(r["decomposition"]["m"], 1);
    let d = json(&hrad(&["certify-decomposition", s(&p), "--format", "json"]));
    assert_eq!(d["schema"], "halfradial-decomposition/1");
    assert_eq!(d["decomposition"]["b_order"], 3);
    assert!(d["decomposition"]["b_radius"].as_f64().unwrap() <= 1.0 + 1e-8);
}

#[test]
fn generate_rejects_oversized_multiplicity() {
    let o = hrad(&["generate", "halfradial", "4", "3", "1.0", "0.5", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("m <= n/2"));
}

#[test]
fn generation_is_deterministic() {
    let a = hrad(&["generate", "haar", "4", "7"]);
    let b = hrad(&["generate", "haar", "4", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = hrad(&["generate", "haar", "4", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn fov_of_shift_is_the_half_disk() {
    let dir = TempDir::new().unwrap();
    let j = write(&dir, "j.txt", SHIFT);
    let csv = dir.path().join("j.csv");
    let o = hrad(&["fov", s(&j), "--boundary-count", "360", "--out", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,support,re,im"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 360);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        for f in &fields {
            let mantissa = f.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(
                mantissa.chars().filter(|c| c.is_ascii_digit()).count(),
                17,
                "{f}"
            );
        }
        let v: Vec<f64> = fields.iter().map(|f| f.parse().unwrap()).collect();
        assert!((v[1] - 0.5).abs() < 1e-12);
        assert!((v[2].hypot(v[3]) - 0.5).abs() < 1e-12);
    }
}

#[test]
fn fov_of_reflection_is_a_segment() {
    let o = hrad_stdin(
        &["fov", "-", "--boundary-count", "16"],
        "1 0 0 0\n0 0 -1 0\n",
    );
    assert_eq!(o.status.code(), Some(0));
    for row in stdout(&o).lines().skip(1) {
        let v: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert!(v[3].abs() < 1e-15);
        assert!(v[2].abs() <= 1.0 + 1e-15);
    }
}

#[test]
fn fov_rejects_small_count() {
    let o = hrad_stdin(&["fov", "-", "--boundary-count", "4"], SHIFT);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 8"));
}

fn ratios(r: &Value) -> Vec<f64> {
    r["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["ratio"]["value"].as_f64().unwrap())
        .collect()
}

#[test]
fn crouzeix_tables() {
    let dir = TempDir::new().unwrap();
    let c4 = generate(&dir, "c4.json", &["ccc", "4"]);
    let r = json(&hrad(&[
        "crouzeix",
        s(&c4),
        "--k-max",
        "4",
        "--format",
        "json",
    ]));
    let rs = ratios(&r);
    assert!((rs[3] - 2.0).abs() < 1e-6);
    assert!(rs[..3].iter().all(|&x| x < 2.0 - 1e-6));
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows[3]["crabb"]["b_order"], 0);
    assert!(rows[..3].iter().all(|row| row.get("crabb").is_none()));

    let j = json(&hrad_stdin(
        &["crouzeix", "-", "--k-max", "2", "--format", "json"],
        SHIFT,
    ));
    let rs = ratios(&j);
    assert!((rs[0] - 2.0).abs() < 1e-12);
    assert_eq!(rs[1], 0.0);

    let d = json(&hrad_stdin(
        &["crouzeix", "-", "--k-max", "3", "--format", "json"],
        "1 0 0 0\n0 0 0.5 0\n",
    ));
    assert!(ratios(&d).iter().all(|&x| (x - 1.0).abs() < 1e-10));

    let text = hrad_stdin(&["crouzeix", "-", "--k-max", "2"], SHIFT);
    assert!(stdout(&text).contains("Crabb decomposition at k = 1"));
}

#[test]
fn crabb_command() {
    let dir = TempDir::new().unwrap();
    let c3 = generate(&dir, "c3.json", &["ccc", "3"]);
    let r = json(&hrad(&["crabb", s(&c3), "--k", "3", "--format", "json"]));
    let d = &r["decomposition"];
    assert_eq!(d["b_order"], 0);
    let profile: Vec<f64> = d["norm_profile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let want = [2.0, std::f64::consts::SQRT_2, std::f64::consts::SQRT_2, 1.0];
    for (g, w) in profile.iter().zip(want) {
        assert!((g - w).abs() < 1e-6);
    }

    let r = json(&hrad_stdin(
        &["crabb", "-", "--k", "1", "--format", "json"],
        DECOY,
    ));
    assert!(r["decomposition"].is_null());
    assert!(r["reason"].as_str().unwrap().contains("not 2"));

    let o = hrad(&["crabb", s(&c3), "--k", "9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degenerate_inputs_exit_2() {
    for input in ["0 0 0 0\n0 0 0 0\n", "2 1\n"] {
        let o = hrad_stdin(&["analyze", "-"], input);
        assert_eq!(o.status.code(), Some(2), "{input:?}");
        assert!(stderr(&o).contains("n >= 2"));
    }
    let o = hrad_stdin(&["crouzeix", "-"], "0 0 0 0\n0 0 0 0\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_1_with_position() {
    let o = hrad_stdin(&["analyze", "-"], "0 0 1 0\n0 0 0 0\n0 0 0 0\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let o = hrad_stdin(
        &["analyze", "-"],
        "{\"n\": 2,\n\"entries\": [[[0, 0], [1, 0]],\n",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = hrad_stdin(&["analyze", "-"], "0 0 1 0\n0 0 nan 0\n");
    assert_eq!(o.status.code(), Some(1));

    let o = hrad(&["analyze", "/nonexistent/matrix.txt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(hrad(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hrad(&["analyze"]).status.code(), Some(1));
    assert_eq!(
        hrad(&["analyze", "-", "--tau", "abc"]).status.code(),
        Some(1)
    );
    assert_eq!(hrad(&["--help"]).status.code(), Some(0));
    assert_eq!(hrad(&["--version"]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let p = generate(
        &dir,
        "hr.json",
        &["halfradial", "6", "2", "1.5", "0.3", "3"],
    );
    let args = ["analyze", s(&p), "--format", "json", "--seed", "11"];
    let a = hrad(&args);
    let b = hrad(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["seeds"][0], 11);
    assert_eq!(r["oracle"]["consistent"], true);
}

#[test]
fn json_and_grid_inputs_agree() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "h.json", &["haar", "3", "5"]);
    let grid = hrad(&["generate", "haar", "3", "5", "--format", "text"]);
    let g = write(&dir, "h.txt", &stdout(&grid));
    let a = json(&hrad(&["radius", s(&p), "--format", "json"]));
    let b = json(&hrad(&["radius", s(&g), "--format", "json"]));
    assert_eq!(a["radius"], b["radius"]);
    assert!((a["radius"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn tolerance_flags_are_reported() {
    let r = json(&hrad_stdin(
        &[
            "analyze", "-", "--format", "json", "--tau", "1e-6", "--eps", "1e-7", "--grid", "256",
        ],
        SHIFT,
    ));
    assert_eq!(r["tolerances"]["tau"].as_f64(), Some(1e-6));
    assert_eq!(r["tolerances"]["eps"].as_f64(), Some(1e-7));
    assert_eq!(r["tolerances"]["grid"], 256);
    assert_eq!(r["half_radial"]["gap"]["tol"].as_f64(), Some(1e-6));
}
