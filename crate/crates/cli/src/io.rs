//! Matrix files.
//!
//! The structured format is JSON:
//!
//! ```text
//! {"n": 2, "entries": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]], "metadata": {"name": "J"}}
//! ```
//!
//! `entries` holds `n` rows of `n` `[re, im]` pairs. Anything whose first
//! non-blank character is not `{` is read as a plain-text grid: one row per
//! line, `re im` pairs separated by whitespace, blank lines and `#` comments
//! ignored.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use halfradial::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub type Metadata = BTreeMap<String, Value>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: Metadata,
}

impl MatrixFile {
    pub fn from_matrix(a: &ComplexMatrix, metadata: Metadata) -> Self {
        let n = a.n_rows();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| [a.get(i, j).re, a.get(i, j).im]).collect())
            .collect();
        Self {
            n,
            entries,
            metadata,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n {
            bail!(
                "\"n\" is {} but \"entries\" has {} rows",
                self.n,
                self.entries.len()
            );
        }
        let mut data = Vec::with_capacity(self.n * self.n);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                bail!(
                    "row {} has {} entries, expected {} (matrix must be square)",
                    i + 1,
                    row.len(),
                    self.n
                );
            }
            data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        Ok(ComplexMatrix::from_row_major(self.n, self.n, data)?)
    }
}

/// Raw bytes of a file, or of stdin for `-`.
pub fn read_input(path: &str) -> Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {path}"))
    }
}

#[derive(Debug)]
pub struct ParsedMatrix {
    pub matrix: ComplexMatrix,
    pub metadata: Metadata,
}

pub fn parse_matrix(bytes: &[u8]) -> Result<ParsedMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|e| anyhow!("input is not UTF-8: {e}"))?;
    if text.trim_start().starts_with('{') {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| anyhow!("malformed matrix file: {e}"))?;
        let matrix = file.to_matrix()?;
        Ok(ParsedMatrix {
            matrix,
            metadata: file.metadata,
        })
    } else {
        Ok(ParsedMatrix {
            matrix: parse_grid(text)?,
            metadata: Metadata::new(),
        })
    }
}

fn parse_grid(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<(usize, Vec<C64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| anyhow!("line {line_no}: cannot parse {tok:?} as a number"))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() % 2 != 0 {
            bail!("line {line_no}: odd number of values; entries are re im pairs");
        }
        let row = values
            .chunks(2)
            .map(|p| C64::new(p[0], p[1]))
            .collect::<Vec<_>>();
        if let Some((first_line, first)) = rows.first() {
            if row.len() != first.len() {
                bail!(
                    "line {line_no}: row has {} entries but line {first_line} has {}",
                    row.len(),
                    first.len()
                );
            }
        }
        rows.push((line_no, row));
    }
    let Some((_, first)) = rows.first() else {
        bail!("line 1: empty matrix file");
    };
    let n = first.len();
    if rows.len() != n {
        let last = rows.last().map_or(0, |(l, _)| *l);
        bail!(
            "line {}: expected {n} rows for a {n}x{n} matrix, found {}",
            last + 1,
            rows.len()
        );
    }
    let data = rows.into_iter().flat_map(|(_, r)| r).collect();
    Ok(ComplexMatrix::from_row_major(n, n, data)?)
}

pub fn matrix_json(a: &ComplexMatrix, metadata: Metadata) -> String {
    let mut s =
        serde_json::to_string(&MatrixFile::from_matrix(a, metadata)).expect("finite entries");
    s.push('\n');
    s
}

pub fn matrix_grid(a: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.n_rows() {
        let row: Vec<String> = (0..a.n_cols())
            .map(|j| format!("{:?}\t{:?}", a.get(i, j).re, a.get(i, j).im))
            .collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, contents).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_exact() {
        let vals = [
            0.1,
            -0.0,
            1e-300,
            std::f64::consts::PI,
            -2.5e17,
            f64::MIN_POSITIVE,
        ];
        let data: Vec<C64> = (0..9)
            .map(|i| C64::new(vals[i % 6], vals[(i + 2) % 6]))
            .collect();
        let a = ComplexMatrix::from_row_major(3, 3, data).unwrap();
        let back = parse_matrix(matrix_json(&a, Metadata::new()).as_bytes())
            .unwrap()
            .matrix;
        for (x, y) in a.to_row_major().iter().zip(back.to_row_major()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let back = parse_matrix(matrix_grid(&a).as_bytes()).unwrap().matrix;
        assert_eq!(a.to_row_major(), back.to_row_major());
    }

    #[test]
    fn json_round_trip_is_exact_for_random_doubles() {
        let mut bits: u64 = 0x9e37_79b9_7f4a_7c15;
        let data: Vec<C64> = (0..400)
            .map(|_| {
                let mut next = || {
                    bits ^= bits << 13;
                    bits ^= bits >> 7;
                    bits ^= bits << 17;
                    let x = f64::from_bits(bits);
                    if x.is_finite() {
                        x
                    } else {
                        0.5
                    }
                };
                C64::new(next(), next())
            })
            .collect();
        let a = ComplexMatrix::from_row_major(20, 20, data).unwrap();
        let back = parse_matrix(matrix_json(&a, Metadata::new()).as_bytes())
            .unwrap()
            .matrix;
        for (x, y) in a.to_row_major().iter().zip(back.to_row_major()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn grid_parses_shift() {
        let a = parse_matrix(b"# J\n0 0\t1 0\n0 0\t0 0\n").unwrap().matrix;
        assert_eq!(a, ComplexMatrix::shift());
    }

    #[test]
    fn grid_errors_carry_line_numbers() {
        let err = parse_matrix(b"0 0 1 0\n0 0 0 0\n1 1 1 1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 4"), "{err}");
        let err = parse_matrix(b"0 0 1 0\n0 0 x 0\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_matrix(b"0 0 1\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn json_errors() {
        let err = parse_matrix(b"{\"n\": 2,\n \"entries\": [[[0, 0]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_matrix(br#"{"n": 2, "entries": [[[0, 0], [1, 0]], [[0, 0]]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("square"), "{err}");
        assert!(parse_matrix(br#"{"n": 1, "entries": [[[1e999, 0]]]}"#).is_err());
    }

    #[test]
    fn non_finite_grid_entries_rejected() {
        assert!(parse_matrix(b"NaN 0\n").is_err());
        assert!(parse_matrix(b"inf 0\n").is_err());
    }
}
