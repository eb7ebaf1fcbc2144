//! Helpers shared by the CLI integration tests.
// Each test target compiles this module independently; not every target
// touches every helper.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

pub fn qkml() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qkml"))
}

pub fn run_ok(args: &[&str]) -> Output {
    let out = qkml().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "qkml {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn exit_code(args: &[&str]) -> i32 {
    qkml()
        .args(args)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

/// Parsed CSV output: `# key = value` headers plus named float columns.
pub struct CsvFile {
    pub header: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_csv(path: &Path) -> CsvFile {
    let text = std::fs::read_to_string(path).expect("csv exists");
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> CsvFile {
    let mut header = BTreeMap::new();
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            }
        } else if columns.is_empty() {
            columns = line.split(',').map(|s| s.trim().to_string()).collect();
        } else {
            rows.push(
                line.split(',')
                    .map(|s| s.trim().parse::<f64>().expect("float cell"))
                    .collect(),
            );
        }
    }
    CsvFile {
        header,
        columns,
        rows,
    }
}

impl CsvFile {
    pub fn column(&self, name: &str) -> Vec<f64> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column '{name}' in {:?}", self.columns));
        self.rows.iter().map(|r| r[idx]).collect()
    }
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let scale = x.abs().max(y.abs()).max(1e-30);
            (x - y).abs() / scale
        })
        .fold(0.0, f64::max)
}
