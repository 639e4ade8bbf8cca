//! Machine-readable run reports and CSV matrix output.
//!
//! Reports serialize with a stable key order (struct field order plus
//! sorted maps), so two runs with the same config and seed produce
//! byte-identical `report.json` files except for the wall-time line.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub results: Value,
    /// Gating verdicts; the process exits 1 when any of them is false.
    pub verdicts: BTreeMap<String, bool>,
    pub tool_version: String,
    /// Excluded from byte-for-byte comparisons.
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            results: Value::Null,
            verdicts: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: 0,
        }
    }

    pub fn verdict(&mut self, name: &str, pass: bool) {
        self.verdicts.insert(name.to_string(), pass);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json_string())
    }
}

/// Format a float with 17 significant digits (lossless f64 round-trip).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a matrix as CSV with 17-significant-digit decimal floats.
pub fn write_csv_matrix(dir: &Path, name: &str, rows: &[Vec<f64>]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut out = fs::File::create(dir.join(name))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Write a single column as CSV.
pub fn write_csv_column(dir: &Path, name: &str, values: &[f64]) -> io::Result<()> {
    let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
    write_csv_matrix(dir, name, &rows)
}

/// Serialize any report fragment into a JSON value.
pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_is_stable() {
        let mut r = Report::new("spectrum", serde_json::json!({"truncation": 3}));
        r.verdict("zeta", true);
        r.verdict("alpha", true);
        let a = r.to_json_string();
        let b = r.to_json_string();
        assert_eq!(a, b);
        // verdict keys come out sorted
        let za = a.find("\"alpha\"").unwrap();
        let zz = a.find("\"zeta\"").unwrap();
        assert!(za < zz);
    }

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 1e-13, -0.0, 123456.789] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn all_pass_requires_every_verdict() {
        let mut r = Report::new("band", Value::Null);
        r.verdict("bounds", true);
        assert!(r.all_pass());
        r.verdict("maximality", false);
        assert!(!r.all_pass());
    }
}
