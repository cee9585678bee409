//! CSV assembly and golden-file regression.
//!
//! Every CSV starts with a `#`-prefixed header block echoing the artifact
//! version and the full configuration, so a golden file is self-describing.
//! Floats are rendered in scientific notation with 17 significant digits,
//! which round-trips f64 exactly; deterministic reruns are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, `.` decimal, scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// In-memory CSV with the config-echo header block.
#[derive(Debug, Clone)]
pub struct Csv {
    header: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(echo: &BTreeMap<String, String>, columns: &[&str]) -> Self {
        let mut header = vec![format!("# artifact_version = {ARTIFACT_VERSION}")];
        for (k, v) in echo {
            header.push(format!("# {k} = {v}"));
        }
        Self {
            header,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.header {
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// Two-column plot series plus manifest entry.
pub fn write_series(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = String::new();
    for (x, y) in points {
        let _ = writeln!(out, "{} {}", fmt_float(*x), fmt_float(*y));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenOutcome {
    Recorded,
    Matched,
    Mismatched,
}

/// Byte-exact golden comparison: record writes the file, verify compares.
pub fn golden_exact(golden_path: &PathBuf, rendered: &str, record: bool) -> Result<GoldenOutcome> {
    if record {
        if let Some(dir) = golden_path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(golden_path, rendered)?;
        return Ok(GoldenOutcome::Recorded);
    }
    let recorded = std::fs::read_to_string(golden_path).map_err(|e| {
        Error::Config(format!(
            "golden file {} unreadable: {e}",
            golden_path.display()
        ))
    })?;
    Ok(if recorded == rendered {
        GoldenOutcome::Matched
    } else {
        GoldenOutcome::Mismatched
    })
}

/// Envelope comparison with multiplicative slack: the current interval must
/// sit inside the recorded one widened by `slack` on each side.
pub fn envelope_within(
    recorded_min: f64,
    recorded_max: f64,
    current_min: f64,
    current_max: f64,
    slack: f64,
) -> bool {
    current_min >= recorded_min / slack && current_max <= recorded_max * slack
}

/// Parses min/max pairs back out of a golden envelope CSV row set keyed by an
/// id column; used by verify mode.
pub fn parse_golden_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(|c| c.to_string()).collect())
        .collect()
}
