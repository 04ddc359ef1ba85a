use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::config::{Experiment, ExperimentConfig};
use crate::error::{Error, Result};

/// A named table of numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_value(v))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("ascii csv"))
    }
}

/// Shortest round-trip representation, in exponent form away from unit scale.
pub fn fmt_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedConstant {
    pub name: String,
    pub value: f64,
    pub window: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub experiment: Experiment,
    pub config_hash: String,
    pub grid: Option<(usize, f64)>,
    pub j_range: Option<(i32, i32)>,
    pub version: &'static str,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub metadata: Metadata,
    pub config: ExperimentConfig,
    pub series: Vec<Series>,
    pub constants: Vec<FittedConstant>,
    pub checks: Vec<CheckResult>,
    /// Sweep members, keyed by directory name.
    pub members: Vec<(String, ExperimentReport)>,
    /// Set when a run ended on a numerical failure; the series hold the
    /// diagnostics up to that point.
    pub numeric_failure: Option<String>,
    /// Binary files such as field checkpoints, by file name.
    pub binaries: Vec<(String, Vec<u8>)>,
}

/// SHA-256 of the canonical serialization of the config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.to_toml().as_bytes()))
}

impl ExperimentReport {
    pub fn new(exp: Experiment, config: &ExperimentConfig, grid: Option<(usize, f64)>, j_range: Option<(i32, i32)>) -> Self {
        let mut config = config.clone();
        config.experiment = Some(exp);
        // The output location does not affect the results.
        config.out = None;
        Self {
            metadata: Metadata {
                experiment: exp,
                config_hash: config_hash(&config),
                grid,
                j_range,
                version: env!("CARGO_PKG_VERSION"),
                seed: config.seed,
            },
            config,
            series: Vec::new(),
            constants: Vec::new(),
            checks: Vec::new(),
            members: Vec::new(),
            numeric_failure: None,
            binaries: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn constant(&mut self, name: impl Into<String>, value: f64, window: (f64, f64), residual: f64) {
        self.constants.push(FittedConstant {
            name: name.into(),
            value,
            window,
            residual,
        });
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    /// Every check here and in all members passed and no run failed
    /// numerically.
    pub fn passed(&self) -> bool {
        self.numeric_failure.is_none()
            && self.checks.iter().all(|c| c.pass)
            && self.members.iter().all(|(_, m)| m.passed())
    }

    pub fn numeric_failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.numeric_failure.iter().cloned().collect();
        for (name, m) in &self.members {
            out.extend(m.numeric_failures().into_iter().map(|f| format!("{name}: {f}")));
        }
        out
    }

    pub fn summary(&self) -> String {
        let m = &self.metadata;
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", m.experiment);
        let _ = writeln!(s, "version: {}", m.version);
        let _ = writeln!(s, "config_hash: {}", m.config_hash);
        let _ = writeln!(s, "seed: {}", m.seed);
        if let Some((n, l)) = m.grid {
            let _ = writeln!(s, "grid: N = {n}, L = {}", fmt_value(l));
        }
        if let Some((a, b)) = m.j_range {
            let _ = writeln!(s, "j_range: [{a}, {b}]");
        }
        if !self.constants.is_empty() {
            let _ = writeln!(s, "\nfitted constants:");
            for c in &self.constants {
                let _ = writeln!(
                    s,
                    "  {} = {} (window [{}, {}], residual {})",
                    c.name,
                    fmt_value(c.value),
                    fmt_value(c.window.0),
                    fmt_value(c.window.1),
                    fmt_value(c.residual)
                );
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "\nchecks:");
            for c in &self.checks {
                let _ = writeln!(s, "  [{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
        }
        if let Some(f) = &self.numeric_failure {
            let _ = writeln!(s, "\nnumeric failure: {f}");
        }
        for (name, member) in &self.members {
            let _ = writeln!(s, "\nmember {name}: {}", if member.passed() { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(s, "\nresult: {}", if self.passed() { "PASS" } else { "FAIL" });
        let _ = writeln!(s, "\n# config\n{}", self.config.to_toml());
        s
    }

    /// Writes `summary.txt`, `config.toml`, one CSV per series and one
    /// subdirectory per sweep member. Returns the files written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut files: Vec<(PathBuf, Vec<u8>)> = Vec::new();
        for series in &self.series {
            files.push((dir.join(format!("{}.csv", series.name)), series.to_csv()?.into_bytes()));
        }
        for (name, bytes) in &self.binaries {
            files.push((dir.join(name), bytes.clone()));
        }
        files.push((dir.join("config.toml"), self.config.to_toml().into_bytes()));
        files.push((dir.join("summary.txt"), self.summary().into_bytes()));
        let mut written = Vec::new();
        for (path, bytes) in files {
            fs::write(&path, bytes)?;
            written.push(path);
        }
        for (name, member) in &self.members {
            written.extend(member.write(&dir.join(name))?);
        }
        Ok(written)
    }
}
