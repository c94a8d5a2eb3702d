use crate::error::{HarnessError, HarnessResult};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use vanhove_core::Complex64;

/// One line of the CSV table; `pass` is `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment_id: String,
    pub input_descriptor: String,
    pub analytic_value: String,
    pub oracle_value: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(
        experiment_id: impl Into<String>,
        input_descriptor: impl Into<String>,
        analytic_value: impl Into<String>,
        oracle_value: Option<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            experiment_id: experiment_id.into(),
            input_descriptor: input_descriptor.into(),
            analytic_value: analytic_value.into(),
            oracle_value: oracle_value.unwrap_or_default(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// A row asserting `value >= threshold`; the residual is the shortfall.
    pub fn lower_bound(
        experiment_id: impl Into<String>,
        input_descriptor: impl Into<String>,
        value: f64,
        bound: Option<f64>,
        threshold: f64,
    ) -> Self {
        let shortfall = if value.is_nan() { f64::INFINITY } else { (threshold - value).max(0.0) };
        Self::new(experiment_id, input_descriptor, real(value), bound.map(real), shortfall, 0.0)
    }

    /// A row asserting an exact categorical match.
    pub fn categorical(
        experiment_id: impl Into<String>,
        input_descriptor: impl Into<String>,
        computed: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        let (computed, expected) = (computed.into(), expected.into());
        let residual = if computed == expected { 0.0 } else { 1.0 };
        Self::new(experiment_id, input_descriptor, computed, Some(expected), residual, 0.0)
    }
}

pub fn complex(z: Complex64) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

pub fn real(x: f64) -> String {
    format!("{x:.12e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub seed: Option<u64>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub rows: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub seed: Option<u64>,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub pass: bool,
    pub suites: BTreeMap<String, SuiteSummary>,
}

impl Report {
    /// Rows ordered by suite and input descriptor.
    pub fn new(experiment: &str, seed: Option<u64>, mut rows: Vec<ReportRow>) -> Self {
        rows.sort_by(|a, b| {
            (a.experiment_id.as_str(), a.input_descriptor.as_str())
                .cmp(&(b.experiment_id.as_str(), b.input_descriptor.as_str()))
        });
        Self { experiment: experiment.to_string(), seed, rows }
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn suite(&self, id: &str) -> impl Iterator<Item = &ReportRow> {
        let id = id.to_string();
        self.rows.iter().filter(move |r| r.experiment_id == id)
    }

    pub fn summary(&self) -> Summary {
        let mut suites: BTreeMap<String, SuiteSummary> = BTreeMap::new();
        for r in &self.rows {
            let s = suites
                .entry(r.experiment_id.clone())
                .or_insert(SuiteSummary { rows: 0, failed: 0, max_residual: 0.0, pass: true });
            s.rows += 1;
            if !r.pass {
                s.failed += 1;
                s.pass = false;
            }
            s.max_residual = s.max_residual.max(r.residual);
        }
        let failed = self.rows.iter().filter(|r| !r.pass).count();
        Summary {
            experiment: self.experiment.clone(),
            seed: self.seed,
            rows: self.rows.len(),
            passed: self.rows.len() - failed,
            failed,
            max_residual: self.rows.iter().map(|r| r.residual).fold(0.0, f64::max),
            pass: failed == 0,
            suites,
        }
    }

    pub fn to_csv(&self) -> HarnessResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| HarnessError::Output(e.to_string()))?;
        }
        if self.rows.is_empty() {
            w.write_record([
                "experiment_id",
                "input_descriptor",
                "analytic_value",
                "oracle_value",
                "residual",
                "tolerance",
                "pass",
            ])
            .map_err(|e| HarnessError::Output(e.to_string()))?;
        }
        w.into_inner().map_err(|e| HarnessError::Output(e.to_string()))
    }

    pub fn to_json(&self) -> HarnessResult<String> {
        serde_json::to_string_pretty(&self.summary()).map_err(|e| HarnessError::Output(e.to_string()))
    }

    /// Writes `<experiment>.csv` and `<experiment>.json` into `dir`; returns both paths.
    pub fn write(&self, dir: &Path) -> HarnessResult<(PathBuf, PathBuf)> {
        let csv = self.to_csv()?;
        let json = self.to_json()?;
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::Output(format!("{}: {e}", dir.display())))?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        let json_path = dir.join(format!("{}.json", self.experiment));
        std::fs::write(&csv_path, csv).map_err(|e| HarnessError::Output(format!("{}: {e}", csv_path.display())))?;
        std::fs::write(&json_path, json + "\n")
            .map_err(|e| HarnessError::Output(format!("{}: {e}", json_path.display())))?;
        Ok((csv_path, json_path))
    }
}
