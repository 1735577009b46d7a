//! Flat result rows and their CSV / JSON serialisation.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Format;
use crate::error::{Error, Result};

/// A grid coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(u64),
    Real(f64),
    Text(String),
}

impl From<usize> for Param {
    fn from(x: usize) -> Self {
        Param::Int(x as u64)
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Real(x)
    }
}

impl From<&str> for Param {
    fn from(x: &str) -> Self {
        Param::Text(x.to_string())
    }
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Param::Int(x) => write!(f, "{x}"),
            Param::Real(x) => write!(f, "{x:?}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

pub type Params = BTreeMap<String, Param>;

/// Build a parameter map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, Param); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Ok,
    /// Compared against a first-order law; finite-size deviations expected.
    Asymptotic,
    /// Hypotheses of the bound do not hold at this point.
    OutOfRange,
    /// Value and formula disagree beyond three standard errors.
    Mismatch,
    Timeout,
    Failed,
}

impl Validity {
    pub fn name(&self) -> &'static str {
        match self {
            Validity::Ok => "ok",
            Validity::Asymptotic => "asymptotic",
            Validity::OutOfRange => "out_of_range",
            Validity::Mismatch => "mismatch",
            Validity::Timeout => "timeout",
            Validity::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub task: String,
    pub params: Params,
    pub metric: String,
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub formula: Option<f64>,
    pub valid: Validity,
    pub seed: u64,
    /// Wall time of the grid point in milliseconds, 0 when timing is off.
    pub ms: u64,
}

fn finite(x: Option<f64>) -> Option<f64> {
    x.filter(|v| v.is_finite())
}

impl ExperimentRecord {
    pub fn new(task: &str, params: Params, metric: &str, value: Option<f64>) -> Self {
        Self {
            task: task.to_string(),
            params,
            metric: metric.to_string(),
            value: finite(value),
            stderr: None,
            formula: None,
            valid: Validity::Ok,
            seed: 0,
            ms: 0,
        }
    }

    pub fn with_stderr(mut self, stderr: f64) -> Self {
        self.stderr = finite(Some(stderr));
        self
    }

    /// Attach a closed-form value and flag a mismatch beyond
    /// `max(3 stderr, abs_tol)`.
    pub fn with_formula(mut self, formula: f64, abs_tol: f64) -> Self {
        self.formula = finite(Some(formula));
        if let (Some(v), Some(f)) = (self.value, self.formula) {
            let tol = (3.0 * self.stderr.unwrap_or(0.0)).max(abs_tol);
            if (v - f).abs() > tol && self.valid == Validity::Ok {
                self.valid = Validity::Mismatch;
            }
        }
        self
    }

    pub fn flagged(mut self, valid: Validity) -> Self {
        self.valid = valid;
        self
    }

    pub fn formula_row(task: &str, params: Params, metric: &str, formula: f64) -> Self {
        Self::new(task, params, metric, Some(formula)).with_formula(formula, 0.0)
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

/// Parameter names used by any record, sorted.
fn param_columns(records: &[ExperimentRecord]) -> Vec<String> {
    let set: BTreeSet<&String> = records.iter().flat_map(|r| r.params.keys()).collect();
    set.into_iter().cloned().collect()
}

/// Header `task,param.<name>...,metric,value,stderr,formula,valid,seed,ms`.
pub fn csv_header(records: &[ExperimentRecord]) -> Vec<String> {
    let mut h = vec!["task".to_string()];
    h.extend(param_columns(records).into_iter().map(|p| format!("param.{p}")));
    h.extend(["metric", "value", "stderr", "formula", "valid", "seed", "ms"].map(String::from));
    h
}

pub fn to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let cols = param_columns(records);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(csv_header(records)).map_err(io)?;
    for r in records {
        let mut row = vec![r.task.clone()];
        row.extend(cols.iter().map(|c| r.params.get(c).map(|p| p.to_string()).unwrap_or_default()));
        row.extend([
            r.metric.clone(),
            cell(r.value),
            cell(r.stderr),
            cell(r.formula),
            r.valid.name().to_string(),
            r.seed.to_string(),
            r.ms.to_string(),
        ]);
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_json(records: &[ExperimentRecord]) -> Result<String> {
    serde_json::to_string_pretty(records).map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json(text: &str) -> Result<Vec<ExperimentRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
}

pub fn render(records: &[ExperimentRecord], format: Format) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records to emit".into()));
    }
    match format {
        Format::Csv => to_csv(records),
        Format::Json => to_json(records).map(|s| s + "\n"),
    }
}

/// Write the records to `path`; nothing is written for an empty list.
pub fn emit(records: &[ExperimentRecord], format: Format, path: &Path) -> Result<()> {
    let text = render(records, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ExperimentRecord> {
        vec![
            ExperimentRecord::new("dme", params([("d", 2.into()), ("t", 1.0.into())]), "lmr_error", Some(0.05)),
            ExperimentRecord::new("dme", params([("d", 3.into()), ("series", "eb".into())]), "x", Some(1.0))
                .with_stderr(0.1)
                .with_formula(2.0, 0.0),
            ExperimentRecord::new("dme", params([("d", 3.into())]), "y", None).flagged(Validity::Timeout),
        ]
    }

    #[test]
    fn empty_list_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(emit(&[], Format::Csv, &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn json_round_trip() {
        let recs = sample();
        assert_eq!(from_json(&to_json(&recs).unwrap()).unwrap(), recs);
    }

    #[test]
    fn csv_header_and_rows() {
        let text = to_csv(&sample()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "task,param.d,param.series,param.t,metric,value,stderr,formula,valid,seed,ms"
        );
        assert_eq!(lines.next().unwrap(), "dme,2,,1.0,lmr_error,0.05,,,ok,0,0");
        assert_eq!(lines.next().unwrap(), "dme,3,eb,,x,1.0,0.1,2.0,mismatch,0,0");
        assert_eq!(lines.next().unwrap(), "dme,3,,,y,,,,timeout,0,0");
    }

    #[test]
    fn non_finite_values_become_empty() {
        let r = ExperimentRecord::new("qpa", Params::new(), "fit.r2", Some(f64::NAN));
        assert_eq!(r.value, None);
        assert_eq!(from_json(&to_json(std::slice::from_ref(&r)).unwrap()).unwrap(), vec![r]);
    }

    #[test]
    fn formula_within_three_sigma_is_ok() {
        let r = ExperimentRecord::new("x", Params::new(), "m", Some(1.0)).with_stderr(0.1).with_formula(1.25, 0.0);
        assert_eq!(r.valid, Validity::Ok);
    }
}
