//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qpa::SpectrumParams;

pub const SCHEMA_VERSION: u32 = 1;
/// Default per-point wall-clock budget in seconds.
pub const DEFAULT_TIMEOUT_S: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Identity,
    Rp,
    Cloning,
    Qpa,
    Dme,
    Definetti,
}

impl Task {
    pub const ALL: [Task; 6] = [Task::Identity, Task::Rp, Task::Cloning, Task::Qpa, Task::Dme, Task::Definetti];

    pub fn name(&self) -> &'static str {
        match self {
            Task::Identity => "identity",
            Task::Rp => "rp",
            Task::Cloning => "cloning",
            Task::Qpa => "qpa",
            Task::Dme => "dme",
            Task::Definetti => "definetti",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown task `{s}`")))
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

/// Parameter axes. Each task reads the axes it needs and ignores the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid {
    pub d: Vec<usize>,
    pub r: Vec<usize>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub ell: Vec<usize>,
    pub k: Vec<usize>,
    /// Spectrum for the eigenstate-tomography Monte Carlo (qpa only).
    pub p: Option<Vec<f64>>,
    pub t: Vec<f64>,
    pub eps: Vec<f64>,
    pub d_min: Vec<f64>,
    /// Random probes on top of the maximally entangled one (dme).
    pub probes: usize,
    /// Independent tomography runs per point (dme).
    pub trials: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            d: vec![2],
            r: vec![1],
            n: vec![8, 16, 32, 64],
            m: vec![1],
            ell: vec![1],
            k: vec![1],
            p: None,
            t: vec![1.0],
            eps: vec![0.01],
            d_min: vec![0.3],
            probes: 4,
            trials: 16,
        }
    }
}

fn default_samples() -> usize {
    10_000
}

fn default_timeout() -> f64 {
    DEFAULT_TIMEOUT_S
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub task: Task,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
    /// Record wall time per point. Off by default so that output files are
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
}

// Size caps for the brute-force paths.
pub const MAX_DME_DIM: usize = 6;
pub const MAX_DME_STEPS: usize = 1 << 16;
pub const MAX_EB_COPIES: usize = 400;
pub const MAX_DEFINETTI_SPACE: usize = 1 << 14;
pub const MAX_QPA_DIM: usize = 1 << 20;

impl ExperimentConfig {
    pub fn new(task: Task) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            task,
            grid: Grid::default(),
            samples: default_samples(),
            seed: 0,
            out: None,
            format: Format::Csv,
            timeout_s: DEFAULT_TIMEOUT_S,
            timing: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.schema != SCHEMA_VERSION {
            return bad(format!("schema {} is not supported (expected {SCHEMA_VERSION})", self.schema));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if !(self.timeout_s > 0.0 && self.timeout_s.is_finite()) {
            return bad(format!("timeout_s = {} must be positive", self.timeout_s));
        }
        let g = &self.grid;
        let nonempty = |name: &str, len: usize| if len == 0 { bad(format!("grid.{name} is empty")) } else { Ok(()) };
        nonempty("d", g.d.len())?;
        if g.d.contains(&0) || g.n.contains(&0) || g.m.contains(&0) || g.r.contains(&0) || g.k.contains(&0) {
            return bad("grid entries d, n, m, r, k must be positive".into());
        }
        match self.task {
            Task::Identity => nonempty("n", g.n.len()),
            Task::Rp => {
                nonempty("n", g.n.len())?;
                nonempty("r", g.r.len())?;
                nonempty("ell", g.ell.len())?;
                if g.ell.contains(&0) {
                    return bad("rp needs ell >= 1".into());
                }
                for &d in &g.d {
                    if g.r.iter().any(|&r| r > d) {
                        return bad(format!("rank exceeds dimension {d}"));
                    }
                }
                Ok(())
            }
            Task::Cloning => {
                nonempty("n", g.n.len())?;
                nonempty("m", g.m.len())?;
                if !g.n.iter().any(|&n| g.m.iter().any(|&m| n < m)) {
                    return bad("cloning needs at least one pair with n < m".into());
                }
                Ok(())
            }
            Task::Qpa => {
                nonempty("k", g.k.len())?;
                nonempty("eps", g.eps.len())?;
                nonempty("d_min", g.d_min.len())?;
                nonempty("m", g.m.len())?;
                if g.d.iter().any(|&d| d > MAX_QPA_DIM) {
                    return bad(format!("qpa dimensions are capped at {MAX_QPA_DIM}"));
                }
                if g.eps.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
                    return bad("eps must lie in (0, 1)".into());
                }
                if g.d_min.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
                    return bad("d_min must lie in (0, 1]".into());
                }
                if let Some(p) = &g.p {
                    nonempty("n", g.n.len())?;
                    for &k in &g.k {
                        SpectrumParams::new(p.clone(), k).map_err(|e| Error::Config(format!("grid.p: {e}")))?;
                    }
                    if g.n.iter().any(|&n| n > MAX_EB_COPIES) {
                        return bad(format!("eigenstate tomography is capped at n = {MAX_EB_COPIES}"));
                    }
                }
                Ok(())
            }
            Task::Dme => {
                nonempty("n", g.n.len())?;
                nonempty("t", g.t.len())?;
                if g.d.iter().any(|d| !(2..=MAX_DME_DIM).contains(d)) {
                    return bad(format!("dme dimensions must lie in 2..={MAX_DME_DIM}"));
                }
                if g.n.iter().any(|&n| n > MAX_DME_STEPS) {
                    return bad(format!("dme is capped at n = {MAX_DME_STEPS}"));
                }
                if g.t.iter().any(|t| !t.is_finite()) || g.eps.iter().any(|&e| e <= 0.0) {
                    return bad("T must be finite and eps positive".into());
                }
                if g.trials == 0 {
                    return bad("trials must be positive".into());
                }
                Ok(())
            }
            Task::Definetti => {
                nonempty("m", g.m.len())?;
                for &d in &g.d {
                    for &m in &g.m {
                        let size = (d as u128).checked_pow(m as u32 + 1).unwrap_or(u128::MAX);
                        if d < 2 || size > MAX_DEFINETTI_SPACE as u128 {
                            return bad(format!("definetti point d={d} m={m} exceeds d^(m+1) <= {MAX_DEFINETTI_SPACE}"));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in_and_round_trip() {
        let cfg = ExperimentConfig::from_json(r#"{"schema": 1, "task": "rp"}"#).unwrap();
        assert_eq!(cfg.grid, Grid::default());
        assert_eq!(cfg.timeout_s, DEFAULT_TIMEOUT_S);
        let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"schema": 1, "task": "rp", "colour": 3}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"schema": 1, "task": "rp", "grid": {"q": [1]}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"schema": 2, "task": "rp"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"schema": 1, "task": "teleport"}"#).is_err());
    }

    #[test]
    fn task_limits() {
        let mut cfg = ExperimentConfig::new(Task::Dme);
        cfg.grid.d = vec![9];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(Task::Rp);
        cfg.grid.r = vec![3];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(Task::Qpa);
        cfg.grid.p = Some(vec![0.5, 0.5]);
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(Task::Cloning);
        cfg.grid.m = vec![1];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(Task::Definetti);
        cfg.grid.m = vec![20];
        assert!(cfg.validate().is_err());
        for t in Task::ALL {
            let c = ExperimentConfig::new(t);
            if t != Task::Cloning {
                c.validate().unwrap();
            }
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
        }
    }
}
