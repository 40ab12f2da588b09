use std::path::{Path, PathBuf};

use gwlab_core::{Construction, ProcessSpec, Space};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Statistic families a run can compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Crossings,
    HalflineChanges,
    Events,
    Checks,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::Crossings,
        Statistic::HalflineChanges,
        Statistic::Events,
        Statistic::Checks,
    ];

    fn all() -> Vec<Statistic> {
        Statistic::ALL.to_vec()
    }
}

fn default_max_index() -> usize {
    15
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spec: ProcessSpec,
    pub runs: u64,
    pub base_seed: u64,
    /// Window lengths for coupled-window studies, strictly increasing.
    #[serde(default)]
    pub windows: Vec<f64>,
    #[serde(default = "Statistic::all")]
    pub statistics: Vec<Statistic>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Worker threads; `GWLAB_WORKERS` overrides, default is all cores.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Largest index `n` (or `m`) evaluated for indexed event families.
    #[serde(default = "default_max_index")]
    pub max_index: usize,
}

impl ExperimentConfig {
    pub fn new(spec: ProcessSpec, runs: u64, base_seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            spec,
            runs,
            base_seed,
            windows: Vec::new(),
            statistics: Statistic::all(),
            output_path: None,
            workers: None,
            max_index: default_max_index(),
        }
    }

    pub fn with_windows(mut self, windows: &[f64]) -> ExperimentConfig {
        self.windows = windows.to_vec();
        self
    }

    pub fn wants(&self, stat: Statistic) -> bool {
        self.statistics.contains(&stat)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.runs == 0 {
            return Err(Error::usage("runs", "must be at least 1"));
        }
        if self.windows.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::usage("windows", "lengths must be positive and finite"));
        }
        if self.windows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::usage("windows", "must be strictly increasing"));
        }
        if self.workers == Some(0) {
            return Err(Error::usage("workers", "must be at least 1"));
        }
        if self.max_index == 0 {
            return Err(Error::usage("max_index", "must be at least 1"));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Worker count after the `GWLAB_WORKERS` override.
    pub fn worker_count(&self) -> Result<Option<usize>> {
        match std::env::var("GWLAB_WORKERS") {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(Some(n)),
                _ => Err(Error::usage("GWLAB_WORKERS", format!("expected a positive integer, got {v:?}"))),
            },
            Err(_) => Ok(self.workers),
        }
    }
}

/// Command-line names of the constructions.
pub const CONSTRUCTION_NAMES: [&str; 5] = [
    "single-line",
    "intersecting",
    "parallel-duplicated",
    "parallel-thinned",
    "parallel-shifted",
];

/// Flag values describing a process, before validation.
#[derive(Clone, Debug, Default)]
pub struct SpecArgs {
    pub construction: String,
    pub lambda: f64,
    pub window: f64,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub allow_unproven_s: bool,
}

impl SpecArgs {
    pub fn build(&self) -> Result<ProcessSpec> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| Error::usage(flag, format!("required for {}", self.construction)))
        };
        if !(self.window.is_finite() && self.window > 0.0) {
            return Err(Error::usage("--window", "must be positive"));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::usage("--lambda", "must be positive"));
        }
        let parallel = |construction| -> Result<(Construction, Space)> {
            let r = self.r.unwrap_or(1.0);
            let space = Space::parallel(r, self.window).map_err(|e| Error::usage("--r", e.to_string()))?;
            Ok((construction, space))
        };
        let (construction, space) = match self.construction.as_str() {
            "single-line" => (Construction::SingleLinePoisson, Space::single_line(self.window)?),
            "intersecting" => {
                let alpha = self.alpha.unwrap_or(std::f64::consts::FRAC_PI_2);
                let space =
                    Space::intersecting(alpha, self.window).map_err(|e| Error::usage("--alpha", e.to_string()))?;
                (Construction::IntersectingIndependent, space)
            }
            "parallel-duplicated" => parallel(Construction::ParallelDuplicated)?,
            "parallel-thinned" => parallel(Construction::ParallelThinned {
                p: need(self.p, "--p")?,
            })?,
            "parallel-shifted" => parallel(Construction::ParallelShifted {
                s: need(self.s, "--s")?,
            })?,
            other => {
                return Err(Error::usage(
                    "--construction",
                    format!("unknown construction {other:?}; expected one of {}", CONSTRUCTION_NAMES.join(", ")),
                ))
            }
        };
        let spec = ProcessSpec {
            construction,
            rate_lambda: self.lambda,
            space,
            allow_unproven_s: self.allow_unproven_s,
        };
        spec.validate().map_err(|e| {
            let flag = match construction {
                Construction::ParallelThinned { .. } => "--p",
                Construction::ParallelShifted { .. } => "--s",
                _ => "--construction",
            };
            Error::usage(flag, e.to_string())
        })?;
        Ok(spec)
    }
}
