//! JSON report schema.
//!
//! Every field whose name ends in `_seconds`, plus the `environment` block, is a
//! timing or host detail; everything else is a pure function of input, config
//! and seed.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use snmf_core::eval::SyntheticSpec;
use snmf_core::{AdmmConfig, ApgConfig, CostEstimate, DenseMatrix, KktResidual, StopReason};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Apg,
    Admm,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Apg => "apg",
            Self::Admm => "admm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema: u32,
    pub input: InputSummary,
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub apg: Option<ApgConfig>,
    pub admm: Option<AdmmConfig>,
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
    /// Lowest-objective run over all solvers and restarts.
    pub best: Option<BestRun>,
    pub cost: CostEstimate,
    pub timing: Timing,
    pub environment: Environment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    /// `points`, `adjacency` or `synthetic`.
    pub kind: String,
    pub path: Option<String>,
    pub synthetic: Option<SyntheticSpec>,
    pub n: usize,
    pub dim: Option<usize>,
    pub nnz: usize,
    pub labeled: bool,
    /// `(p, q)` when the graph was built from points.
    pub graph: Option<GraphSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub solver: SolverKind,
    pub restart: usize,
    pub seed: u64,
    /// SHA-256 of the shared initial factor.
    pub init_checksum: String,
    pub iterations: usize,
    /// Total inner steps (APG only).
    pub inner_iterations: Option<usize>,
    pub stop: StopReason,
    /// `‖A − L·Lᵀ‖²_F` at exit.
    pub objective: f64,
    /// Penalized objective at exit (APG only).
    pub penalized_objective: Option<f64>,
    pub ac: Option<f64>,
    pub kkt: Option<KktResidual>,
    /// `‖L − Z‖_F / ‖L‖_F` (APG only).
    pub split_gap: Option<f64>,
    /// `‖L − X‖_F / ‖L‖_F` and `‖L − Y‖_F / ‖L‖_F` (ADMM only).
    pub primal_gaps: Option<[f64; 2]>,
    pub labels_file: Option<String>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub solver: SolverKind,
    pub runs: usize,
    pub best_restart: usize,
    pub best_objective: f64,
    pub mean_objective: f64,
    pub std_objective: f64,
    /// AC of the lowest-objective run.
    pub best_ac: Option<f64>,
    pub mean_ac: Option<f64>,
    pub std_ac: Option<f64>,
    /// Runs with AC = 100.
    pub perfect_runs: Option<usize>,
    pub converged_runs: usize,
    pub mean_iterations: f64,
    pub total_wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestRun {
    pub solver: SolverKind,
    pub restart: usize,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub ingest_seconds: f64,
    /// Absent when the adjacency matrix was read directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_build_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Hex SHA-256 over the shape and the little-endian bytes of every entry.
pub fn matrix_checksum(m: &DenseMatrix) -> String {
    let mut h = Sha256::new();
    h.update((m.rows() as u64).to_le_bytes());
    h.update((m.cols() as u64).to_le_bytes());
    for v in m.as_slice() {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Mean and population standard deviation.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn aggregate(solver: SolverKind, records: &[&RunRecord]) -> Option<Aggregate> {
    let best = records
        .iter()
        .min_by(|a, b| a.objective.total_cmp(&b.objective).then(a.restart.cmp(&b.restart)))?;
    let objectives: Vec<f64> = records.iter().map(|r| r.objective).collect();
    let (mean_objective, std_objective) = mean_std(&objectives);
    let acs: Option<Vec<f64>> = records.iter().map(|r| r.ac).collect();
    let ac_stats = acs.as_deref().map(mean_std);
    let iterations: Vec<f64> = records.iter().map(|r| r.iterations as f64).collect();
    Some(Aggregate {
        solver,
        runs: records.len(),
        best_restart: best.restart,
        best_objective: best.objective,
        mean_objective,
        std_objective,
        best_ac: best.ac,
        mean_ac: ac_stats.map(|s| s.0),
        std_ac: ac_stats.map(|s| s.1),
        perfect_runs: acs.map(|a| a.iter().filter(|&&v| v == 100.0).count()),
        converged_runs: records.iter().filter(|r| r.stop == StopReason::Converged).count(),
        mean_iterations: mean_std(&iterations).0,
        total_wall_time_seconds: records.iter().map(|r| r.wall_time_seconds).sum(),
    })
}
