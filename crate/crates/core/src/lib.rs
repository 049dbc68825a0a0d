//! Symmetric nonnegative matrix factorization for graph clustering.
//!
//! Two solvers factor a sparse symmetric adjacency `A ≈ L·Lᵀ` with `L ≥ 0`:
//!
//! * [`apg`]: alternating accelerated proximal gradient on the penalized split
//!   `‖A − L·Zᵀ‖² + ρ‖L − Z‖²`;
//! * [`admm`]: ADMM on the exact double split `L = X = Y`.
//!
//! Around them sit the similarity-graph builder ([`graph`]), KKT diagnostics
//! ([`kkt`]), accuracy evaluation ([`eval`]) and a flop model ([`costmodel`]).

pub mod admm;
pub mod apg;
pub mod costmodel;
mod error;
pub mod eval;
pub mod factor;
pub mod graph;
pub mod kkt;
pub mod linalg;
#[cfg(feature = "oracles")]
pub mod oracle;

use serde::{Deserialize, Serialize};

pub use admm::{solve_admm, AdmmConfig, AdmmResult, AdmmState};
pub use apg::{solve_apg, ApgConfig, ApgResult};
pub use costmodel::{flops_admm, CostEstimate};
pub use error::{Error, Result};
pub use eval::{assign_clusters, best_mapping, AccuracyReport, ClusterAssignment};
pub use factor::{random_init, snmf_objective, FactorMatrix};
pub use graph::{AdjacencyMatrix, DataSet, GraphConfig, WeightMatrix};
pub use kkt::{kkt_residual, KktResidual};
pub use linalg::{DenseMatrix, SparseSymMatrix};

/// Why an iterative solver returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIterations,
}
