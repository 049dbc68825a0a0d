//! Experiment driver for symmetric NMF graph clustering: input readers, the
//! multi-restart runner and its JSON report.

pub mod ingest;
pub mod report;
pub mod run;

pub use ingest::{ingest_adjacency, ingest_points, IngestError, PointsFormat};
pub use report::{MetricsReport, RunRecord, SolverKind};
pub use run::{execute, run_experiment, write_outputs, Experiment, InputSource, RunConfig, RunError, SolverChoice};
