use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use snmf_cli::report::MetricsReport;
use snmf_cli::{run_experiment, InputSource, PointsFormat, RunConfig, SolverChoice};
use snmf_core::eval::{SyntheticKind, SyntheticSpec};
use snmf_core::{AdmmConfig, ApgConfig, GraphConfig};

/// Exit status when a solver produced non-finite values.
const EXIT_NON_FINITE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "snmf", version, about = "Graph clustering by symmetric nonnegative matrix factorization")]
#[command(group(ArgGroup::new("source").required(true).args(["input", "adjacency", "synthetic"])))]
struct Args {
    /// Points CSV, one row per point.
    #[arg(long, value_name = "CSV")]
    input: Option<PathBuf>,
    /// Adjacency triplets: header `n nnz`, then `i j value` lines.
    #[arg(long, value_name = "FILE")]
    adjacency: Option<PathBuf>,
    /// Generate a labeled toy data set instead of reading one.
    #[arg(long, value_name = "KIND", value_parser = parse_kind)]
    synthetic: Option<SyntheticKind>,
    /// Points per cluster for --synthetic.
    #[arg(long, default_value_t = 100)]
    per_cluster: usize,
    /// Noise scale for --synthetic.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Seed for --synthetic; defaults to --seed.
    #[arg(long)]
    data_seed: Option<u64>,
    /// Number of clusters.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = SolverChoice::Both)]
    solver: SolverChoice,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Base seed; restart r initializes from seed + r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    rho_apg: f64,
    #[arg(long, default_value_t = 0.1)]
    rho_admm: f64,
    #[arg(long, default_value_t = 1e-5)]
    epsilon: f64,
    /// Cap on ADMM iterations and APG outer iterations.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Cap on APG inner iterations per block.
    #[arg(long)]
    max_inner: Option<usize>,
    /// Last CSV column holds integer gold labels.
    #[arg(long)]
    labeled: bool,
    /// Skip the first CSV line.
    #[arg(long)]
    header: bool,
    /// Neighbor rank used for the local scale.
    #[arg(long, default_value_t = 7)]
    p: usize,
    /// Neighbor count; defaults to floor(log2 n) + 1.
    #[arg(long)]
    q: Option<usize>,
    /// Output directory for report.json and label files.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<SyntheticKind, String> {
    s.parse().map_err(|e: snmf_core::Error| e.to_string())
}

impl Args {
    fn into_config(self) -> RunConfig {
        let source = if let Some(path) = self.input {
            InputSource::Points {
                path,
                format: PointsFormat {
                    labeled: self.labeled,
                    header: self.header,
                },
            }
        } else if let Some(path) = self.adjacency {
            InputSource::Adjacency { path }
        } else {
            let kind = self.synthetic.expect("clap enforces one input source");
            let seed = self.data_seed.unwrap_or(self.seed);
            InputSource::Synthetic(SyntheticSpec::new(kind, self.k, self.per_cluster, self.noise, seed))
        };
        let defaults_apg = ApgConfig::default();
        let defaults_admm = AdmmConfig::default();
        RunConfig {
            source,
            k: self.k,
            solver: self.solver,
            restarts: self.restarts,
            seed: self.seed,
            apg: ApgConfig {
                rho: self.rho_apg,
                epsilon: self.epsilon,
                max_outer: self.max_iter.unwrap_or(defaults_apg.max_outer),
                max_inner: self.max_inner.unwrap_or(defaults_apg.max_inner),
                seed: self.seed,
            },
            admm: AdmmConfig {
                rho: self.rho_admm,
                epsilon: self.epsilon,
                max_iter: self.max_iter.unwrap_or(defaults_admm.max_iter),
                seed: self.seed,
            },
            graph: GraphConfig {
                p: self.p,
                q_override: self.q,
            },
            out: self.out,
        }
    }
}

fn print_summary(report: &MetricsReport) {
    println!(
        "n = {}, nnz = {}, k = {}, restarts = {}",
        report.input.n, report.input.nnz, report.k, report.restarts
    );
    for agg in &report.aggregates {
        let ac = match (agg.mean_ac, agg.perfect_runs) {
            (Some(m), Some(p)) => format!(", mean AC {m:.2}, perfect {p}/{}", agg.runs),
            _ => String::new(),
        };
        println!(
            "{:>4}: best objective {:.6} (restart {}), mean {:.6}{ac}, {:.3}s",
            agg.solver.name(),
            agg.best_objective,
            agg.best_restart,
            agg.mean_objective,
            agg.total_wall_time_seconds
        );
    }
}

fn main() -> ExitCode {
    let cfg = Args::parse().into_config();
    match run_experiment(&cfg) {
        Ok(report) => {
            print_summary(&report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_non_finite() {
                ExitCode::from(EXIT_NON_FINITE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
