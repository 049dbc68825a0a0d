//! Experiment orchestration: input, graph, restarts over the requested solvers,
//! evaluation and atomic output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use snmf_core::eval::{generate, SyntheticSpec};
use snmf_core::graph::{build_adjacency, neighbor_count};
use snmf_core::{
    assign_clusters, best_mapping, flops_admm, random_init, solve_admm, solve_apg, AdmmConfig,
    ApgConfig, DataSet, FactorMatrix, GraphConfig, SparseSymMatrix,
};
use thiserror::Error;

use crate::ingest::{ingest_adjacency, ingest_points, IngestError, PointsFormat};
use crate::report::*;

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Points { path: PathBuf, format: PointsFormat },
    Adjacency { path: PathBuf },
    Synthetic(SyntheticSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverChoice {
    Apg,
    Admm,
    Both,
}

impl SolverChoice {
    pub fn solvers(self) -> &'static [SolverKind] {
        match self {
            Self::Apg => &[SolverKind::Apg],
            Self::Admm => &[SolverKind::Admm],
            Self::Both => &[SolverKind::Apg, SolverKind::Admm],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: InputSource,
    pub k: usize,
    pub solver: SolverChoice,
    pub restarts: usize,
    /// Restart `r` initializes from `seed + r`.
    pub seed: u64,
    pub apg: ApgConfig,
    pub admm: AdmmConfig,
    pub graph: GraphConfig,
    /// Directory for `report.json` and the label files.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: InputSource, k: usize) -> Self {
        Self {
            source,
            k,
            solver: SolverChoice::Both,
            restarts: 1,
            seed: 0,
            apg: ApgConfig::default(),
            admm: AdmmConfig::default(),
            graph: GraphConfig::default(),
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.restarts == 0 {
            return Err(RunError::Config("restarts must be at least 1".into()));
        }
        self.apg.validate()?;
        self.admm.validate()?;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("graph construction failed: {0}")]
    Graph(#[source] snmf_core::Error),
    #[error("{} solver failed on restart {restart}: {source}", solver.name())]
    Solver {
        solver: SolverKind,
        restart: usize,
        #[source]
        source: snmf_core::Error,
    },
    #[error(transparent)]
    Core(#[from] snmf_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// True when a solver diverged to non-finite values.
    pub fn is_non_finite(&self) -> bool {
        matches!(
            self,
            Self::Solver {
                source: snmf_core::Error::NonFinite(_),
                ..
            }
        )
    }
}

struct Problem {
    a: SparseSymMatrix,
    labels: Option<Vec<usize>>,
    input: InputSummary,
    timing: Timing,
}

fn load(cfg: &RunConfig) -> Result<Problem, RunError> {
    let start = Instant::now();
    let (data, path, synthetic) = match &cfg.source {
        InputSource::Adjacency { path } => {
            let a = ingest_adjacency(path)?;
            let input = InputSummary {
                kind: "adjacency".into(),
                path: Some(path.display().to_string()),
                synthetic: None,
                n: a.order(),
                dim: None,
                nnz: a.nnz(),
                labeled: false,
                graph: None,
            };
            let timing = Timing {
                ingest_seconds: start.elapsed().as_secs_f64(),
                graph_build_seconds: None,
            };
            return Ok(Problem {
                a,
                labels: None,
                input,
                timing,
            });
        }
        InputSource::Points { path, format } => {
            (ingest_points(path, *format)?, Some(path.display().to_string()), None)
        }
        InputSource::Synthetic(spec) => (generate(spec)?, None, Some(*spec)),
    };
    let ingest_seconds = start.elapsed().as_secs_f64();
    from_points(cfg, data, path, synthetic, ingest_seconds)
}

fn from_points(
    cfg: &RunConfig,
    data: DataSet,
    path: Option<String>,
    synthetic: Option<SyntheticSpec>,
    ingest_seconds: f64,
) -> Result<Problem, RunError> {
    let start = Instant::now();
    let adj = build_adjacency(&data, &cfg.graph).map_err(RunError::Graph)?;
    let graph_build_seconds = start.elapsed().as_secs_f64();
    let input = InputSummary {
        kind: if synthetic.is_some() { "synthetic" } else { "points" }.into(),
        path,
        synthetic,
        n: data.len(),
        dim: Some(data.dim()),
        nnz: adj.a.nnz(),
        labeled: data.labels().is_some(),
        graph: Some(GraphSummary {
            p: cfg.graph.p,
            q: neighbor_count(data.len(), &cfg.graph)?,
        }),
    };
    Ok(Problem {
        a: adj.a,
        labels: data.labels().map(<[usize]>::to_vec),
        input,
        timing: Timing {
            ingest_seconds,
            graph_build_seconds: Some(graph_build_seconds),
        },
    })
}

/// A finished experiment: the report plus the predicted labels of every run,
/// in record order.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: MetricsReport,
    pub labels: Vec<Vec<usize>>,
}

/// The initialization shared by every solver within one restart.
struct Restart {
    index: usize,
    seed: u64,
    init: FactorMatrix,
    checksum: String,
}

fn run_one(
    solver: SolverKind,
    a: &SparseSymMatrix,
    cfg: &RunConfig,
    start: &Restart,
    gold: Option<&[usize]>,
) -> Result<(RunRecord, Vec<usize>), RunError> {
    let (restart, seed, init) = (start.index, start.seed, &start.init);
    let fail = |source| RunError::Solver {
        solver,
        restart,
        source,
    };
    let mut record = RunRecord {
        solver,
        restart,
        seed,
        init_checksum: start.checksum.clone(),
        iterations: 0,
        inner_iterations: None,
        stop: snmf_core::StopReason::MaxIterations,
        objective: 0.0,
        penalized_objective: None,
        ac: None,
        kkt: None,
        split_gap: None,
        primal_gaps: None,
        labels_file: None,
        wall_time_seconds: 0.0,
    };
    let assignment = match solver {
        SolverKind::Apg => {
            let apg = ApgConfig { seed, ..cfg.apg };
            let r = solve_apg(a, cfg.k, &apg, Some(init)).map_err(fail)?;
            record.iterations = r.outer_iterations;
            record.inner_iterations = Some(r.inner_iterations);
            record.stop = r.stop;
            record.objective = r.snmf_objective;
            record.penalized_objective = r.trace.last().copied();
            record.split_gap = Some(r.split_gap);
            record.wall_time_seconds = r.wall_time.as_secs_f64();
            assign_clusters(&r.z)
        }
        SolverKind::Admm => {
            let admm = AdmmConfig { seed, ..cfg.admm };
            let r = solve_admm(a, cfg.k, &admm, Some(init)).map_err(fail)?;
            record.iterations = r.iterations;
            record.stop = r.stop;
            record.objective = r.snmf_objective;
            record.kkt = Some(r.kkt);
            record.primal_gaps = Some([r.gap_x, r.gap_y]);
            record.wall_time_seconds = r.wall_time.as_secs_f64();
            assign_clusters(r.l())
        }
    };
    if let Some(gold) = gold {
        record.ac = Some(best_mapping(&assignment, gold)?.ac);
    }
    Ok((record, assignment.labels))
}

/// Runs every restart without touching the filesystem beyond reading the input.
pub fn execute(cfg: &RunConfig) -> Result<Experiment, RunError> {
    cfg.validate()?;
    let problem = load(cfg)?;
    let a = &problem.a;
    if cfg.k == 0 || cfg.k >= a.order() {
        return Err(snmf_core::Error::InvalidK { k: cfg.k, n: a.order() }.into());
    }
    let mut records = Vec::new();
    let mut labels = Vec::new();
    for restart in 0..cfg.restarts {
        let seed = cfg.seed.wrapping_add(restart as u64);
        let init = random_init(a, cfg.k, seed);
        let start = Restart {
            index: restart,
            seed,
            checksum: matrix_checksum(&init),
            init,
        };
        for &solver in cfg.solver.solvers() {
            let (record, assigned) = run_one(solver, a, cfg, &start, problem.labels.as_deref())?;
            records.push(record);
            labels.push(assigned);
        }
    }
    let aggregates = cfg
        .solver
        .solvers()
        .iter()
        .filter_map(|&s| {
            let mine: Vec<&RunRecord> = records.iter().filter(|r| r.solver == s).collect();
            aggregate(s, &mine)
        })
        .collect();
    let best = records
        .iter()
        .min_by(|x, y| x.objective.total_cmp(&y.objective))
        .map(|r| BestRun {
            solver: r.solver,
            restart: r.restart,
            objective: r.objective,
        });
    let uses = |s: SolverKind| cfg.solver.solvers().contains(&s);
    let report = MetricsReport {
        schema: SCHEMA_VERSION,
        input: problem.input,
        k: cfg.k,
        restarts: cfg.restarts,
        seed: cfg.seed,
        apg: uses(SolverKind::Apg).then_some(cfg.apg),
        admm: uses(SolverKind::Admm).then_some(cfg.admm),
        records,
        aggregates,
        best,
        cost: flops_admm(a.order(), cfg.k),
        timing: problem.timing,
        environment: Environment::current(),
    };
    Ok(Experiment { report, labels })
}

/// Writes `bytes` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let wrap = |source| RunError::Write {
        path: path.to_path_buf(),
        source,
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(wrap)?;
    f.write_all(bytes).map_err(wrap)?;
    f.sync_all().map_err(wrap)?;
    fs::rename(&tmp, path).map_err(wrap)
}

fn labels_csv(labels: &[usize]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label"]).expect("in-memory write");
    for l in labels {
        w.write_record([l.to_string()]).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Writes `report.json` and one label CSV per run under `dir`, filling in each
/// record's `labels_file`.
pub fn write_outputs(exp: &mut Experiment, dir: &Path) -> Result<(), RunError> {
    let labels_dir = dir.join("labels");
    fs::create_dir_all(&labels_dir).map_err(|source| RunError::Write {
        path: labels_dir.clone(),
        source,
    })?;
    for (record, labels) in exp.report.records.iter_mut().zip(&exp.labels) {
        let name = format!("{}_r{:03}.csv", record.solver.name(), record.restart);
        write_atomic(&labels_dir.join(&name), &labels_csv(labels))?;
        record.labels_file = Some(format!("labels/{name}"));
    }
    let mut json = serde_json::to_vec_pretty(&exp.report).expect("report serializes");
    json.push(b'\n');
    write_atomic(&dir.join("report.json"), &json)
}

/// [`execute`], then [`write_outputs`] when an output directory is configured.
pub fn run_experiment(cfg: &RunConfig) -> Result<MetricsReport, RunError> {
    let mut exp = execute(cfg)?;
    if let Some(dir) = &cfg.out {
        write_outputs(&mut exp, dir)?;
    }
    Ok(exp.report)
}
