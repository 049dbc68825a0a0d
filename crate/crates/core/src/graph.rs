//! Sparse similarity graph: adjusted q-nearest-neighbor connectivity with
//! locally scaled Gaussian weights, normalized as `D^{-1/2}·W·D^{-1/2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SparseSymMatrix};

/// Points (one per row) with optional gold labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    points: DenseMatrix,
    labels: Option<Vec<usize>>,
}

impl DataSet {
    pub fn new(points: DenseMatrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if !points.is_finite() {
            return Err(Error::NonFinite("data points"));
        }
        if let Some(l) = &labels {
            if l.len() != points.rows() {
                return Err(Error::LengthMismatch {
                    left: points.rows(),
                    right: l.len(),
                });
            }
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn points(&self) -> &DenseMatrix {
        &self.points
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphConfig {
    /// Rank of the neighbor whose distance sets a point's local scale.
    pub p: usize,
    /// Neighbor count; `⌊log₂ n⌋ + 1` when unset.
    pub q_override: Option<usize>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            p: 7,
            q_override: None,
        }
    }
}

/// `q_override`, or `⌊log₂ n⌋ + 1`.
pub fn neighbor_count(n: usize, cfg: &GraphConfig) -> Result<usize> {
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    match cfg.q_override {
        Some(0) => Err(Error::InvalidConfig("q must be at least 1".into())),
        Some(q) => Ok(q),
        None => Ok(n.ilog2() as usize + 1),
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Gaussian weights `W_ij ∈ [0, 1]` on the adjusted neighbor graph, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub w: SparseSymMatrix,
    /// Local scale of every point: distance to its p-th nearest neighbor.
    pub sigma: Vec<f64>,
    pub q: usize,
}

/// Normalized adjacency with the degree vector of `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    pub a: SparseSymMatrix,
    pub degrees: Vec<f64>,
}

/// The `count` nearest other points of `i`, by squared distance then index.
fn nearest(data: &DataSet, i: usize, count: usize) -> Vec<(f64, usize)> {
    let xi = data.point(i);
    let mut cand: Vec<(f64, usize)> = (0..data.len())
        .filter(|&j| j != i)
        .map(|j| (squared_distance(xi, data.point(j)), j))
        .collect();
    let by_dist = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if count < cand.len() {
        cand.select_nth_unstable_by(count, by_dist);
        cand.truncate(count);
    }
    cand.sort_unstable_by(by_dist);
    cand
}

/// `W_ij = exp(−‖d_i − d_j‖² / (σ_i σ_j))` whenever `j ∈ N_q(i)` or `i ∈ N_q(j)`.
///
/// Points never count as their own neighbor; distance ties go to the lower index.
pub fn build_weight_matrix(data: &DataSet, cfg: &GraphConfig) -> Result<WeightMatrix> {
    let n = data.len();
    let q = neighbor_count(n, cfg)?;
    if cfg.p == 0 {
        return Err(Error::InvalidConfig("p must be at least 1".into()));
    }
    let depth = cfg.p.max(q);
    if n <= depth {
        return Err(Error::InvalidConfig(format!(
            "need more than max(p, q) = {depth} points, got {n}"
        )));
    }

    let mut sigma = Vec::with_capacity(n);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * q);
    for i in 0..n {
        let nn = nearest(data, i, depth);
        let s = nn[cfg.p - 1].0.sqrt();
        if s == 0.0 {
            return Err(Error::DegenerateScale { index: i });
        }
        sigma.push(s);
        pairs.extend(nn[..q].iter().map(|&(_, j)| (i.min(j), i.max(j))));
    }
    pairs.sort_unstable();
    pairs.dedup();

    let entries = pairs.into_iter().map(|(i, j)| {
        let d2 = squared_distance(data.point(i), data.point(j));
        (i, j, (-d2 / (sigma[i] * sigma[j])).exp())
    });
    let w = SparseSymMatrix::from_pairs(n, entries)?;
    Ok(WeightMatrix { w, sigma, q })
}

/// `A = D^{-1/2}·W·D^{-1/2}` with `D = diag(row sums of W)`.
pub fn normalize_adjacency(w: &WeightMatrix) -> Result<AdjacencyMatrix> {
    normalize_sparse(&w.w)
}

pub fn normalize_sparse(w: &SparseSymMatrix) -> Result<AdjacencyMatrix> {
    let degrees = w.row_sums();
    if let Some(index) = degrees.iter().position(|&d| d.is_nan() || d <= 0.0) {
        return Err(Error::IsolatedVertex { index });
    }
    let a = w.map_values(|i, j, v| v / (degrees[i] * degrees[j]).sqrt());
    Ok(AdjacencyMatrix { a, degrees })
}

/// Weight matrix followed by normalization.
pub fn build_adjacency(data: &DataSet, cfg: &GraphConfig) -> Result<AdjacencyMatrix> {
    normalize_adjacency(&build_weight_matrix(data, cfg)?)
}
