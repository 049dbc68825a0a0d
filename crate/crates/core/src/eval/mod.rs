//! Cluster assignment, accuracy under the best label mapping, and synthetic data.

mod munkres;
mod synthetic;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

pub use munkres::min_cost_assignment;
pub use synthetic::{generate, SyntheticKind, SyntheticSpec, CENTER_SPACING};

/// Largest number of distinct labels on either side of [`best_mapping`].
pub const MAX_LABELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    /// Number of clusters; every label is below it.
    pub k: usize,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidConfig(format!("label {bad} is not below k = {k}")));
        }
        Ok(Self { labels, k })
    }

    /// Wraps arbitrary labels, with `k` one past the largest.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Self { labels, k }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Row-wise argmax; ties go to the lowest column.
pub fn assign_clusters(l: &DenseMatrix) -> ClusterAssignment {
    let k = l.cols();
    let labels = (0..l.rows())
        .map(|i| {
            let row = l.row(i);
            let mut best = 0;
            for (j, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect();
    ClusterAssignment { labels, k }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    /// Percentage of points whose mapped cluster equals their gold class.
    pub ac: f64,
    /// `(cluster, class)` pairs of the optimal mapping.
    pub mapping: Vec<(usize, usize)>,
    pub matched: usize,
    pub n: usize,
}

/// Accuracy under the cluster→class bijection maximizing agreement.
///
/// The overlap-count matrix is padded to square with zero rows or columns when
/// the label counts differ, then solved as a minimum-cost assignment on the
/// negated counts.
pub fn best_mapping(pred: &ClusterAssignment, gold: &[usize]) -> Result<AccuracyReport> {
    if pred.len() != gold.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: gold.len(),
        });
    }
    let classes: BTreeMap<usize, usize> = {
        let mut distinct: Vec<usize> = gold.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.into_iter().enumerate().map(|(i, g)| (g, i)).collect()
    };
    let kp = pred.k;
    let kg = classes.len();
    if kp > MAX_LABELS || kg > MAX_LABELS {
        return Err(Error::TooManyLabels(kp.max(kg)));
    }
    let size = kp.max(kg);
    let mut counts = vec![0i64; size * size];
    for (&c, g) in pred.labels.iter().zip(gold) {
        counts[c * size + classes[g]] += 1;
    }
    let negated: Vec<i64> = counts.iter().map(|&c| -c).collect();
    let assignment = min_cost_assignment(&negated, size);

    let class_of: Vec<usize> = classes.keys().copied().collect();
    let mut mapping = Vec::new();
    let mut matched = 0usize;
    for (c, &g) in assignment.iter().enumerate() {
        if c < kp && g < kg {
            mapping.push((c, class_of[g]));
            matched += counts[c * size + g] as usize;
        }
    }
    let n = gold.len();
    let ac = if n == 0 { 0.0 } else { 100.0 * matched as f64 / n as f64 };
    Ok(AccuracyReport {
        ac,
        mapping,
        matched,
        n,
    })
}
