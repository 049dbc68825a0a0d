//! Shared fixtures for the benchmarks.

use snmf_core::eval::{generate, SyntheticKind, SyntheticSpec};
use snmf_core::graph::{build_adjacency, DataSet, GraphConfig};
use snmf_core::{random_init, FactorMatrix, SparseSymMatrix};

/// Well-separated blobs with `n / k` points per cluster.
pub fn blob_data(n: usize, k: usize, seed: u64) -> DataSet {
    generate(&SyntheticSpec::new(SyntheticKind::Blobs, k, n / k, 0.05, seed)).expect("valid blob spec")
}

/// Normalized neighbor graph of [`blob_data`] with a seeded start.
pub fn blob_problem(n: usize, k: usize, seed: u64) -> (SparseSymMatrix, FactorMatrix) {
    let a = build_adjacency(&blob_data(n, k, seed), &GraphConfig::default())
        .expect("blob graph")
        .a;
    let init = random_init(&a, k, seed);
    (a, init)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let (a, init) = blob_problem(120, 4, 1);
        assert_eq!(a.order(), 120);
        assert_eq!(init.shape(), (120, 4));
    }
}
