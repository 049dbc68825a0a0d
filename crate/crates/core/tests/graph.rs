mod common;

use common::*;
use proptest::prelude::*;
use snmf_core::graph::*;
use snmf_core::linalg::DenseMatrix;
use snmf_core::oracle::{dense_normalize, dense_weight_matrix};

fn random_data(seed: u64, n: usize, dim: usize) -> DataSet {
    DataSet::new(uniform(&mut rng(seed), n, dim, -5.0, 5.0), None).unwrap()
}

#[test]
fn builder_matches_quadratic_scan() {
    for (seed, n, dim) in [(1, 12, 1), (2, 40, 2), (3, 97, 3), (4, 200, 2), (5, 150, 5)] {
        let data = random_data(seed, n, dim);
        let cfg = GraphConfig::default();
        let w = build_weight_matrix(&data, &cfg).unwrap();
        let oracle = dense_weight_matrix(data.points(), cfg.p, w.q);
        assert_eq!(w.w.to_dense(), oracle, "n = {n}");
    }
}

#[test]
fn builder_matches_quadratic_scan_with_ties() {
    // integer grid: many equal distances
    let pts = DenseMatrix::from_fn(36, 2, |i, c| if c == 0 { (i % 6) as f64 } else { (i / 6) as f64 });
    let data = DataSet::new(pts, None).unwrap();
    for q in [1, 3, 4, 6] {
        let cfg = GraphConfig { p: 4, q_override: Some(q) };
        let w = build_weight_matrix(&data, &cfg).unwrap();
        assert_eq!(w.w.to_dense(), dense_weight_matrix(data.points(), 4, q), "q = {q}");
    }
}

#[test]
fn normalization_matches_dense_oracle() {
    use rand::Rng;
    let mut r = rng(11);
    // ring edges keep every vertex connected
    let mut pairs: Vec<(usize, usize, f64)> = (0..50).map(|i| (i, (i + 1) % 50, r.random_range(0.1..1.0))).collect();
    for i in 0..50 {
        for j in (i + 2)..50 {
            if r.random::<f64>() < 0.1 && !(i == 0 && j == 49) {
                pairs.push((i, j, r.random_range(0.01..1.0)));
            }
        }
    }
    let w = snmf_core::SparseSymMatrix::from_pairs(50, pairs).unwrap();
    let a = normalize_sparse(&w).unwrap();
    let oracle = dense_normalize(&w.to_dense());
    assert!(a.a.to_dense().distance(&oracle) < 1e-12);
}

#[test]
fn structural_invariants() {
    let data = random_data(21, 120, 2);
    let w = build_weight_matrix(&data, &GraphConfig::default()).unwrap();
    let dense = w.w.to_dense();
    for i in 0..data.len() {
        assert_eq!(dense[(i, i)], 0.0);
        assert!(w.w.row_nnz(i) >= w.q);
        for j in 0..data.len() {
            assert_eq!(dense[(i, j)], dense[(j, i)]);
            assert!((0.0..=1.0).contains(&dense[(i, j)]));
        }
    }
    let a = normalize_adjacency(&w).unwrap();
    for i in 0..data.len() {
        let (cols_w, _) = w.w.row(i);
        let (cols_a, vals_a) = a.a.row(i);
        assert_eq!(cols_w, cols_a);
        assert!(vals_a.iter().all(|&v| v > 0.0 && v <= 1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn permutation_equivariance(seed in any::<u64>(), n in 10usize..60) {
        use rand::seq::SliceRandom;
        let data = random_data(seed, n, 2);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng(seed ^ 0x5a5a));
        let moved = DenseMatrix::from_fn(n, 2, |i, c| data.points()[(perm[i], c)]);
        let moved = DataSet::new(moved, None).unwrap();
        let cfg = GraphConfig::default();
        let wa = build_weight_matrix(&data, &cfg).unwrap();
        let wb = build_weight_matrix(&moved, &cfg).unwrap();
        let a = normalize_adjacency(&wa).unwrap().a.to_dense();
        let b = normalize_adjacency(&wb).unwrap().a.to_dense();
        let (wa, wb) = (wa.w.to_dense(), wb.w.to_dense());
        for i in 0..n {
            for j in 0..n {
                // weights are exact; degrees are sums taken in a different order
                prop_assert_eq!(wb[(i, j)], wa[(perm[i], perm[j])]);
                prop_assert!((b[(i, j)] - a[(perm[i], perm[j])]).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric(seed in any::<u64>(), n in 10usize..80) {
        let a = build_adjacency(&random_data(seed, n, 3), &GraphConfig::default()).unwrap().a;
        let d = a.to_dense();
        prop_assert_eq!(d.transpose(), d);
    }
}
