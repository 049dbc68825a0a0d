#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snmf_core::linalg::{DenseMatrix, SparseSymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(lo..hi))
}

/// `GᵀG + shift·I` for a random `(n+2)×n` matrix `G`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> DenseMatrix {
    let g = uniform(rng, n + 2, n, -1.0, 1.0);
    let mut m = g.gram();
    m.add_diagonal(shift);
    m
}

/// Symmetric nonnegative matrix with roughly `density` of the off-diagonal pairs set.
pub fn random_sparse(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SparseSymMatrix {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < density {
                pairs.push((i, j, rng.random_range(0.01..1.0)));
            }
        }
    }
    SparseSymMatrix::from_pairs(n, pairs).unwrap()
}

/// `A = L*·L*ᵀ` for the `n×k` block indicator `L*`.
pub fn planted(n: usize, k: usize) -> (SparseSymMatrix, DenseMatrix) {
    let l = snmf_core::oracle::block_indicator(n, k);
    let a = SparseSymMatrix::from_dense(&l.matmul(&l.transpose()).unwrap()).unwrap();
    (a, l)
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}
