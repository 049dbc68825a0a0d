mod common;

use common::*;
use proptest::prelude::*;
use snmf_core::linalg::*;
use snmf_core::oracle::{gauss_jordan_inverse, jacobi_max_eigenvalue};
use snmf_core::Error;

#[test]
fn cholesky_examples() {
    let c = cholesky_factor(&DenseMatrix::identity(3)).unwrap();
    assert_eq!(*c.lower(), DenseMatrix::identity(3));

    let m = DenseMatrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]);
    let c = cholesky_factor(&m).unwrap();
    let want = DenseMatrix::from_rows(&[[2.0, 0.0], [1.0, 2f64.sqrt()]]);
    assert!(c.lower().distance(&want) < 1e-15);
    assert!(c.reconstruct().distance(&m) < 1e-12);
    let s = cholesky_solve(&c, &m).unwrap();
    assert!(s.distance(&DenseMatrix::identity(2)) < 1e-12);

    let bad = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
    assert!(matches!(cholesky_factor(&bad), Err(Error::NotPositiveDefinite { .. })));
}

#[test]
fn cholesky_solve_matches_explicit_inverse() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let m = random_spd(&mut r, 5, 0.1);
        let b = uniform(&mut r, 5, 3, -2.0, 2.0);
        let s = cholesky_solve(&cholesky_factor(&m).unwrap(), &b).unwrap();
        let oracle = gauss_jordan_inverse(&m).unwrap().matmul(&b).unwrap();
        assert!(s.distance(&oracle) <= 1e-10 * oracle.frobenius_norm(), "seed {seed}");
    }
}

#[test]
fn cholesky_solve_dimension_mismatch() {
    let c = cholesky_factor(&DenseMatrix::identity(3)).unwrap();
    assert!(matches!(
        cholesky_solve(&c, &DenseMatrix::zeros(2, 2)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn spectral_norm_matches_jacobi() {
    for seed in 0..40 {
        let mut r = rng(100 + seed);
        let n = 1 + (seed as usize % 20);
        let m = random_spd(&mut r, n, 0.0);
        let got = spectral_norm(&m).unwrap();
        let want = jacobi_max_eigenvalue(&m);
        assert!(rel_err(got, want) < 1e-8, "n {n}: {got} vs {want}");
    }
}

#[test]
fn sparse_examples() {
    let mut r = rng(7);
    let d = uniform(&mut r, 8, 2, -1.0, 1.0);
    assert_eq!(sparse_dense_mul(&SparseSymMatrix::zeros(8), &d).unwrap(), DenseMatrix::zeros(8, 2));
    assert_eq!(sparse_dense_mul(&SparseSymMatrix::identity(8), &d).unwrap(), d);
    let a = random_sparse(&mut r, 8, 0.3);
    let got = sparse_dense_mul(&a, &d).unwrap();
    let want = a.to_dense().matmul(&d).unwrap();
    assert!(got.distance(&want) < 1e-12);
    assert!(sparse_dense_mul(&a, &DenseMatrix::zeros(7, 2)).is_err());
}

fn spd_strategy() -> impl Strategy<Value = DenseMatrix> {
    (1usize..8, any::<u64>()).prop_map(|(n, seed)| random_spd(&mut rng(seed), n, 1e-3))
}

proptest! {
    #[test]
    fn cholesky_reconstructs_and_solves(m in spd_strategy(), seed in any::<u64>()) {
        let c = cholesky_factor(&m).unwrap();
        prop_assert!(c.reconstruct().distance(&m) / m.frobenius_norm() < 1e-10);
        for i in 0..c.order() {
            prop_assert!(c.lower()[(i, i)] > 0.0);
            for j in (i + 1)..c.order() {
                prop_assert_eq!(c.lower()[(i, j)], 0.0);
            }
        }
        let b = uniform(&mut rng(seed), m.rows(), 3, -1.0, 1.0);
        let s = cholesky_solve(&c, &b).unwrap();
        let resid = m.matmul(&s).unwrap().distance(&b) / b.frobenius_norm();
        prop_assert!(resid < 1e-10, "residual {}", resid);
    }

    #[test]
    fn spectral_norm_bounds_rayleigh_quotients(m in spd_strategy(), seed in any::<u64>()) {
        let s = spectral_norm(&m).unwrap();
        let v = uniform(&mut rng(seed), m.rows(), 1, -1.0, 1.0);
        let mv = m.matmul(&v).unwrap();
        let rq = v.dot(&mv) / v.dot(&v);
        prop_assert!(s >= rq * (1.0 - 1e-12));
    }

    #[test]
    fn pos_part_is_idempotent(rows in 0usize..6, cols in 0usize..6, seed in any::<u64>()) {
        let m = uniform(&mut rng(seed), rows, cols, -3.0, 3.0);
        let p = pos_part(&m);
        prop_assert!(p.as_slice().iter().all(|&v| v >= 0.0));
        prop_assert_eq!(pos_part(&p), p.clone());
        for (o, q) in m.as_slice().iter().zip(p.as_slice()) {
            prop_assert_eq!(*q, o.max(0.0));
        }
    }

    #[test]
    fn sparse_product_exact_on_integers(n in 1usize..12, k in 1usize..4, seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i..n {
                if r.random::<f64>() < 0.4 {
                    pairs.push((i, j, r.random_range(1..10) as f64));
                }
            }
        }
        let a = SparseSymMatrix::from_pairs(n, pairs).unwrap();
        let d = DenseMatrix::from_fn(n, k, |_, _| r.random_range(-9..10) as f64);
        prop_assert_eq!(sparse_dense_mul(&a, &d).unwrap(), a.to_dense().matmul(&d).unwrap());
    }
}
