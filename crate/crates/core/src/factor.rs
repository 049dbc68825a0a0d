//! Nonnegative factor matrices, seeded initialization and the two objectives.

use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{pos_part_in_place, DenseMatrix, SparseSymMatrix};

/// Dense `n×K` matrix with every entry `≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix(DenseMatrix);

impl FactorMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        if m.as_slice().iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidMatrix("factor has negative entries".into()));
        }
        Ok(Self(m))
    }

    /// Projects `m` onto the nonnegative orthant.
    pub fn from_pos_part(mut m: DenseMatrix) -> Self {
        pos_part_in_place(&mut m);
        Self(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DenseMatrix::zeros(rows, cols))
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.0
    }
}

impl Deref for FactorMatrix {
    type Target = DenseMatrix;

    fn deref(&self) -> &DenseMatrix {
        &self.0
    }
}

/// Seeded random start: i.i.d. uniform `[0, 1)` entries scaled by `√(mean(A)/K)`.
pub fn random_init(a: &SparseSymMatrix, k: usize, seed: u64) -> FactorMatrix {
    let n = a.order();
    let mean = if n == 0 { 0.0 } else { a.sum() / (n as f64 * n as f64) };
    let scale = if k == 0 { 0.0 } else { (mean / k as f64).sqrt() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FactorMatrix(DenseMatrix::from_fn(n, k, |_, _| rng.random::<f64>() * scale))
}

/// `‖A − L·Zᵀ‖²_F` evaluated without forming the dense product.
pub fn factorization_error(a: &SparseSymMatrix, l: &DenseMatrix, z: &DenseMatrix) -> f64 {
    let az = crate::linalg::sparse_dense_mul(a, z).expect("factor shape matches adjacency");
    let cross = az.dot(l);
    let quad = l.gram().dot(&z.gram());
    let a2 = a.frobenius_norm().powi(2);
    (a2 - 2.0 * cross + quad).max(0.0)
}

/// Symmetric objective `‖A − L·Lᵀ‖²_F`.
pub fn snmf_objective(a: &SparseSymMatrix, l: &DenseMatrix) -> f64 {
    factorization_error(a, l, l)
}

/// Penalized objective `‖A − L·Zᵀ‖²_F + ρ‖L − Z‖²_F`.
pub fn qpm_objective(a: &SparseSymMatrix, l: &DenseMatrix, z: &DenseMatrix, rho: f64) -> f64 {
    factorization_error(a, l, z) + rho * l.distance(z).powi(2)
}

/// `‖new − old‖_F / ‖old‖_F`, with `0/0 = 0` and `x/0 = ∞` for `x > 0`.
pub fn relative_change(new: &DenseMatrix, old: &DenseMatrix) -> f64 {
    let num = new.distance(old);
    let den = old.frobenius_norm();
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub(crate) fn check_k(a: &SparseSymMatrix, k: usize) -> Result<()> {
    let n = a.order();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(())
}

pub(crate) fn check_init(a: &SparseSymMatrix, k: usize, init: &FactorMatrix) -> Result<()> {
    if init.shape() != (a.order(), k) {
        return Err(Error::DimensionMismatch {
            expected: crate::error::dims(a.order(), k),
            found: crate::error::dims(init.rows(), init.cols()),
        });
    }
    if !init.is_finite() {
        return Err(Error::NonFinite("initial factor"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_objective(a: &DenseMatrix, l: &DenseMatrix, z: &DenseMatrix) -> f64 {
        let lz = l.matmul(&z.transpose()).unwrap();
        a.distance(&lz).powi(2)
    }

    #[test]
    fn sparse_objective_matches_dense() {
        let a = SparseSymMatrix::from_pairs(4, [(0, 1, 0.5), (1, 2, 2.0), (3, 3, 1.0), (0, 3, 0.25)])
            .unwrap();
        let l = DenseMatrix::from_fn(4, 2, |i, j| 0.1 + 0.3 * i as f64 - 0.2 * j as f64);
        let z = DenseMatrix::from_fn(4, 2, |i, j| 0.4 * j as f64 + 0.05 * i as f64);
        let expected = dense_objective(&a.to_dense(), &l, &z);
        assert!((factorization_error(&a, &l, &z) - expected).abs() < 1e-12);
        let sym = dense_objective(&a.to_dense(), &l, &l);
        assert!((snmf_objective(&a, &l) - sym).abs() < 1e-12);
        let q = qpm_objective(&a, &l, &z, 0.7);
        assert!((q - expected - 0.7 * l.distance(&z).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn relative_change_guards() {
        let z = DenseMatrix::zeros(2, 2);
        let o = DenseMatrix::identity(2);
        assert_eq!(relative_change(&z, &z), 0.0);
        assert_eq!(relative_change(&o, &z), f64::INFINITY);
        assert!((relative_change(&z, &o) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn init_is_seeded_and_scaled() {
        let a = SparseSymMatrix::from_pairs(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let x = random_init(&a, 2, 9);
        let y = random_init(&a, 2, 9);
        let z = random_init(&a, 2, 10);
        assert_eq!(x, y);
        assert_ne!(x, z);
        let bound = (6.0 / 9.0 / 2.0f64).sqrt();
        assert!(x.as_slice().iter().all(|&v| (0.0..bound).contains(&v)));
    }

    #[test]
    fn factor_rejects_negative() {
        assert!(FactorMatrix::new(DenseMatrix::from_rows(&[[0.0, -1.0]])).is_err());
        let f = FactorMatrix::from_pos_part(DenseMatrix::from_rows(&[[2.0, -1.0]]));
        assert_eq!(f.as_slice(), &[2.0, 0.0]);
    }

    #[test]
    fn k_bounds() {
        let a = SparseSymMatrix::identity(3);
        assert!(check_k(&a, 0).is_err());
        assert!(check_k(&a, 3).is_err());
        assert!(check_k(&a, 2).is_ok());
    }
}
