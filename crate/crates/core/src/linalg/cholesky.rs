use crate::error::{dims, Error, Result};
use crate::linalg::DenseMatrix;

/// Relative asymmetry accepted by [`cholesky_factor`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Lower-triangular `C` with `C·Cᵀ = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    lower: DenseMatrix,
}

impl CholeskyFactor {
    pub fn order(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.lower
    }

    /// `C·Cᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.order();
        DenseMatrix::from_fn(n, n, |i, j| {
            let m = i.min(j);
            (0..=m).map(|k| self.lower[(i, k)] * self.lower[(j, k)]).sum()
        })
    }

    /// Solves `x · M = row` for every row of `rhs` in place, i.e. `M·xᵀ = rowᵀ`.
    ///
    /// Each row goes through one forward and one backward substitution.
    pub fn solve_rows_in_place(&self, rhs: &mut DenseMatrix) -> Result<()> {
        let n = self.order();
        if rhs.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} columns"),
                found: format!("{} columns", rhs.cols()),
            });
        }
        let c = self.lower.as_slice();
        for r in 0..rhs.rows() {
            let x = rhs.row_mut(r);
            for i in 0..n {
                let ci = &c[i * n..i * n + i];
                let s: f64 = ci.iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
                x[i] = (x[i] - s) / c[i * n + i];
            }
            for i in (0..n).rev() {
                let mut s = 0.0;
                for k in (i + 1)..n {
                    s += c[k * n + i] * x[k];
                }
                x[i] = (x[i] - s) / c[i * n + i];
            }
        }
        Ok(())
    }
}

/// Cholesky factorization of a symmetric positive definite matrix.
pub fn cholesky_factor(m: &DenseMatrix) -> Result<CholeskyFactor> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: dims(m.rows(), m.cols()),
        });
    }
    if m.asymmetry() > SYMMETRY_TOLERANCE {
        return Err(Error::InvalidMatrix("matrix is not symmetric".into()));
    }
    let n = m.rows();
    let mut c = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= c[(j, k)] * c[(j, k)];
        }
        if !d.is_finite() {
            return Err(Error::NonFinite("cholesky pivot"));
        }
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let djj = d.sqrt();
        c[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= c[(i, k)] * c[(j, k)];
            }
            c[(i, j)] = s / djj;
        }
    }
    Ok(CholeskyFactor { lower: c })
}

/// Solves `(C·Cᵀ)·S = b` by forward then backward substitution.
pub fn cholesky_solve(c: &CholeskyFactor, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = c.order();
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n} rows"),
            found: format!("{} rows", b.rows()),
        });
    }
    let m = b.cols();
    let l = c.lower();
    let mut s = b.clone();
    // forward: C·J = b
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            if lik == 0.0 {
                continue;
            }
            for col in 0..m {
                let v = s[(k, col)];
                s[(i, col)] -= lik * v;
            }
        }
        let d = l[(i, i)];
        s.row_mut(i).iter_mut().for_each(|v| *v /= d);
    }
    // backward: Cᵀ·S = J
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let lki = l[(k, i)];
            if lki == 0.0 {
                continue;
            }
            for col in 0..m {
                let v = s[(k, col)];
                s[(i, col)] -= lki * v;
            }
        }
        let d = l[(i, i)];
        s.row_mut(i).iter_mut().for_each(|v| *v /= d);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.distance(b) / b.frobenius_norm()
    }

    #[test]
    fn identity_factor() {
        let c = cholesky_factor(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(c.lower(), &DenseMatrix::identity(3));
    }

    #[test]
    fn two_by_two_factor() {
        let m = DenseMatrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]);
        let c = cholesky_factor(&m).unwrap();
        let expected = DenseMatrix::from_rows(&[[2.0, 0.0], [1.0, 2f64.sqrt()]]);
        assert!(c.lower().distance(&expected) < 1e-15);
        assert!(rel_err(&c.reconstruct(), &m) < 1e-12);
    }

    #[test]
    fn indefinite_is_rejected() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
        assert!(matches!(
            cholesky_factor(&m),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        assert!(matches!(
            cholesky_factor(&DenseMatrix::zeros(2, 2)),
            Err(Error::NotPositiveDefinite { index: 0, .. })
        ));
    }

    #[test]
    fn asymmetric_and_nonsquare_rejected() {
        let m = DenseMatrix::from_rows(&[[4.0, 2.0], [2.1, 3.0]]);
        assert!(matches!(cholesky_factor(&m), Err(Error::InvalidMatrix(_))));
        assert!(matches!(
            cholesky_factor(&DenseMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_identity_and_self() {
        let b = DenseMatrix::from_rows(&[[1.0, -2.0], [3.5, 0.25], [7.0, 1.0]]);
        let c = cholesky_factor(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(cholesky_solve(&c, &b).unwrap(), b);

        let m = DenseMatrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]);
        let c = cholesky_factor(&m).unwrap();
        let s = cholesky_solve(&c, &m).unwrap();
        assert!(s.distance(&DenseMatrix::identity(2)) < 1e-14);
        assert!(matches!(
            cholesky_solve(&c, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_rows_matches_column_solve() {
        let m = DenseMatrix::from_rows(&[[5.0, 1.0, 0.5], [1.0, 4.0, 0.2], [0.5, 0.2, 3.0]]);
        let c = cholesky_factor(&m).unwrap();
        let rhs = DenseMatrix::from_fn(4, 3, |i, j| (i as f64) - 0.7 * j as f64);
        let mut rows = rhs.clone();
        c.solve_rows_in_place(&mut rows).unwrap();
        let cols = cholesky_solve(&c, &rhs.transpose()).unwrap().transpose();
        assert!(rows.distance(&cols) < 1e-13);
        // x · M reproduces the right-hand side
        let back = rows.matmul(&m).unwrap();
        assert!(rel_err(&back, &rhs) < 1e-13);
    }
}
