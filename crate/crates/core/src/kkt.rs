//! KKT residuals of the double-split problem.
//!
//! With the nonnegativity multiplier eliminated (`Ω = −(Λ + Γ)`), a point is
//! KKT exactly when
//!
//! ```text
//! (X·Yᵀ − A)·Y − Λ = 0      X − L = 0      L ≥ 0
//! (Y·Xᵀ − A)·X − Γ = 0      Y − L = 0      Λ + Γ ≥ 0      ⟨Λ + Γ, L⟩ = 0
//! ```
//!
//! Each condition is measured in the Frobenius norm (the last as an absolute
//! inner product).

use serde::{Deserialize, Serialize};

use crate::admm::AdmmState;
use crate::error::{Error, Result};
use crate::linalg::{sparse_dense_mul, DenseMatrix, SparseSymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktResidual {
    /// `‖(X·Yᵀ − A)·Y − Λ‖_F`
    pub r_stationarity_x: f64,
    /// `‖(Y·Xᵀ − A)·X − Γ‖_F`
    pub r_stationarity_y: f64,
    /// `‖X − L‖_F`
    pub r_primal_x: f64,
    /// `‖Y − L‖_F`
    pub r_primal_y: f64,
    /// `‖[−L]⁺‖_F`
    pub r_nonneg: f64,
    /// `‖[−(Λ + Γ)]⁺‖_F`
    pub r_dual: f64,
    /// `|⟨Λ + Γ, L⟩|`
    pub r_comp: f64,
    /// `max(1, ‖A‖_F)`
    pub scale: f64,
    /// Largest component divided by `scale`.
    pub norm: f64,
}

impl KktResidual {
    pub fn components(&self) -> [(&'static str, f64); 7] {
        [
            ("r_stationarity_x", self.r_stationarity_x),
            ("r_stationarity_y", self.r_stationarity_y),
            ("r_primal_x", self.r_primal_x),
            ("r_primal_y", self.r_primal_y),
            ("r_nonneg", self.r_nonneg),
            ("r_dual", self.r_dual),
            ("r_comp", self.r_comp),
        ]
    }

    pub fn max_component(&self) -> f64 {
        self.components().iter().map(|c| c.1).fold(0.0, f64::max)
    }
}

/// `(P·Qᵀ − A)·Q − D = P·(QᵀQ) − A·Q − D`
fn stationarity(a: &SparseSymMatrix, p: &DenseMatrix, q: &DenseMatrix, d: &DenseMatrix) -> Result<f64> {
    let mut r = p.matmul(&q.gram())?;
    let aq = sparse_dense_mul(a, q)?;
    r.axpy(-1.0, &aq);
    r.axpy(-1.0, d);
    Ok(r.frobenius_norm())
}

fn neg_part_norm(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|v| if v < 0.0 { v * v } else { 0.0 }).sum::<f64>().sqrt()
}

pub fn kkt_residual(a: &SparseSymMatrix, state: &AdmmState) -> Result<KktResidual> {
    state.check_shapes()?;
    kkt_residual_of(
        a,
        &state.x,
        &state.y,
        state.l.as_dense(),
        &state.lambda,
        &state.gamma,
    )
}

/// Same as [`kkt_residual`] for loose matrices; `l` may hold negative entries here.
pub fn kkt_residual_of(
    a: &SparseSymMatrix,
    x: &DenseMatrix,
    y: &DenseMatrix,
    l: &DenseMatrix,
    lambda: &DenseMatrix,
    gamma: &DenseMatrix,
) -> Result<KktResidual> {
    for m in [x, y, lambda, gamma] {
        l.same_shape(m)?;
    }
    if l.rows() != a.order() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows", a.order()),
            found: format!("{} rows", l.rows()),
        });
    }
    let dual_sum = lambda.as_slice().iter().zip(gamma.as_slice()).map(|(a, b)| a + b);
    let r = KktResidual {
        r_stationarity_x: stationarity(a, x, y, lambda)?,
        r_stationarity_y: stationarity(a, y, x, gamma)?,
        r_primal_x: x.distance(l),
        r_primal_y: y.distance(l),
        r_nonneg: neg_part_norm(l.as_slice().iter().copied()),
        r_dual: neg_part_norm(dual_sum.clone()),
        r_comp: dual_sum.zip(l.as_slice()).map(|(d, v)| d * v).sum::<f64>().abs(),
        scale: a.frobenius_norm().max(1.0),
        norm: 0.0,
    };
    Ok(KktResidual {
        norm: r.max_component() / r.scale,
        ..r
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted() -> (SparseSymMatrix, DenseMatrix) {
        let l = DenseMatrix::from_rows(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]);
        let a = SparseSymMatrix::from_dense(&l.matmul(&l.transpose()).unwrap()).unwrap();
        (a, l)
    }

    #[test]
    fn exact_points_have_zero_residual() {
        let (a, l) = planted();
        let z = DenseMatrix::zeros(4, 2);
        let r = kkt_residual_of(&a, &l, &l, &l, &z, &z).unwrap();
        assert_eq!(r.max_component(), 0.0);
        let r = kkt_residual_of(&a, &z, &z, &z, &z, &z).unwrap();
        assert_eq!(r.norm, 0.0);
    }

    #[test]
    fn primal_perturbation() {
        let (a, l) = planted();
        let z = DenseMatrix::zeros(4, 2);
        let mut x = l.clone();
        x[(0, 0)] += 1e-3;
        let r = kkt_residual_of(&a, &x, &l, &l, &z, &z).unwrap();
        assert!((r.r_primal_x - 1e-3).abs() < 1e-15);
        assert_eq!(r.r_primal_y, 0.0);
        assert!(r.r_stationarity_x > 0.0 && r.r_stationarity_x < 1e-2);
        assert!(r.r_stationarity_y > 0.0 && r.r_stationarity_y < 1e-2);
    }

    #[test]
    fn sign_conditions() {
        let (a, l) = planted();
        let z = DenseMatrix::zeros(4, 2);
        let mut neg = l.clone();
        neg[(2, 0)] = -0.5;
        let r = kkt_residual_of(&a, &l, &l, &neg, &z, &z).unwrap();
        assert_eq!(r.r_nonneg, 0.5);

        let mut lam = z.clone();
        lam[(0, 1)] = -2.0;
        let r = kkt_residual_of(&a, &l, &l, &l, &lam, &z).unwrap();
        assert_eq!(r.r_dual, 2.0);
        // entry (0, 1) of L is zero, so complementarity still holds
        assert_eq!(r.r_comp, 0.0);
        lam[(0, 0)] = 3.0;
        let r = kkt_residual_of(&a, &l, &l, &l, &lam, &z).unwrap();
        assert_eq!(r.r_comp, 3.0);
    }

    #[test]
    fn norm_is_scaled_max() {
        let (a, l) = planted();
        let z = DenseMatrix::zeros(4, 2);
        let mut x = l.clone();
        x[(3, 1)] = 4.0;
        let r = kkt_residual_of(&a, &x, &l, &l, &z, &z).unwrap();
        assert_eq!(r.scale, a.frobenius_norm());
        assert_eq!(r.norm, r.max_component() / r.scale);
    }

    #[test]
    fn shape_errors() {
        let (a, l) = planted();
        let z = DenseMatrix::zeros(4, 3);
        assert!(kkt_residual_of(&a, &l, &l, &l, &z, &z).is_err());
        let small = DenseMatrix::zeros(3, 2);
        assert!(kkt_residual_of(&a, &small, &small, &small, &small, &small).is_err());
    }
}
