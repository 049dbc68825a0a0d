use crate::error::{dims, Error, Result};
use crate::linalg::DenseMatrix;

pub const POWER_MAX_ITER: usize = 10_000;
/// Stop once `‖Mv − θv‖ ≤ tol·θ` for the Rayleigh quotient `θ`.
const RESIDUAL_TOL: f64 = 1e-12;

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power iteration.
///
/// Starts from the normalized all-ones vector. If that start is annihilated
/// (it is orthogonal to the whole range), a second deterministic start is tried.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: dims(m.rows(), m.cols()),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(0.0);
    }
    let ones = vec![1.0; n];
    let theta = power_iterate(m, ones)?;
    if theta > 0.0 || m.frobenius_norm() == 0.0 {
        return Ok(theta);
    }
    let fallback = (0..n).map(|i| 1.0 / (i + 1) as f64).collect();
    power_iterate(m, fallback)
}

fn power_iterate(m: &DenseMatrix, mut v: Vec<f64>) -> Result<f64> {
    let n = v.len();
    normalize(&mut v);
    let mut w = vec![0.0; n];
    let mut theta = 0.0;
    for _ in 0..POWER_MAX_ITER {
        matvec(m, &v, &mut w);
        theta = dot(&v, &w);
        if !theta.is_finite() || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("power iteration"));
        }
        let wn = dot(&w, &w).sqrt();
        if wn == 0.0 {
            return Ok(0.0);
        }
        let residual = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= RESIDUAL_TOL * theta.abs() {
            return Ok(theta);
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
    }
    Ok(theta)
}

fn matvec(m: &DenseMatrix, v: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = dot(m.row(i), v);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}
