//! Per-iteration flop count of the ADMM solver and a matching wall-clock probe.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::admm::{AdmmConfig, AdmmSolver};
use crate::error::Result;
use crate::factor::FactorMatrix;
use crate::linalg::SparseSymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub n: usize,
    pub k: usize,
    /// Nonzeros per row assumed by the model, `⌊log₂ n⌋ + 1`.
    pub q: usize,
    /// `(2/3)K³ + 6nK² + 4(n log₂ n)K + 22nK`
    pub flops_admm: f64,
    /// `(1/3)K³ + 3nK² + 2(n log₂ n)K + 5nK`
    pub flops_per_update_split: f64,
    /// `2nK(3K + 2 log₂ n)`
    pub approx_flops: f64,
}

/// Evaluates the flop model with a real-valued `log₂ n`.
pub fn flops_admm(n: usize, k: usize) -> CostEstimate {
    let nf = n as f64;
    let kf = k as f64;
    let lg = nf.log2();
    CostEstimate {
        n,
        k,
        q: if n == 0 { 0 } else { n.ilog2() as usize + 1 },
        flops_admm: 2.0 / 3.0 * kf.powi(3) + 6.0 * nf * kf * kf + 4.0 * nf * lg * kf + 22.0 * nf * kf,
        flops_per_update_split: kf.powi(3) / 3.0 + 3.0 * nf * kf * kf + 2.0 * nf * lg * kf + 5.0 * nf * kf,
        approx_flops: 2.0 * nf * kf * (3.0 * kf + 2.0 * lg),
    }
}

/// Mean wall time of one ADMM iteration over `iterations` iterations from `init`.
///
/// Uses a monotonic clock and covers only the iterations themselves.
pub fn time_admm_iteration(
    a: &SparseSymMatrix,
    k: usize,
    cfg: &AdmmConfig,
    init: Option<&FactorMatrix>,
    iterations: usize,
) -> Result<Duration> {
    let mut solver = AdmmSolver::new(a, k, *cfg, init)?;
    let iterations = iterations.max(1);
    let start = Instant::now();
    for _ in 0..iterations {
        solver.iterate()?;
    }
    Ok(start.elapsed() / iterations as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_points() {
        let c = flops_admm(2, 1);
        assert!((c.flops_admm - (2.0 / 3.0 + 12.0 + 8.0 + 44.0)).abs() < 1e-9);
        assert!((c.flops_admm - 64.667).abs() < 1e-3);
        let c = flops_admm(1024, 1);
        assert!((c.flops_admm - 69632.0 - 2.0 / 3.0).abs() < 1e-9);
        assert_eq!(c.q, 11);
        let c = flops_admm(1024, 4);
        assert!((c.approx_flops - 262144.0).abs() < 1e-9);
        assert!((c.flops_admm - (128.0 / 3.0 + 98304.0 + 163840.0 + 90112.0)).abs() < 1e-9);
    }

    #[test]
    fn split_update_is_roughly_half() {
        // two split updates plus 6nK for L and 3nK per multiplier
        for (n, k) in [(100, 3), (5000, 20)] {
            let c = flops_admm(n, k);
            let rest = 12.0 * (n * k) as f64;
            assert!((2.0 * c.flops_per_update_split + rest - c.flops_admm).abs() < 1e-6 * c.flops_admm);
        }
    }

    #[test]
    fn doubling_growth() {
        for k in [1, 5, 20] {
            let mut n = 256;
            while n <= 1 << 20 {
                let r = flops_admm(2 * n, k).flops_admm / flops_admm(n, k).flops_admm;
                assert!(r > 2.0 && r < 2.5, "n={n} k={k} ratio={r}");
                n *= 2;
            }
        }
    }
}
