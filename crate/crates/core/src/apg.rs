//! Alternating accelerated proximal gradient for the penalized split problem
//!
//! ```text
//! minimize ‖A − L·Zᵀ‖²_F + ρ‖L − Z‖²_F   subject to L, Z ≥ 0
//! ```
//!
//! Each outer iteration minimizes over `L` with `Z` fixed, then over `Z` with
//! `L` fixed, running an accelerated projected-gradient loop to its own
//! relative-change threshold in both cases.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{
    check_init, check_k, qpm_objective, random_init, relative_change, snmf_objective, FactorMatrix,
};
use crate::linalg::{pos_part_in_place, spectral_norm, DenseMatrix, SparseSymMatrix};
use crate::StopReason;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApgConfig {
    pub rho: f64,
    pub epsilon: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub seed: u64,
}

impl Default for ApgConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            epsilon: 1e-5,
            max_outer: 500,
            max_inner: 1000,
            seed: 0,
        }
    }
}

impl ApgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidConfig(format!("rho must be positive, got {}", self.rho)));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(Error::InvalidConfig("iteration caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// `1 / λ_max(G + ρI)`: the reciprocal Lipschitz constant of one block's gradient.
pub fn lipschitz_step(gram: &DenseMatrix, rho: f64) -> Result<f64> {
    let mut h = gram.clone();
    h.add_diagonal(rho);
    let lambda = spectral_norm(&h)?;
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::NonFinite("lipschitz constant"));
    }
    Ok(1.0 / lambda)
}

/// `(B·Fᵀ − A)·F + ρ(B − F)` for the free block `B` against the fixed block `F`.
///
/// This is half the gradient of `‖A − B·Fᵀ‖²_F + ρ‖B − F‖²_F`; the step size
/// absorbs the factor two.
pub fn block_gradient(
    a: &SparseSymMatrix,
    block: &DenseMatrix,
    fixed: &DenseMatrix,
    rho: f64,
) -> Result<DenseMatrix> {
    block.same_shape(fixed)?;
    let mut g = block.matmul(&fixed.gram())?;
    g.axpy(-1.0, &crate::linalg::sparse_dense_mul(a, fixed)?);
    g.axpy(rho, block);
    g.axpy(-rho, fixed);
    Ok(g)
}

/// The two matrices reused by every inner step of one block loop:
/// `(1 − αρ)I − α·FᵀF` and `α(A + ρI)F` for the fixed block `F`.
#[derive(Debug, Clone)]
pub struct BlockCache {
    affine: DenseMatrix,
    offset: DenseMatrix,
    step: f64,
}

impl BlockCache {
    pub fn new(a: &SparseSymMatrix, fixed: &DenseMatrix, rho: f64, step: f64) -> Result<Self> {
        if fixed.rows() != a.order() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", a.order()),
                found: format!("{} rows", fixed.rows()),
            });
        }
        let mut affine = fixed.gram();
        affine.scale(-step);
        affine.add_diagonal(1.0 - step * rho);
        let mut offset = crate::linalg::sparse_dense_mul(a, fixed)?;
        offset.axpy(rho, fixed);
        offset.scale(step);
        Ok(Self {
            affine,
            offset,
            step,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

/// Iterate, momentum and step counter of one block's accelerated loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ApgBlockState {
    pub iterate: FactorMatrix,
    pub momentum: DenseMatrix,
    pub counter: usize,
}

impl ApgBlockState {
    /// Fresh loop: momentum equal to the iterate, counter zero.
    pub fn start(iterate: FactorMatrix) -> Self {
        Self {
            momentum: iterate.as_dense().clone(),
            iterate,
            counter: 0,
        }
    }

    /// One accelerated projected step using a prepared cache.
    pub fn advance(&self, cache: &BlockCache) -> Result<Self> {
        if self.momentum.shape() != cache.offset.shape() {
            return Err(Error::DimensionMismatch {
                expected: crate::error::dims(cache.offset.rows(), cache.offset.cols()),
                found: crate::error::dims(self.momentum.rows(), self.momentum.cols()),
            });
        }
        let mut next = DenseMatrix::zeros(self.momentum.rows(), self.momentum.cols());
        self.momentum.matmul_into(&cache.affine, &mut next);
        next.axpy(1.0, &cache.offset);
        pos_part_in_place(&mut next);
        if !next.is_finite() {
            return Err(Error::NonFinite("apg block step"));
        }
        let i = self.counter as f64;
        let beta = i / (i + 3.0);
        let mut momentum = next.clone();
        for ((m, &x), &x_old) in momentum
            .as_mut_slice()
            .iter_mut()
            .zip(next.as_slice())
            .zip(self.iterate.as_slice())
        {
            *m += beta * (x - x_old);
        }
        Ok(Self {
            iterate: FactorMatrix::from_pos_part(next),
            momentum,
            counter: self.counter + 1,
        })
    }
}

/// One accelerated step of a block against `fixed`, building the cache on the spot.
pub fn apg_block_update(
    state: &ApgBlockState,
    fixed: &DenseMatrix,
    a: &SparseSymMatrix,
    rho: f64,
    step: f64,
) -> Result<ApgBlockState> {
    state.advance(&BlockCache::new(a, fixed, rho, step)?)
}

/// Runs a block loop from `start` until the relative change drops to `epsilon`
/// or `max_inner` steps were taken. Returns the final iterate and the step count.
pub fn run_block(
    start: &FactorMatrix,
    cache: &BlockCache,
    epsilon: f64,
    max_inner: usize,
) -> Result<(FactorMatrix, usize)> {
    let mut state = ApgBlockState::start(start.clone());
    loop {
        let next = state.advance(cache)?;
        let change = relative_change(&next.iterate, &state.iterate);
        state = next;
        if change <= epsilon || state.counter >= max_inner {
            return Ok((state.iterate, state.counter));
        }
    }
}

/// Objective values around one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterStep {
    pub before: f64,
    pub after_l: f64,
    pub after_z: f64,
    pub inner_l: usize,
    pub inner_z: usize,
    pub criterion: f64,
}

/// Step-by-step driver of the alternating solver.
#[derive(Debug, Clone)]
pub struct ApgSolver<'a> {
    a: &'a SparseSymMatrix,
    cfg: ApgConfig,
    l: FactorMatrix,
    z: FactorMatrix,
    objective: f64,
    outer: usize,
    inner_total: usize,
}

impl<'a> ApgSolver<'a> {
    /// Starts from `L⁰ = Z⁰ = init`, or a seeded random start when `init` is `None`.
    pub fn new(
        a: &'a SparseSymMatrix,
        k: usize,
        cfg: ApgConfig,
        init: Option<&FactorMatrix>,
    ) -> Result<Self> {
        cfg.validate()?;
        check_k(a, k)?;
        let l = match init {
            Some(init) => {
                check_init(a, k, init)?;
                init.clone()
            }
            None => random_init(a, k, cfg.seed),
        };
        Ok(Self::from_blocks(a, cfg, l.clone(), l))
    }

    /// Starts from explicit `L` and `Z` blocks; shapes are trusted.
    pub fn from_blocks(a: &'a SparseSymMatrix, cfg: ApgConfig, l: FactorMatrix, z: FactorMatrix) -> Self {
        let objective = qpm_objective(a, &l, &z, cfg.rho);
        Self {
            a,
            cfg,
            l,
            z,
            objective,
            outer: 0,
            inner_total: 0,
        }
    }

    pub fn l(&self) -> &FactorMatrix {
        &self.l
    }

    pub fn z(&self) -> &FactorMatrix {
        &self.z
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn outer_iterations(&self) -> usize {
        self.outer
    }

    /// Runs the `L` loop then the `Z` loop once, each with a freshly computed step size.
    pub fn outer_step(&mut self) -> Result<OuterStep> {
        let rho = self.cfg.rho;
        let before = self.objective;

        let alpha = lipschitz_step(&self.z.gram(), rho)?;
        let cache = BlockCache::new(self.a, &self.z, rho, alpha)?;
        let (l_new, inner_l) = run_block(&self.l, &cache, self.cfg.epsilon, self.cfg.max_inner)?;
        let after_l = qpm_objective(self.a, &l_new, &self.z, rho);

        let beta = lipschitz_step(&l_new.gram(), rho)?;
        let cache = BlockCache::new(self.a, &l_new, rho, beta)?;
        let (z_new, inner_z) = run_block(&self.z, &cache, self.cfg.epsilon, self.cfg.max_inner)?;
        let after_z = qpm_objective(self.a, &l_new, &z_new, rho);
        if !after_z.is_finite() {
            return Err(Error::NonFinite("apg objective"));
        }

        let criterion = relative_change(&l_new, &self.l) + relative_change(&z_new, &self.z);
        self.l = l_new;
        self.z = z_new;
        self.objective = after_z;
        self.outer += 1;
        self.inner_total += inner_l + inner_z;
        Ok(OuterStep {
            before,
            after_l,
            after_z,
            inner_l,
            inner_z,
            criterion,
        })
    }

    pub fn run(mut self) -> Result<ApgResult> {
        let start = Instant::now();
        let mut trace = Vec::new();
        let mut stop = StopReason::MaxIterations;
        while self.outer < self.cfg.max_outer {
            let step = self.outer_step()?;
            trace.push(step.after_z);
            if step.criterion <= self.cfg.epsilon {
                stop = StopReason::Converged;
                break;
            }
        }
        let wall_time = start.elapsed();
        let l_norm = self.l.frobenius_norm();
        let split_gap = if l_norm > 0.0 {
            self.l.distance(&self.z) / l_norm
        } else {
            relative_change(&self.z, &self.l)
        };
        Ok(ApgResult {
            snmf_objective: snmf_objective(self.a, &self.l),
            l: self.l,
            z: self.z,
            outer_iterations: self.outer,
            inner_iterations: self.inner_total,
            trace,
            split_gap,
            stop,
            wall_time,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ApgResult {
    pub l: FactorMatrix,
    /// The point-assignment output.
    pub z: FactorMatrix,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    /// Penalized objective after every outer iteration.
    pub trace: Vec<f64>,
    /// `‖L − Z‖_F / ‖L‖_F`.
    pub split_gap: f64,
    /// `‖A − L·Lᵀ‖²_F` at exit.
    pub snmf_objective: f64,
    pub stop: StopReason,
    pub wall_time: Duration,
}

impl ApgResult {
    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged
    }
}

/// Solves the penalized problem from `init` (or a seeded random start).
pub fn solve_apg(
    a: &SparseSymMatrix,
    k: usize,
    cfg: &ApgConfig,
    init: Option<&FactorMatrix>,
) -> Result<ApgResult> {
    ApgSolver::new(a, k, *cfg, init)?.run()
}
