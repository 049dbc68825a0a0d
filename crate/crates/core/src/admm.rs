//! ADMM on the double-split problem
//!
//! ```text
//! minimize ½‖A − X·Yᵀ‖²_F   subject to L ≥ 0, L − X = 0, L − Y = 0
//! ```
//!
//! Every iteration solves the `X` and `Y` least-squares blocks exactly with a
//! `K×K` Cholesky factorization, projects the averaged splits to get `L`, and
//! takes a gradient-ascent step on both multipliers. Updates run in
//! Gauss–Seidel order: the `Y` block already sees the new `X`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{dims, Error, Result};
use crate::factor::{check_init, check_k, random_init, relative_change, snmf_objective, FactorMatrix};
use crate::kkt::{kkt_residual, KktResidual};
use crate::linalg::{cholesky_factor, sparse_dense_mul, DenseMatrix, SparseSymMatrix};
use crate::StopReason;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmmConfig {
    pub rho: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: 0.1,
            epsilon: 1e-5,
            max_iter: 2000,
            seed: 0,
        }
    }
}

impl AdmmConfig {
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
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Primal splits, projected factor and multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    pub l: FactorMatrix,
    pub lambda: DenseMatrix,
    pub gamma: DenseMatrix,
    pub iteration: usize,
}

impl AdmmState {
    /// `X = Y = L = init`, zero multipliers.
    pub fn from_init(init: &FactorMatrix) -> Self {
        let (n, k) = init.shape();
        Self {
            x: init.as_dense().clone(),
            y: init.as_dense().clone(),
            l: init.clone(),
            lambda: DenseMatrix::zeros(n, k),
            gamma: DenseMatrix::zeros(n, k),
            iteration: 0,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.l.shape()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let l = self.l.as_dense();
        for m in [&self.x, &self.y, &self.lambda, &self.gamma] {
            l.same_shape(m)?;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        [&self.x, &self.y, self.l.as_dense(), &self.lambda, &self.gamma]
            .iter()
            .all(|m| m.is_finite())
    }

    /// Largest Frobenius distance between corresponding matrices of two states.
    pub fn max_distance(&self, other: &Self) -> f64 {
        [
            self.x.distance(&other.x),
            self.y.distance(&other.y),
            self.l.distance(&other.l),
            self.lambda.distance(&other.lambda),
            self.gamma.distance(&other.gamma),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Exact minimizer over one split: `(A·P + ρL + D)(PᵀP + ρI)⁻¹` for the other split `P`
/// and multiplier `D`, via Cholesky and two triangular solves per row.
pub fn update_split(
    a: &SparseSymMatrix,
    other: &DenseMatrix,
    l: &DenseMatrix,
    dual: &DenseMatrix,
    rho: f64,
) -> Result<DenseMatrix> {
    if other.rows() != a.order() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows", a.order()),
            found: format!("{} rows", other.rows()),
        });
    }
    other.same_shape(l)?;
    other.same_shape(dual)?;
    let mut gram = other.gram();
    gram.add_diagonal(rho);
    let chol = cholesky_factor(&gram)?;
    let mut rhs = sparse_dense_mul(a, other)?;
    rhs.axpy(rho, l);
    rhs.axpy(1.0, dual);
    chol.solve_rows_in_place(&mut rhs)?;
    Ok(rhs)
}

/// `½[X − Λ/ρ + Y − Γ/ρ]⁺`.
pub fn update_l(
    x: &DenseMatrix,
    y: &DenseMatrix,
    lambda: &DenseMatrix,
    gamma: &DenseMatrix,
    rho: f64,
) -> Result<FactorMatrix> {
    x.same_shape(y)?;
    x.same_shape(lambda)?;
    x.same_shape(gamma)?;
    let inv = 1.0 / rho;
    let data = x
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .zip(lambda.as_slice().iter().zip(gamma.as_slice()))
        .map(|((&xv, &yv), (&lv, &gv))| (0.5 * (xv - inv * lv + yv - inv * gv)).max(0.0))
        .collect();
    let (n, k) = x.shape();
    Ok(FactorMatrix::from_pos_part(DenseMatrix::new(n, k, data)?))
}

/// `Λ += ρ(L − X)`, `Γ += ρ(L − Y)`; nothing else changes.
pub fn update_duals(mut state: AdmmState, rho: f64) -> AdmmState {
    let l = state.l.as_slice();
    for ((lam, &lv), &xv) in state.lambda.as_mut_slice().iter_mut().zip(l).zip(state.x.as_slice()) {
        *lam += rho * (lv - xv);
    }
    for ((gam, &lv), &yv) in state.gamma.as_mut_slice().iter_mut().zip(l).zip(state.y.as_slice()) {
        *gam += rho * (lv - yv);
    }
    state
}

/// Step-by-step driver.
#[derive(Debug, Clone)]
pub struct AdmmSolver<'a> {
    a: &'a SparseSymMatrix,
    cfg: AdmmConfig,
    state: AdmmState,
}

impl<'a> AdmmSolver<'a> {
    pub fn new(
        a: &'a SparseSymMatrix,
        k: usize,
        cfg: AdmmConfig,
        init: Option<&FactorMatrix>,
    ) -> Result<Self> {
        cfg.validate()?;
        check_k(a, k)?;
        let init = match init {
            Some(init) => {
                check_init(a, k, init)?;
                init.clone()
            }
            None => random_init(a, k, cfg.seed),
        };
        Ok(Self {
            a,
            cfg,
            state: AdmmState::from_init(&init),
        })
    }

    /// Resumes from an arbitrary state, e.g. one with nonzero multipliers.
    pub fn from_state(a: &'a SparseSymMatrix, cfg: AdmmConfig, state: AdmmState) -> Result<Self> {
        cfg.validate()?;
        state.check_shapes()?;
        if state.l.rows() != a.order() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", a.order()),
                found: dims(state.l.rows(), state.l.cols()),
            });
        }
        Ok(Self { a, cfg, state })
    }

    pub fn state(&self) -> &AdmmState {
        &self.state
    }

    /// One full iteration in the order X, Y, L, Λ, Γ. Returns the stopping criterion
    /// `Σ ‖new − old‖_F / ‖old‖_F` over `X`, `Y` and `L`.
    pub fn iterate(&mut self) -> Result<f64> {
        let rho = self.cfg.rho;
        let s = &self.state;
        let x = update_split(self.a, &s.y, &s.l, &s.lambda, rho)?;
        let y = update_split(self.a, &x, &s.l, &s.gamma, rho)?;
        let l = update_l(&x, &y, &s.lambda, &s.gamma, rho)?;
        let criterion = relative_change(&x, &s.x) + relative_change(&y, &s.y) + relative_change(&l, &s.l);
        let next = AdmmState {
            x,
            y,
            l,
            lambda: s.lambda.clone(),
            gamma: s.gamma.clone(),
            iteration: s.iteration + 1,
        };
        let next = update_duals(next, rho);
        if !next.is_finite() {
            return Err(Error::NonFinite("admm iterate"));
        }
        self.state = next;
        Ok(criterion)
    }

    pub fn run(mut self) -> Result<AdmmResult> {
        let start = Instant::now();
        let mut trace = Vec::new();
        let mut stop = StopReason::MaxIterations;
        while self.state.iteration < self.cfg.max_iter {
            let criterion = self.iterate()?;
            trace.push(snmf_objective(self.a, &self.state.l));
            if criterion <= self.cfg.epsilon {
                stop = StopReason::Converged;
                break;
            }
        }
        let wall_time = start.elapsed();
        let kkt = kkt_residual(self.a, &self.state)?;
        let s = &self.state;
        let l_norm = s.l.frobenius_norm();
        let gap = |m: &DenseMatrix| {
            if l_norm > 0.0 {
                s.l.distance(m) / l_norm
            } else {
                relative_change(m, &s.l)
            }
        };
        Ok(AdmmResult {
            gap_x: gap(&s.x),
            gap_y: gap(&s.y),
            snmf_objective: snmf_objective(self.a, &s.l),
            iterations: s.iteration,
            trace,
            kkt,
            stop,
            wall_time,
            state: self.state,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AdmmResult {
    /// Final iterate; `state.l` is the point-assignment output.
    pub state: AdmmState,
    pub iterations: usize,
    /// `‖A − L·Lᵀ‖²_F` after every iteration.
    pub trace: Vec<f64>,
    pub snmf_objective: f64,
    /// `‖L − X‖_F / ‖L‖_F`.
    pub gap_x: f64,
    /// `‖L − Y‖_F / ‖L‖_F`.
    pub gap_y: f64,
    pub kkt: KktResidual,
    pub stop: StopReason,
    pub wall_time: Duration,
}

impl AdmmResult {
    pub fn l(&self) -> &FactorMatrix {
        &self.state.l
    }

    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged
    }
}

/// Runs ADMM from `init` (or a seeded random start). Hitting `max_iter` is not an
/// error: the result carries [`StopReason::MaxIterations`] and its KKT residual.
pub fn solve_admm(
    a: &SparseSymMatrix,
    k: usize,
    cfg: &AdmmConfig,
    init: Option<&FactorMatrix>,
) -> Result<AdmmResult> {
    AdmmSolver::new(a, k, *cfg, init)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_identity_case() {
        let a = SparseSymMatrix::identity(2);
        let i = DenseMatrix::identity(2);
        let x = update_split(&a, &i, &i, &DenseMatrix::zeros(2, 2), 1.0).unwrap();
        assert!(x.distance(&i) < 1e-15);
    }

    #[test]
    fn split_large_rho_tends_to_l() {
        let a = SparseSymMatrix::from_pairs(3, [(0, 1, 0.4), (1, 2, 0.9), (2, 2, 0.3)]).unwrap();
        let y = DenseMatrix::from_fn(3, 2, |i, j| 0.2 + 0.1 * (i + 2 * j) as f64);
        let l = DenseMatrix::from_fn(3, 2, |i, j| 0.5 - 0.1 * i as f64 + 0.3 * j as f64);
        let x = update_split(&a, &y, &l, &DenseMatrix::zeros(3, 2), 1e6).unwrap();
        assert!(x.distance(&l) / l.frobenius_norm() < 1e-4);
    }

    #[test]
    fn l_update_examples() {
        let x = DenseMatrix::from_rows(&[[0.3, -0.2], [1.0, 0.0]]);
        let z = DenseMatrix::zeros(2, 2);
        let l = update_l(&x, &x, &z, &z, 1.0).unwrap();
        assert_eq!(*l.as_dense(), DenseMatrix::from_rows(&[[0.3, 0.0], [1.0, 0.0]]));

        let l = update_l(
            &DenseMatrix::from_rows(&[[2.0]]),
            &DenseMatrix::from_rows(&[[0.0]]),
            &DenseMatrix::from_rows(&[[1.0]]),
            &DenseMatrix::from_rows(&[[-1.0]]),
            1.0,
        )
        .unwrap();
        assert_eq!(l[(0, 0)], 1.0);

        let l = update_l(
            &DenseMatrix::from_rows(&[[0.1, 1.0]]),
            &DenseMatrix::from_rows(&[[0.1, 1.0]]),
            &DenseMatrix::from_rows(&[[1.0, 0.0]]),
            &DenseMatrix::from_rows(&[[1.0, 0.0]]),
            0.5,
        )
        .unwrap();
        assert_eq!(l[(0, 0)], 0.0);
        assert_eq!(l[(0, 1)], 1.0);
    }

    #[test]
    fn dual_examples() {
        let l = FactorMatrix::new(DenseMatrix::from_rows(&[[1.0, 2.0]])).unwrap();
        let s = AdmmState::from_init(&l);
        assert_eq!(update_duals(s.clone(), 0.1), s);

        let mut s = AdmmState::from_init(&l);
        s.x = DenseMatrix::from_rows(&[[0.0, 1.0]]);
        let once = update_duals(s.clone(), 0.1);
        assert!(once.lambda.distance(&DenseMatrix::from_rows(&[[0.1, 0.1]])) < 1e-15);
        assert_eq!(once.gamma, DenseMatrix::zeros(1, 2));
        assert_eq!((once.x.clone(), once.y.clone(), once.l.clone()), (s.x.clone(), s.y.clone(), s.l.clone()));
        let twice = update_duals(once, 0.1);
        assert!(twice.lambda.distance(&DenseMatrix::from_rows(&[[0.2, 0.2]])) < 1e-15);
    }

    #[test]
    fn shape_errors() {
        let a = SparseSymMatrix::identity(3);
        let m = DenseMatrix::zeros(3, 2);
        assert!(update_split(&a, &DenseMatrix::zeros(2, 2), &m, &m, 1.0).is_err());
        assert!(update_split(&a, &m, &DenseMatrix::zeros(3, 1), &m, 1.0).is_err());
        assert!(update_l(&m, &DenseMatrix::zeros(2, 2), &m, &m, 1.0).is_err());
    }
}
