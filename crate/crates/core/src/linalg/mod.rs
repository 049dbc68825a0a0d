//! Dense and sparse kernels shared by the solvers.

mod cholesky;
mod dense;
mod eigen;
mod sparse;

pub use cholesky::{cholesky_factor, cholesky_solve, CholeskyFactor, SYMMETRY_TOLERANCE};
pub use dense::{pos_part, DenseMatrix};
pub(crate) use dense::pos_part_in_place;
pub use eigen::{spectral_norm, POWER_MAX_ITER};
pub use sparse::{sparse_dense_mul, SparseSymMatrix};
