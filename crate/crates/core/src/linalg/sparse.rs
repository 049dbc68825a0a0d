use crate::error::{dims, Error, Result};
use crate::linalg::DenseMatrix;

/// Symmetric nonnegative matrix in compressed sparse row form.
///
/// Both triangles are stored. Column indices are strictly increasing within
/// each row, and `A[i][j] == A[j][i]` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    order: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            offsets: vec![0; order + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(order: usize) -> Self {
        Self {
            order,
            offsets: (0..=order).collect(),
            indices: (0..order).collect(),
            values: vec![1.0; order],
        }
    }

    /// Builds the matrix from raw CSR arrays, validating every invariant.
    pub fn from_csr(
        order: usize,
        offsets: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if offsets.len() != order + 1 || offsets[0] != 0 {
            return Err(Error::InvalidMatrix("malformed row offsets".into()));
        }
        if indices.len() != values.len() || offsets[order] != indices.len() {
            return Err(Error::InvalidMatrix(
                "offsets, indices and values disagree in length".into(),
            ));
        }
        for i in 0..order {
            if offsets[i] > offsets[i + 1] {
                return Err(Error::InvalidMatrix(format!("row {i} has negative length")));
            }
            let cols = &indices[offsets[i]..offsets[i + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "column indices of row {i} are not strictly increasing"
                )));
            }
            if cols.last().is_some_and(|&c| c >= order) {
                return Err(Error::InvalidMatrix(format!("row {i} has a column out of range")));
            }
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFinite("sparse matrix values"));
            }
            if v < 0.0 {
                return Err(Error::InvalidMatrix(format!("negative entry {v}")));
            }
        }
        let m = Self {
            order,
            offsets,
            indices,
            values,
        };
        for i in 0..order {
            let (cols, vals) = m.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if m.get(j, i) != Some(v) {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) has no matching ({j},{i})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Builds the matrix from one entry per unordered pair; `(i, j, v)` also sets `(j, i)`.
    ///
    /// Repeating a pair (in either orientation) is an error.
    pub fn from_pairs(order: usize, pairs: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in pairs {
            if i >= order || j >= order {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i},{j}) out of range for order {order}"
                )));
            }
            entries.push((i, j, v));
            if i != j {
                entries.push((j, i, v));
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidMatrix(format!(
                "pair ({},{}) given more than once",
                w[0].0, w[0].1
            )));
        }
        let mut offsets = vec![0usize; order + 1];
        for &(i, _, _) in &entries {
            offsets[i + 1] += 1;
        }
        for i in 0..order {
            offsets[i + 1] += offsets[i];
        }
        let indices = entries.iter().map(|e| e.1).collect();
        let values = entries.iter().map(|e| e.2).collect();
        Self::from_csr(order, offsets, indices, values)
    }

    /// Dense symmetric nonnegative matrix to sparse form, dropping exact zeros.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: dims(m.rows(), m.cols()),
            });
        }
        let n = m.rows();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for i in 0..n {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            offsets.push(indices.len());
        }
        Self::from_csr(n, offsets, indices, values)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Stored entries, counting both triangles.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Stored value at `(i, j)`, or `None` if the entry is structurally zero.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|p| vals[p])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.row(i).1.iter().sum()).collect()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.order, self.order);
        for i in 0..self.order {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Applies `f` to every stored value, keeping the sparsity pattern.
    ///
    /// `f` receives `(i, j, value)` and must be symmetric in `(i, j)` for the result to stay valid.
    pub(crate) fn map_values(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.order {
            for p in self.offsets[i]..self.offsets[i + 1] {
                out.values[p] = f(i, self.indices[p], self.values[p]);
            }
        }
        out
    }

    /// `out = self · d`; shapes must already agree.
    pub(crate) fn mul_dense_into(&self, d: &DenseMatrix, out: &mut DenseMatrix) {
        debug_assert_eq!(d.rows(), self.order);
        debug_assert_eq!(out.shape(), d.shape());
        for i in 0..self.order {
            let (cols, vals) = self.row(i);
            let o = out.row_mut(i);
            o.fill(0.0);
            for (&j, &a) in cols.iter().zip(vals) {
                for (ov, &dv) in o.iter_mut().zip(d.row(j)) {
                    *ov += a * dv;
                }
            }
        }
    }
}

/// Sparse-dense product `a · d`.
pub fn sparse_dense_mul(a: &SparseSymMatrix, d: &DenseMatrix) -> Result<DenseMatrix> {
    if a.order() != d.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows", a.order()),
            found: format!("{} rows", d.rows()),
        });
    }
    let mut out = DenseMatrix::zeros(d.rows(), d.cols());
    a.mul_dense_into(d, &mut out);
    Ok(out)
}
