//! Slow, independent reference computations used by the test suites.
//!
//! Nothing here shares code paths with the solvers it checks: eigenvalues come
//! from cyclic Jacobi sweeps, inverses from Gauss-Jordan elimination, graphs
//! from a dense quadratic scan and accuracies from exhaustive permutations.

use crate::linalg::DenseMatrix;

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let total: f64 = a.iter().flatten().map(|v| v * v).sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (apk, aqk) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (vp, vq) = (*apk, *aqk);
                    *apk = c * vp - s * vq;
                    *aqk = s * vp + c * vq;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn jacobi_max_eigenvalue(m: &DenseMatrix) -> f64 {
    jacobi_eigenvalues(m).last().copied().unwrap_or(0.0)
}

/// Explicit inverse by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_jordan_inverse(m: &DenseMatrix) -> Option<DenseMatrix> {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        let d = a[col][col];
        a[col].iter_mut().for_each(|v| *v /= d);
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (v, p) in a[r].iter_mut().zip(pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
    }
    Some(DenseMatrix::from_fn(n, n, |i, j| a[i][n + j]))
}

/// Dense `n×n` weight matrix by a plain quadratic scan.
///
/// Ranks every other point by `(squared distance, index)` using a full sort.
pub fn dense_weight_matrix(points: &DenseMatrix, p: usize, q: usize) -> DenseMatrix {
    let n = points.rows();
    let d2 = |i: usize, j: usize| -> f64 {
        (0..points.cols())
            .map(|c| (points[(i, c)] - points[(j, c)]).powi(2))
            .sum()
    };
    let ranked: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&x, &y| d2(i, x).total_cmp(&d2(i, y)).then(x.cmp(&y)));
            others
        })
        .collect();
    let sigma: Vec<f64> = (0..n).map(|i| d2(i, ranked[i][p - 1]).sqrt()).collect();
    let mut w = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let linked = ranked[i][..q].contains(&j) || ranked[j][..q].contains(&i);
            if linked {
                let (lo, hi) = (i.min(j), i.max(j));
                w[(i, j)] = (-d2(lo, hi) / (sigma[lo] * sigma[hi])).exp();
            }
        }
    }
    w
}

/// `D^{-1/2}·W·D^{-1/2}` with dense products.
pub fn dense_normalize(w: &DenseMatrix) -> DenseMatrix {
    let n = w.rows();
    let d: Vec<f64> = (0..n).map(|i| w.row(i).iter().sum()).collect();
    let dinv = DenseMatrix::from_fn(n, n, |i, j| if i == j { 1.0 / d[i].sqrt() } else { 0.0 });
    dinv.matmul(w).unwrap().matmul(&dinv).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Largest agreement count over every relabeling of `pred`; labels in `0..k` on both sides.
pub fn brute_force_matches(pred: &[usize], gold: &[usize], k: usize) -> usize {
    permutations(k)
        .into_iter()
        .map(|perm| pred.iter().zip(gold).filter(|(&c, &g)| perm[c] == g).count())
        .max()
        .unwrap_or(0)
}

/// Central differences of `f` at `x`, entry by entry.
pub fn central_difference(f: impl Fn(&DenseMatrix) -> f64, x: &DenseMatrix, h: f64) -> DenseMatrix {
    let mut g = DenseMatrix::zeros(x.rows(), x.cols());
    let mut probe = x.clone();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let orig = probe[(i, j)];
            probe[(i, j)] = orig + h;
            let up = f(&probe);
            probe[(i, j)] = orig - h;
            let down = f(&probe);
            probe[(i, j)] = orig;
            g[(i, j)] = (up - down) / (2.0 * h);
        }
    }
    g
}

/// Dense `‖A − L·Zᵀ‖²_F + ρ‖L − Z‖²_F`, forming every product explicitly.
pub fn dense_qpm_objective(a: &DenseMatrix, l: &DenseMatrix, z: &DenseMatrix, rho: f64) -> f64 {
    let lz = l.matmul(&z.transpose()).unwrap();
    a.distance(&lz).powi(2) + rho * l.distance(z).powi(2)
}

/// `n×k` block indicator: point `i` belongs to block `i·k / n`.
pub fn block_indicator(n: usize, k: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, k, |i, j| if i * k / n == j { 1.0 } else { 0.0 })
}
