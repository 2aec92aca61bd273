//! Dense helpers on top of nalgebra: the isometric vectorization of symmetric
//! matrices, rank decisions with a relative singular-value cutoff, null spaces
//! and the symmetric square root.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric (residual {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite (min eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
}

/// Dimension of the space of symmetric n x n matrices.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Isometric coordinates of a symmetric matrix: diagonal entries first, then
/// sqrt(2) times the upper off-diagonal entries in lexicographic order.  The
/// Euclidean dot product of two coordinate vectors equals tr(AB).
pub fn sym_to_vec(a: &DMatrix<f64>) -> DVector<f64> {
    let n = a.nrows();
    let mut v = DVector::zeros(sym_dim(n));
    for i in 0..n {
        v[i] = a[(i, i)];
    }
    let mut k = n;
    let s = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in (i + 1)..n {
            v[k] = s * a[(i, j)];
            k += 1;
        }
    }
    v
}

/// Inverse of [`sym_to_vec`].
pub fn vec_to_sym(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = v[i];
    }
    let mut k = n;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in (i + 1)..n {
            a[(i, j)] = s * v[k];
            a[(j, i)] = s * v[k];
            k += 1;
        }
    }
    a
}

/// Symmetric part (A + A^t)/2.
pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub fn symmetry_residual(a: &DMatrix<f64>) -> f64 {
    (a - a.transpose()).norm()
}

/// Eigen decomposition of a symmetric matrix, eigenvalues ascending.
pub fn eig_sym(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let se = a.clone().symmetric_eigen();
    let n = a.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let vals = DVector::from_fn(n, |i, _| se.eigenvalues[idx[i]]);
    let vecs = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Symmetric positive definite square root.
pub fn sqrt_spd(a: &DMatrix<f64>) -> Result<DMatrix<f64>, LinalgError> {
    let res = symmetry_residual(a);
    if res > 1e-10 * (1.0 + a.norm()) {
        return Err(LinalgError::NotSymmetric(res));
    }
    let (vals, vecs) = eig_sym(&symmetrize(a));
    if vals[0] <= 0.0 {
        return Err(LinalgError::NotPositiveDefinite(vals[0]));
    }
    let d = DMatrix::from_diagonal(&vals.map(f64::sqrt));
    Ok(&vecs * d * vecs.transpose())
}

/// Condition number of a symmetric positive definite matrix, infinite when the
/// smallest eigenvalue is not positive.
pub fn cond_spd(a: &DMatrix<f64>) -> f64 {
    let (vals, _) = eig_sym(a);
    let lo = vals[0];
    let hi = vals[vals.len() - 1].abs();
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Number of singular values above the relative cutoff
/// `rank_coeff * sigma_max * dim`.
pub fn rank_from_singular_values(svals: &[f64], dim: usize, rank_coeff: f64) -> usize {
    let smax = svals.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let cut = rank_coeff * smax * dim as f64;
    svals.iter().filter(|&&s| s > cut).count()
}

/// Singular values of a matrix, descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Orthonormal basis of the null space of `a`, through the eigenvectors of
/// the Gram matrix `a^t a` (the thin SVD drops trailing right singular
/// vectors of wide matrices).  An all-zero matrix yields the full standard
/// basis.
pub fn null_space(a: &DMatrix<f64>, rank_coeff: f64) -> Vec<DVector<f64>> {
    let ncols = a.ncols();
    if a.norm() == 0.0 {
        return (0..ncols)
            .map(|i| DVector::from_fn(ncols, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
    }
    let gram = a.transpose() * a;
    let (vals, vecs) = eig_sym(&gram);
    let dim = a.nrows().max(ncols);
    let smax = vals[ncols - 1].max(0.0).sqrt();
    let cut = rank_coeff * smax * dim as f64;
    let mut base = Vec::new();
    for k in 0..ncols {
        if vals[k].max(0.0).sqrt() <= cut {
            base.push(vecs.column(k).into_owned());
        }
    }
    base
}

/// max |a - b| entrywise.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
