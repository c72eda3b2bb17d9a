//! Small dense complex linear-algebra helpers on top of `faer`.
//!
//! Matrices are vectorized row-major everywhere in the crate:
//! `vec(B)[i * cols + j] = B[i, j]`.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type DenseMatrix = Mat<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> DenseMatrix {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn from_rows(rows: &[&[C64]]) -> DenseMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    Mat::from_fn(r, c, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> DenseMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    Mat::from_fn(r, c, |i, j| re(rows[i][j]))
}

pub fn diag(values: &[C64]) -> DenseMatrix {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
}

/// `|u><v|` for column vectors `u`, `v`.
pub fn outer(u: &[C64], v: &[C64]) -> DenseMatrix {
    Mat::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

pub fn adjoint(a: &DenseMatrix) -> DenseMatrix {
    a.adjoint().to_owned()
}

pub fn transpose(a: &DenseMatrix) -> DenseMatrix {
    a.transpose().to_owned()
}

pub fn conj(a: &DenseMatrix) -> DenseMatrix {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    a * b
}

pub fn add(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + b[(i, j)])
}

pub fn sub(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)])
}

pub fn scale(s: C64, a: &DenseMatrix) -> DenseMatrix {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| s * a[(i, j)])
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn trace(a: &DenseMatrix) -> C64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn max_abs(a: &DenseMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max(a[(i, j)].norm());
        }
    }
    worst
}

pub fn hermiticity_defect(a: &DenseMatrix) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian part `(A + A^*) / 2`.
pub fn hermitian_part(a: &DenseMatrix) -> DenseMatrix {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::LinAlg(format!("hermitian eigendecomposition: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((values, evd.U().to_owned()))
}

pub fn hermitian_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::LinAlg(format!("hermitian eigenvalues: {e:?}")))
}

/// Eigenvalues of a general complex square matrix (unordered).
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<C64>> {
    a.eigenvalues()
        .map_err(|e| Error::LinAlg(format!("eigenvalues: {e:?}")))
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    a.singular_values()
        .map_err(|e| Error::LinAlg(format!("singular values: {e:?}")))
}

/// Operator (spectral) norm.
pub fn op_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Full SVD `A = U diag(s) V^*`.
pub fn svd(a: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    let svd = a
        .svd()
        .map_err(|e| Error::LinAlg(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((svd.U().to_owned(), s, svd.V().to_owned()))
}

pub fn vectorize(a: &DenseMatrix) -> Vec<C64> {
    let mut v = Vec::with_capacity(a.nrows() * a.ncols());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            v.push(a[(i, j)]);
        }
    }
    v
}

pub fn unvectorize(v: &[C64], rows: usize, cols: usize) -> DenseMatrix {
    assert_eq!(v.len(), rows * cols);
    Mat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

pub fn column(a: &DenseMatrix, j: usize) -> Vec<C64> {
    (0..a.nrows()).map(|i| a[(i, j)]).collect()
}

pub fn from_columns(rows: usize, cols: &[Vec<C64>]) -> DenseMatrix {
    Mat::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

pub fn matvec(a: &DenseMatrix, x: &[C64]) -> Vec<C64> {
    assert_eq!(a.ncols(), x.len());
    let mut y = vec![ZERO; a.nrows()];
    for j in 0..a.ncols() {
        let xj = x[j];
        if xj == ZERO {
            continue;
        }
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += a[(i, j)] * xj;
        }
    }
    y
}

/// `x^* y`.
#[inline]
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[inline]
pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Gram–Schmidt orthonormality defect `max |<u_i, u_j> - delta_ij|`.
pub fn orthonormality_defect(cols: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in cols.iter().enumerate() {
        for (j, v) in cols.iter().enumerate().skip(i) {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((dot(u, v) - target).norm());
        }
    }
    worst
}

/// Orthogonal projector onto the column span of an orthonormal set.
pub fn projector_from_columns(dim: usize, cols: &[Vec<C64>]) -> DenseMatrix {
    let mut p = zeros(dim, dim);
    for u in cols {
        for j in 0..dim {
            let uj = u[j].conj();
            if uj == ZERO {
                continue;
            }
            for i in 0..dim {
                p[(i, j)] += u[i] * uj;
            }
        }
    }
    p
}
