//! Kernels and spectral gaps of frustration-free Hamiltonians.

use crate::dense::C64;
use crate::ed::eigen::{eigenpairs_below, lowest_eigenpairs, EigenOptions};
use crate::error::{invalid, Error, Result};
use crate::sparse::SparseHermitianOperator;

/// Eigenvalues below this count as zero.
pub const KERNEL_TOL: f64 = 1e-8;
/// The first nonzero eigenvalue must exceed this; the physical gaps are
/// O(0.1), so anything in between signals a bug rather than physics.
pub const SEPARATION: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub dim: usize,
    /// Orthonormal, in the full product basis.
    pub vectors: Vec<Vec<C64>>,
    /// Smallest eigenvalue at or above the tolerance, when one was found.
    pub next_eigenvalue: Option<f64>,
}

/// Smallest eigenvalue above a kernel of exactly `expected` dimensions.
pub fn gap_above_kernel(h: &SparseHermitianOperator, expected: usize) -> Result<f64> {
    gap_above_kernel_with(h, expected, &EigenOptions::default())
}

pub fn gap_above_kernel_with(h: &SparseHermitianOperator, expected: usize, opts: &EigenOptions) -> Result<f64> {
    if expected == 0 {
        return invalid("expected kernel dimension must be at least 1");
    }
    let r = lowest_eigenpairs(h, expected + 1, opts)?;
    let found = r.eigenvalues.iter().filter(|v| v.abs() < KERNEL_TOL).count();
    let gap = r.eigenvalues[expected];
    if found != expected || r.eigenvalues[..expected].iter().any(|v| v.abs() >= KERNEL_TOL) {
        return Err(Error::KernelDimension {
            expected,
            found,
            detail: format!("lowest eigenvalues {:?}", r.eigenvalues),
        });
    }
    if gap <= SEPARATION {
        return Err(Error::KernelDimension {
            expected,
            found: expected + 1,
            detail: format!("eigenvalue {gap:e} just above the kernel is below {SEPARATION:e}"),
        });
    }
    Ok(gap)
}

/// Orthonormal basis of the eigenvectors with eigenvalue below `tol`.
pub fn kernel_basis(h: &SparseHermitianOperator, tol: f64) -> Result<KernelBasis> {
    let opts = EigenOptions { want_vectors: true, ..EigenOptions::default() };
    kernel_basis_with(h, tol, &opts)
}

pub fn kernel_basis_with(h: &SparseHermitianOperator, tol: f64, opts: &EigenOptions) -> Result<KernelBasis> {
    let opts = EigenOptions { want_vectors: true, ..opts.clone() };
    let (r, next) = eigenpairs_below(h, tol, SEPARATION.max(tol), &opts)?;
    let vectors = r.vectors.unwrap_or_default();
    Ok(KernelBasis { dim: vectors.len(), vectors, next_eigenvalue: next })
}

/// `kernel_basis` at `KERNEL_TOL`, asserting both the dimension and the
/// separation of the rest of the spectrum.
pub fn checked_kernel(h: &SparseHermitianOperator, expected: usize, opts: &EigenOptions) -> Result<KernelBasis> {
    let k = kernel_basis_with(h, KERNEL_TOL, opts)?;
    if k.dim != expected {
        return Err(Error::KernelDimension { expected, found: k.dim, detail: "eigenvalues below 1e-8".into() });
    }
    if let Some(next) = k.next_eigenvalue {
        if next <= SEPARATION {
            return Err(Error::KernelDimension {
                expected,
                found: k.dim,
                detail: format!("next eigenvalue {next:e} is not separated from the kernel"),
            });
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;

    fn diagonal(values: &[f64]) -> SparseHermitianOperator {
        let t = values.iter().enumerate().map(|(i, &v)| (i, i, dense::re(v))).collect();
        SparseHermitianOperator::from_triplets(&[values.len()], t).unwrap()
    }

    #[test]
    fn gap_of_diagonal() {
        assert_eq!(gap_above_kernel(&diagonal(&[0.0, 0.0, 5.0]), 2).unwrap(), 5.0);
    }

    #[test]
    fn wrong_kernel_dimension_is_a_physics_error() {
        let e = gap_above_kernel(&diagonal(&[0.0, 1.0, 5.0]), 2).unwrap_err();
        assert!(matches!(e, Error::KernelDimension { found: 1, .. }));
    }

    #[test]
    fn zero_operator_kernel_is_everything() {
        let z = SparseHermitianOperator::zero(&[3]).unwrap();
        let k = kernel_basis(&z, KERNEL_TOL).unwrap();
        assert_eq!(k.dim, 3);
        assert!(dense::orthonormality_defect(&k.vectors) < 1e-12);
    }
}
