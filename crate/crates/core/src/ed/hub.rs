//! Spectral data of the single-hub patch `Y_v(n)`.

use serde::{Deserialize, Serialize};

use crate::ed::angles::HUB_KERNEL_DIM;
use crate::ed::eigen::{lowest_eigenpairs, EigenOptions};
use crate::ed::kernel::{gap_above_kernel_with, kernel_basis_with, KERNEL_TOL};
use crate::error::Result;
use crate::lattice;
use crate::sparse::SparseHermitianOperator;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaY {
    pub n: usize,
    pub gamma: f64,
    pub kernel_dim: usize,
    pub hilbert_dim: usize,
}

pub fn hub_hamiltonian(n: usize) -> Result<SparseHermitianOperator> {
    lattice::hamiltonian(&lattice::build_y_graph(n)?)
}

/// `γ_Y(n)`: the gap of `h_v` above its 8-dimensional kernel.
pub fn gamma_y(n: usize) -> Result<GammaY> {
    gamma_y_with(n, &EigenOptions::default())
}

pub fn gamma_y_with(n: usize, opts: &EigenOptions) -> Result<GammaY> {
    let h = hub_hamiltonian(n)?;
    let gamma = gap_above_kernel_with(&h, HUB_KERNEL_DIM, opts)?;
    Ok(GammaY { n, gamma, kernel_dim: HUB_KERNEL_DIM, hilbert_dim: h.dim() })
}

/// `dim ker h_v` and the first eigenvalue above the kernel tolerance.
pub fn hub_kernel_dim(n: usize, opts: &EigenOptions) -> Result<(usize, Option<f64>)> {
    let k = kernel_basis_with(&hub_hamiltonian(n)?, KERNEL_TOL, opts)?;
    Ok((k.dim, k.next_eigenvalue))
}

/// `‖h_Y‖`, the largest eigenvalue of `h_v`.
pub fn hub_norm(n: usize) -> Result<f64> {
    let h = hub_hamiltonian(n)?.scaled(-1.0);
    Ok(-lowest_eigenpairs(&h, 1, &EigenOptions::default())?.eigenvalues[0])
}
