//! Exact diagonalization: sparse eigensolving, kernels, principal angles
//! between ground spaces and dense operator checks on small tori.

pub mod angles;
pub mod eigen;
pub mod fnw;
pub mod hub;
pub mod kernel;
pub mod torus;

pub use angles::{epsilon_exact, EpsilonExact, SubspacePair};
pub use eigen::{lowest_eigenpairs, lowest_eigenvalues, EigenOptions, EigenResult};
pub use fnw::{fnw_check, fnw_sweep, FnwReport, FnwSweep};
pub use hub::{gamma_y, GammaY};
pub use kernel::{gap_above_kernel, kernel_basis, KernelBasis};
pub use torus::{torus_checks, TorusReport};
