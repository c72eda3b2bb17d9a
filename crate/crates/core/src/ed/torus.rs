//! Operator inequalities on the smallest decorated torus, checked densely.

use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseMatrix};
use crate::ed::fnw::fnw_check;
use crate::ed::hub;
use crate::ed::kernel::{kernel_basis, KERNEL_TOL};
use crate::error::{invalid, Result};
use crate::lattice::{self, Region};

/// Largest torus the dense checks accept.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusReport {
    pub cells: (usize, usize),
    pub n: usize,
    pub hilbert_dim: usize,
    pub ground_energy: f64,
    pub kernel_dim: usize,
    /// `dim ker Σ P_v`; must equal `kernel_dim`.
    pub tilde_kernel_dim: usize,
    /// Smallest eigenvalues of `Σh_v − H` and `2H − Σh_v`.
    pub sum_lower_margin: f64,
    pub sum_upper_margin: f64,
    pub gamma_y: f64,
    pub hub_norm: f64,
    /// Smallest eigenvalues of `H − ½γ_Y H̃` and `‖h_Y‖ H̃ − H`.
    pub comparable_lower_margin: f64,
    pub comparable_upper_margin: f64,
    /// Largest entry of `H̃² − H̃ − Σ_{v≠w}(P_vP_w + P_wP_v)`.
    pub square_identity_defect: f64,
    /// Smallest eigenvalue of `P_vP_w + P_wP_v` over non-neighbouring hubs
    /// (`None` when every pair of hubs is adjacent).
    pub non_neighbor_min: Option<f64>,
    /// Worst `fnw_check` residual over adjacent hub pairs.
    pub fnw_min_residual: f64,
}

fn min_eig(a: &DenseMatrix) -> Result<f64> {
    Ok(dense::hermitian_eigenvalues(&dense::hermitian_part(a))?[0])
}

pub fn torus_checks(cells_x: usize, cells_y: usize, n: usize) -> Result<TorusReport> {
    let g = lattice::build_decorated_torus(cells_x, cells_y, n)?;
    let dim = g.hilbert_dim()?;
    if dim > MAX_DENSE_DIM {
        return invalid(format!("torus dimension {dim} exceeds the dense limit {MAX_DENSE_DIM}"));
    }
    let h = lattice::hamiltonian(&g)?.to_dense();
    let hubs = g.vertices_in(Region::Center);
    let mut sum_h = dense::zeros(dim, dim);
    let mut projectors = Vec::with_capacity(hubs.len());
    let mut neighborhoods = Vec::with_capacity(hubs.len());
    for &v in &hubs {
        let ids = g.y_neighborhood(v);
        let hv = lattice::hamiltonian_on_edges(&g, &g.edges_within(&ids))?;
        let ker = kernel_basis(&hv, KERNEL_TOL)?;
        let p = dense::sub(&dense::identity(dim), &dense::projector_from_columns(dim, &ker.vectors));
        sum_h = dense::add(&sum_h, &hv.to_dense());
        projectors.push(p);
        neighborhoods.push(ids);
    }
    let tilde = projectors.iter().fold(dense::zeros(dim, dim), |acc, p| dense::add(&acc, p));

    let spec_h = dense::hermitian_eigenvalues(&h)?;
    let spec_t = dense::hermitian_eigenvalues(&tilde)?;
    let gamma_y = hub::gamma_y(n)?.gamma;
    let hub_norm = hub::hub_norm(n)?;

    let scaled = |s: f64, a: &DenseMatrix| dense::scale(dense::re(s), a);
    let mut pair_sum = dense::zeros(dim, dim);
    let mut non_neighbor_min: Option<f64> = None;
    let mut fnw_min = f64::INFINITY;
    for i in 0..hubs.len() {
        for j in (i + 1)..hubs.len() {
            let (p, q) = (&projectors[i], &projectors[j]);
            let anti = dense::add(&dense::matmul(p, q), &dense::matmul(q, p));
            pair_sum = dense::add(&pair_sum, &anti);
            let adjacent = neighborhoods[i].iter().any(|x| neighborhoods[j].contains(x));
            if adjacent {
                fnw_min = fnw_min.min(fnw_check(p, q)?.residual);
            } else {
                let m = min_eig(&anti)?;
                non_neighbor_min = Some(non_neighbor_min.map_or(m, |x| x.min(m)));
            }
        }
    }
    let square = dense::sub(&dense::sub(&dense::matmul(&tilde, &tilde), &tilde), &pair_sum);

    Ok(TorusReport {
        cells: (cells_x, cells_y),
        n,
        hilbert_dim: dim,
        ground_energy: spec_h[0],
        kernel_dim: spec_h.iter().filter(|v| v.abs() < KERNEL_TOL).count(),
        tilde_kernel_dim: spec_t.iter().filter(|v| v.abs() < KERNEL_TOL).count(),
        sum_lower_margin: min_eig(&dense::sub(&sum_h, &h))?,
        sum_upper_margin: min_eig(&dense::sub(&scaled(2.0, &h), &sum_h))?,
        gamma_y,
        hub_norm,
        comparable_lower_margin: min_eig(&dense::sub(&h, &scaled(0.5 * gamma_y, &tilde)))?,
        comparable_upper_margin: min_eig(&dense::sub(&scaled(hub_norm, &tilde), &h))?,
        square_identity_defect: dense::max_abs(&square),
        non_neighbor_min,
        fnw_min_residual: fnw_min,
    })
}
