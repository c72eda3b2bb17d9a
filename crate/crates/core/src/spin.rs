//! Single-site spin representations and two-site total-spin projectors.
//!
//! Basis order is descending magnetic quantum number, `|s>, |s-1>, ..., |-s>`.

use crate::dense::{self, DenseMatrix, C64, I, ZERO};
use crate::error::{invalid, Result};
use crate::sparse::{SparseHermitianOperator, TwoSiteTerm};

/// Eigenvalues of the two-site Casimir are matched to `J(J+1)` within this.
const CASIMIR_CLUSTER_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub two_s: u32,
    pub dim: usize,
    pub sx: DenseMatrix,
    pub sy: DenseMatrix,
    pub sz: DenseMatrix,
    pub s_plus: DenseMatrix,
    pub s_minus: DenseMatrix,
}

impl SpinOperators {
    pub fn spin(&self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    /// `sx^2 + sy^2 + sz^2`.
    pub fn casimir(&self) -> DenseMatrix {
        let sq = |a: &DenseMatrix| dense::matmul(a, a);
        dense::add(&dense::add(&sq(&self.sx), &sq(&self.sy)), &sq(&self.sz))
    }

    pub fn components(&self) -> [&DenseMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }
}

pub fn spin_matrices(two_s: u32) -> Result<SpinOperators> {
    if two_s == 0 {
        return invalid("two_s must be at least 1");
    }
    let dim = two_s as usize + 1;
    let s = f64::from(two_s) / 2.0;
    let m_of = |k: usize| s - k as f64;

    let mut s_plus = dense::zeros(dim, dim);
    for k in 1..dim {
        // <m+1| S^+ |m> with m = m_of(k), landing on index k-1.
        let m = m_of(k);
        s_plus[(k - 1, k)] = dense::re((s * (s + 1.0) - m * (m + 1.0)).sqrt());
    }
    let s_minus = dense::adjoint(&s_plus);
    let sz = dense::diag(&(0..dim).map(|k| dense::re(m_of(k))).collect::<Vec<_>>());
    let sx = dense::scale(dense::re(0.5), &dense::add(&s_plus, &s_minus));
    let sy = dense::scale(C64::new(0.0, -0.5), &dense::sub(&s_plus, &s_minus));
    Ok(SpinOperators { two_s, dim, sx, sy, sz, s_plus, s_minus })
}

/// `S_a . S_b` on `C^{dim_a} ⊗ C^{dim_b}`.
pub fn heisenberg_coupling(a: &SpinOperators, b: &SpinOperators) -> DenseMatrix {
    let mut out = dense::zeros(a.dim * b.dim, a.dim * b.dim);
    for (x, y) in a.components().into_iter().zip(b.components()) {
        out = dense::add(&out, &dense::kron(x, y));
    }
    out
}

fn check_cg_range(two_s_a: u32, two_s_b: u32, two_j: u32) -> Result<()> {
    if two_s_a == 0 || two_s_b == 0 {
        return invalid("spins must be positive");
    }
    let lo = two_s_a.abs_diff(two_s_b);
    let hi = two_s_a + two_s_b;
    if two_j < lo || two_j > hi || (two_j + hi) % 2 != 0 {
        return invalid(format!(
            "2J = {two_j} is outside the Clebsch-Gordan series of 2s_a = {two_s_a}, 2s_b = {two_s_b}"
        ));
    }
    Ok(())
}

/// Orthogonal projector onto total spin `J = two_j / 2` in
/// `C^{two_s_a+1} ⊗ C^{two_s_b+1}`, read off the spectral decomposition of
/// the two-site Casimir `(S_a + S_b)^2`.
pub fn total_spin_projector(two_s_a: u32, two_s_b: u32, two_j: u32) -> Result<DenseMatrix> {
    check_cg_range(two_s_a, two_s_b, two_j)?;
    let a = spin_matrices(two_s_a)?;
    let b = spin_matrices(two_s_b)?;
    let dim = a.dim * b.dim;
    // (S_a + S_b)^2 = S_a^2 ⊗ 1 + 1 ⊗ S_b^2 + 2 S_a.S_b
    let sa2 = f64::from(two_s_a) / 2.0 * (f64::from(two_s_a) / 2.0 + 1.0);
    let sb2 = f64::from(two_s_b) / 2.0 * (f64::from(two_s_b) / 2.0 + 1.0);
    let mut casimir = dense::scale(dense::re(2.0), &heisenberg_coupling(&a, &b));
    for k in 0..dim {
        casimir[(k, k)] += dense::re(sa2 + sb2);
    }
    let (values, vectors) = dense::hermitian_eigen(&casimir)?;
    let j = f64::from(two_j) / 2.0;
    let target = j * (j + 1.0);
    let cols: Vec<Vec<C64>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - target).abs() < CASIMIR_CLUSTER_TOL)
        .map(|(k, _)| dense::column(&vectors, k))
        .collect();
    if cols.len() != two_j as usize + 1 {
        return invalid(format!(
            "Casimir multiplet for 2J = {two_j} has {} states, expected {}",
            cols.len(),
            two_j + 1
        ));
    }
    Ok(dense::projector_from_columns(dim, &cols))
}

/// `op` acting on sites `(site_i, site_j)` and identity elsewhere.
pub fn embed_two_site(
    op: &DenseMatrix,
    site_i: usize,
    site_j: usize,
    local_dims: &[usize],
) -> Result<SparseHermitianOperator> {
    SparseHermitianOperator::from_two_site_terms(
        local_dims,
        &[TwoSiteTerm { op, sites: (site_i, site_j) }],
    )
}

/// Commutator defect `max_ij |([sx, sy] - i sz)_ij|` over all cyclic pairs.
pub fn commutator_defect(ops: &SpinOperators) -> f64 {
    let comm = |a: &DenseMatrix, b: &DenseMatrix| {
        dense::sub(&dense::matmul(a, b), &dense::matmul(b, a))
    };
    let [x, y, z] = ops.components();
    [(x, y, z), (y, z, x), (z, x, y)]
        .iter()
        .map(|(a, b, c)| dense::max_abs_diff(&comm(a, b), &dense::scale(I, c)))
        .fold(0.0, f64::max)
}

/// `|s, s>` basis vector for a site of the given spin.
pub fn highest_weight(two_s: u32) -> Vec<C64> {
    let mut v = vec![ZERO; two_s as usize + 1];
    v[0] = dense::ONE;
    v
}
