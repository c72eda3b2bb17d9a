//! MPS site tensors for the AKLT chain and the spin-3/2 hub tensors.
//!
//! Virtual spin-1/2 basis is `(↑, ↓)`; `C^4 = C^2 ⊗ C^2` uses
//! `(↑↑, ↑↓, ↓↑, ↓↓)`. Physical indices follow descending `m`.

use crate::dense::{self, DenseMatrix, C64};
use crate::error::{invalid, Result};
use crate::spin;

/// `d` matrices of shape `d_out × d_in`, one per physical basis state.
#[derive(Clone, Debug)]
pub struct SiteTensor {
    matrices: Vec<DenseMatrix>,
}

impl SiteTensor {
    pub fn new(matrices: Vec<DenseMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return invalid("site tensor needs at least one matrix");
        };
        let shape = (first.nrows(), first.ncols());
        if shape.0 == 0 || shape.1 == 0 {
            return invalid("site tensor matrices must be nonempty");
        }
        if let Some(k) = matrices.iter().position(|m| (m.nrows(), m.ncols()) != shape) {
            return invalid(format!("matrix {k} does not have shape {}x{}", shape.0, shape.1));
        }
        Ok(Self { matrices })
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn d_out(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn d_in(&self) -> usize {
        self.matrices[0].ncols()
    }

    pub fn matrices(&self) -> &[DenseMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &DenseMatrix {
        &self.matrices[i]
    }
}

fn up() -> Vec<C64> {
    vec![dense::ONE, dense::ZERO]
}

fn down() -> Vec<C64> {
    vec![dense::ZERO, dense::ONE]
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn psi_plus() -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    kron_vec(&up(), &down())
        .iter()
        .zip(kron_vec(&down(), &up()))
        .map(|(a, b)| (a + b) * s)
        .collect()
}

/// Singlet matrix `K = (|↑><↓| - |↓><↑|)/√2 = √2 i S^Y`.
pub fn singlet() -> DenseMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    dense::from_real_rows(&[&[0.0, s], &[-s, 0.0]])
}

/// Spin-1 intertwiner matrices `P^(1)_m`, `m = 1, 0, -1`.
pub fn spin_one_intertwiner() -> [DenseMatrix; 3] {
    let half = spin::spin_matrices(1).expect("spin-1/2 exists");
    [
        dense::outer(&up(), &up()),
        dense::scale(dense::re(2f64.sqrt()), &half.sx),
        dense::outer(&down(), &down()),
    ]
}

/// Spin-3/2 intertwiner matrices `P^(3/2)_k` (`2×4`), `k = 3/2, 1/2, -1/2, -3/2`.
pub fn spin_three_halves_intertwiner() -> [DenseMatrix; 4] {
    let (a, b) = (1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt());
    let uu = kron_vec(&up(), &up());
    let dd = kron_vec(&down(), &down());
    let pp = psi_plus();
    let combo = |x: f64, p: DenseMatrix, y: f64, q: DenseMatrix| {
        dense::add(&dense::scale(dense::re(x), &p), &dense::scale(dense::re(y), &q))
    };
    [
        dense::outer(&up(), &uu),
        combo(a, dense::outer(&down(), &uu), b, dense::outer(&up(), &pp)),
        combo(a, dense::outer(&up(), &dd), b, dense::outer(&down(), &pp)),
        dense::outer(&down(), &dd),
    ]
}

/// Bulk AKLT tensor `V_m = (2/√3) K P^(1)_m`, `m = 1, 0, -1`.
pub fn aklt_site_tensor() -> SiteTensor {
    let k = singlet();
    let c = dense::re(2.0 / 3f64.sqrt());
    let mats = spin_one_intertwiner()
        .iter()
        .map(|p| dense::scale(c, &dense::matmul(&k, p)))
        .collect();
    SiteTensor::new(mats).expect("shapes agree")
}

/// The chain tensor written as `V_1 = -√(2/3) S^+`, `V_0 = (2/√3) S^Z`,
/// `V_-1 = √(2/3) S^-`. It differs from [`aklt_site_tensor`] by the
/// reflection `m -> -m` of the physical spin, so it has the same transfer
/// operator but is not compatible with the hub tensors.
pub fn aklt_site_tensor_displayed() -> SiteTensor {
    let half = spin::spin_matrices(1).expect("spin-1/2 exists");
    let b = (2.0f64 / 3.0).sqrt();
    SiteTensor::new(vec![
        dense::scale(dense::re(-b), &half.s_plus),
        dense::scale(dense::re(2.0 / 3f64.sqrt()), &half.sz),
        dense::scale(dense::re(b), &half.s_minus),
    ])
    .expect("shapes agree")
}

/// Hub tensors `(W^L, W^R)` with `W^L_k = √2 K P_k` (`2×4`) and
/// `W^R_k = 2 (K⊗K) P_k^*` (`4×2`), `k = 3/2, 1/2, -1/2, -3/2`.
pub fn aklt_boundary_tensors() -> (SiteTensor, SiteTensor) {
    let k = singlet();
    let kk = dense::kron(&k, &k);
    let p = spin_three_halves_intertwiner();
    let left = p
        .iter()
        .map(|pk| dense::scale(dense::re(2f64.sqrt()), &dense::matmul(&k, pk)))
        .collect();
    let right = p
        .iter()
        .map(|pk| dense::scale(dense::re(2.0), &dense::matmul(&kk, &dense::adjoint(pk))))
        .collect();
    (
        SiteTensor::new(left).expect("shapes agree"),
        SiteTensor::new(right).expect("shapes agree"),
    )
}

/// `V_i ⊗ V_j` for the grouped pair site, index `3 i + j`.
fn paired(v: &SiteTensor) -> Vec<DenseMatrix> {
    let mut out = Vec::with_capacity(v.d() * v.d());
    for a in v.matrices() {
        for b in v.matrices() {
            out.push(dense::kron(a, b));
        }
    }
    out
}

/// `(V⊗V)_n ⋯ (V⊗V)_1` for every pair configuration, with pair 1 the most
/// significant index.
fn pair_chain_products(v: &SiteTensor, n: usize) -> Result<Vec<DenseMatrix>> {
    if n == 0 {
        return invalid("decoration number n must be at least 1");
    }
    let pairs = paired(v);
    let mut prods = pairs.clone();
    for _ in 1..n {
        prods = prods
            .iter()
            .flat_map(|prev| pairs.iter().map(move |p| dense::matmul(p, prev)))
            .collect();
    }
    Ok(prods)
}

/// `T^L_l = W^L_k (V_{i_n}⊗V_{j_n}) ⋯ (V_{i_1}⊗V_{j_1})` for
/// `l = ((i_1 j_1), ..., (i_n j_n), k)`, the hub index least significant.
pub fn left_region_tensor(v: &SiteTensor, w_left: &SiteTensor, n: usize) -> Result<SiteTensor> {
    let prods = pair_chain_products(v, n)?;
    let mats = prods
        .iter()
        .flat_map(|m| w_left.matrices().iter().map(move |wk| dense::matmul(wk, m)))
        .collect();
    SiteTensor::new(mats)
}

/// `T^R_r = (V_{i_n}⊗V_{j_n}) ⋯ (V_{i_1}⊗V_{j_1}) W^R_k` for
/// `r = ((i_1 j_1), ..., (i_n j_n), k)`.
pub fn right_region_tensor(v: &SiteTensor, w_right: &SiteTensor, n: usize) -> Result<SiteTensor> {
    let prods = pair_chain_products(v, n)?;
    let mats = prods
        .iter()
        .flat_map(|m| w_right.matrices().iter().map(move |wk| dense::matmul(m, wk)))
        .collect();
    SiteTensor::new(mats)
}

pub fn aklt_left_region_tensor(n: usize) -> Result<SiteTensor> {
    left_region_tensor(&aklt_site_tensor(), &aklt_boundary_tensors().0, n)
}

pub fn aklt_right_region_tensor(n: usize) -> Result<SiteTensor> {
    right_region_tensor(&aklt_site_tensor(), &aklt_boundary_tensors().1, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_is_sqrt2_i_sy() {
        let half = spin::spin_matrices(1).unwrap();
        let expected = dense::scale(C64::new(0.0, 2f64.sqrt()), &half.sy);
        assert!(dense::max_abs_diff(&singlet(), &expected) < 1e-15);
    }

    #[test]
    fn region_tensors_have_expected_shapes() {
        let tl = aklt_left_region_tensor(1).unwrap();
        assert_eq!((tl.d(), tl.d_out(), tl.d_in()), (36, 2, 4));
        let tr = aklt_right_region_tensor(2).unwrap();
        assert_eq!((tr.d(), tr.d_out(), tr.d_in()), (324, 4, 2));
    }

    #[test]
    fn empty_tensor_is_rejected() {
        assert!(SiteTensor::new(Vec::new()).is_err());
        assert!(aklt_left_region_tensor(0).is_err());
    }
}
