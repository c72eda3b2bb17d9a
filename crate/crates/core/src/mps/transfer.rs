//! Transfer operators `B ↦ Σ_i A_i^* B A_i` as matrices on row-major
//! vectorized matrices.
//!
//! With `vec(X B Y) = (X ⊗ Y^T) vec(B)`, the map above has representation
//! `Σ_i A_i^* ⊗ A_i^T`. The Hilbert–Schmidt adjoint `E^t` is represented by
//! the conjugate transpose of the representation.

use crate::dense::{self, DenseMatrix, C64, ONE, ZERO};
use crate::error::{invalid, Result};
use crate::mps::tensor::SiteTensor;
use crate::spin;

/// Linear map `M_{dim_in} -> M_{dim_out}`; `rep` is `dim_out² × dim_in²`.
#[derive(Clone, Debug)]
pub struct TransferOperator {
    dim_in: usize,
    dim_out: usize,
    rep: DenseMatrix,
}

impl TransferOperator {
    pub fn from_rep(dim_in: usize, dim_out: usize, rep: DenseMatrix) -> Result<Self> {
        if rep.nrows() != dim_out * dim_out || rep.ncols() != dim_in * dim_in {
            return invalid(format!(
                "representation is {}x{}, expected {}x{}",
                rep.nrows(),
                rep.ncols(),
                dim_out * dim_out,
                dim_in * dim_in
            ));
        }
        Ok(Self { dim_in, dim_out, rep })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, rep: dense::identity(dim * dim) }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn rep(&self) -> &DenseMatrix {
        &self.rep
    }

    pub fn apply(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.nrows() != self.dim_in || b.ncols() != self.dim_in {
            return invalid(format!("map acts on {0}x{0} matrices", self.dim_in));
        }
        let out = dense::matvec(&self.rep, &dense::vectorize(b));
        Ok(dense::unvectorize(&out, self.dim_out, self.dim_out))
    }

    /// Hilbert–Schmidt adjoint: `Tr[A^* E(B)] = Tr[(E^t(A))^* B]`.
    pub fn transpose(&self) -> Self {
        Self { dim_in: self.dim_out, dim_out: self.dim_in, rep: dense::adjoint(&self.rep) }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        if first.dim_out != self.dim_in {
            return invalid(format!(
                "cannot compose: inner map outputs {0}x{0}, outer map expects {1}x{1}",
                first.dim_out, self.dim_in
            ));
        }
        Ok(Self {
            dim_in: first.dim_in,
            dim_out: self.dim_out,
            rep: dense::matmul(&self.rep, &first.rep),
        })
    }

    pub fn power(&self, n: u32) -> Result<Self> {
        if self.dim_in != self.dim_out {
            return invalid("only maps M_D -> M_D have powers");
        }
        let mut acc = Self::identity(self.dim_in);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.after(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.after(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self ⊗ other` acting on `M_{a} ⊗ M_{b} ≅ M_{ab}` (Kronecker layout).
    pub fn tensor(&self, other: &Self) -> Self {
        let (a_in, a_out, b_in, b_out) = (self.dim_in, self.dim_out, other.dim_in, other.dim_out);
        let dim_in = a_in * b_in;
        let dim_out = a_out * b_out;
        let mut rep = dense::zeros(dim_out * dim_out, dim_in * dim_in);
        for r1 in 0..a_out {
            for c1 in 0..a_out {
                for s1 in 0..a_in {
                    for t1 in 0..a_in {
                        let x = self.rep[(r1 * a_out + c1, s1 * a_in + t1)];
                        if x == ZERO {
                            continue;
                        }
                        for r2 in 0..b_out {
                            for c2 in 0..b_out {
                                for s2 in 0..b_in {
                                    for t2 in 0..b_in {
                                        let y = other.rep[(r2 * b_out + c2, s2 * b_in + t2)];
                                        let row = (r1 * b_out + r2) * dim_out + (c1 * b_out + c2);
                                        let col = (s1 * b_in + s2) * dim_in + (t1 * b_in + t2);
                                        rep[(row, col)] += x * y;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Self { dim_in, dim_out, rep }
    }

    pub fn tensor_square(&self) -> Self {
        self.tensor(self)
    }

    /// `|x><y|`: `B ↦ x Tr(y^* B)`.
    pub fn rank_one(x: &DenseMatrix, y: &DenseMatrix) -> Result<Self> {
        if x.nrows() != x.ncols() || y.nrows() != y.ncols() {
            return invalid("rank-one maps need square matrices");
        }
        let rep = dense::outer(&dense::vectorize(x), &dense::vectorize(y));
        Self::from_rep(y.nrows(), x.nrows(), rep)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return invalid("cannot add maps between different spaces");
        }
        Ok(Self { rep: dense::add(&self.rep, &other.rep), ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { rep: dense::scale(dense::re(s), &self.rep), ..*self }
    }

    /// Choi matrix `Σ_{ij} |i><j| ⊗ E(|i><j|)`.
    pub fn choi(&self) -> DenseMatrix {
        let (di, d) = (self.dim_in, self.dim_out);
        let mut c = dense::zeros(di * d, di * d);
        for i in 0..di {
            for j in 0..di {
                for r in 0..d {
                    for s in 0..d {
                        c[(i * d + r, j * d + s)] = self.rep[(r * d + s, i * di + j)];
                    }
                }
            }
        }
        c
    }

    /// Smallest eigenvalue of the Hermitian part of the Choi matrix.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        let c = self.choi();
        let vals = dense::hermitian_eigenvalues(&dense::hermitian_part(&c))?;
        Ok(vals.first().copied().unwrap_or(0.0))
    }

    pub fn spectrum(&self) -> Result<Vec<C64>> {
        if self.dim_in != self.dim_out {
            return invalid("spectrum needs a map M_D -> M_D");
        }
        dense::eigenvalues(&self.rep)
    }

    /// `max |E(1) - 1|` entrywise.
    pub fn unitality_defect(&self) -> Result<f64> {
        if self.dim_in != self.dim_out {
            return Ok(f64::INFINITY);
        }
        let out = self.apply(&dense::identity(self.dim_in))?;
        Ok(dense::max_abs_diff(&out, &dense::identity(self.dim_out)))
    }

    /// Operator norm of the representation (Hilbert–Schmidt induced).
    pub fn hs_norm(&self) -> Result<f64> {
        dense::op_norm(&self.rep)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return f64::INFINITY;
        }
        dense::max_abs_diff(&self.rep, &other.rep)
    }
}

/// `B ↦ Σ_i A_i^* B A_i` for the matrices `A_i` of `t` (`M_{d_out} -> M_{d_in}`).
pub fn transfer_operator(t: &SiteTensor) -> TransferOperator {
    let (rows, cols) = (t.d_out(), t.d_in());
    let mut rep = dense::zeros(cols * cols, rows * rows);
    for a in t.matrices() {
        let term = dense::kron(&dense::adjoint(a), &dense::transpose(a));
        rep = dense::add(&rep, &term);
    }
    TransferOperator { dim_in: rows, dim_out: cols, rep }
}

/// `parts[0]^{n_0} ∘ parts[1]^{n_1} ∘ ⋯`, written as in a formula: the last
/// factor acts first.
pub fn compose_and_power(parts: &[(&TransferOperator, u32)]) -> Result<TransferOperator> {
    let raised = |op: &TransferOperator, n: u32| {
        if n == 1 {
            Ok(op.clone())
        } else {
            op.power(n)
        }
    };
    let Some(((last, n_last), rest)) = parts.split_last() else {
        return invalid("nothing to compose");
    };
    let mut acc = raised(last, *n_last)?;
    for (op, n) in rest.iter().rev() {
        acc = raised(op, *n)?.after(&acc)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct FixedPoint {
    /// Density matrix with `E^t(rho) = rho`.
    pub rho: DenseMatrix,
    /// Unique peripheral eigenvalue and nonsingular `rho`.
    pub primitive: bool,
    /// Largest modulus among the non-peripheral eigenvalues; equal to 1
    /// when the peripheral spectrum is degenerate.
    pub second_modulus: f64,
}

const UNITAL_TOL: f64 = 1e-10;
const PERIPHERAL_TOL: f64 = 1e-10;

/// Fixed point of `E^t` for a unital map `E` on `M_D`.
pub fn fixed_point(e: &TransferOperator) -> Result<FixedPoint> {
    if e.dim_in != e.dim_out {
        return invalid("fixed point needs a map M_D -> M_D");
    }
    let defect = e.unitality_defect()?;
    if defect > UNITAL_TOL {
        return invalid(format!("map is not unital (defect {defect:.3e})"));
    }
    let d = e.dim_in;
    let mut moduli: Vec<f64> = e.spectrum()?.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let peripheral = moduli.iter().filter(|&&m| m > 1.0 - PERIPHERAL_TOL).count();
    let second_modulus = moduli.get(1).copied().unwrap_or(0.0);

    let et = e.transpose();
    let mut shifted = et.rep.clone();
    for k in 0..d * d {
        shifted[(k, k)] -= ONE;
    }
    let (_, s, v) = dense::svd(&shifted)?;
    let null_dim = s.iter().filter(|&&x| x < PERIPHERAL_TOL).count();
    let rho = if null_dim == 1 {
        let col = dense::column(&v, d * d - 1);
        let m = dense::unvectorize(&col, d, d);
        let tr = dense::trace(&m);
        dense::hermitian_part(&dense::scale(ONE / tr, &m))
    } else {
        // Cesàro average of the lazy iteration started at the maximally
        // mixed state.
        let lazy = et.add(&TransferOperator::identity(d))?.scaled(0.5);
        let mut x = dense::scale(dense::re(1.0 / d as f64), &dense::identity(d));
        let mut avg = dense::zeros(d, d);
        let steps = 2000;
        for _ in 0..steps {
            avg = dense::add(&avg, &x);
            x = lazy.apply(&x)?;
        }
        dense::hermitian_part(&dense::scale(dense::re(1.0 / steps as f64), &avg))
    };
    let rho_min = dense::hermitian_eigenvalues(&rho)?.first().copied().unwrap_or(0.0);
    Ok(FixedPoint {
        rho,
        primitive: peripheral == 1 && null_dim == 1 && rho_min > 1e-12,
        second_modulus,
    })
}

/// `a(n) = ‖E^n − |1><ρ|‖` in the Hilbert–Schmidt induced norm.
pub fn a_of_n(e: &TransferOperator, rho: &DenseMatrix, n: u32) -> Result<f64> {
    let pi = TransferOperator::rank_one(&dense::identity(e.dim_out), rho)?;
    e.power(n)?.sub(&pi)?.hs_norm()
}

/// Closed form of `a(n)` for the AKLT chain.
pub fn aklt_a_of_n(n: u32) -> f64 {
    3f64.powi(-(n as i32))
}

fn half_spin() -> spin::SpinOperators {
    spin::spin_matrices(1).expect("spin-1/2 exists")
}

/// `|1><ρ| + 2(−1)^n 3^{−n} Σ_U |S^U><S^U|` with `ρ = 1/2`.
pub fn aklt_bulk_power_closed_form(n: u32) -> TransferOperator {
    let s = half_spin();
    let rho = dense::scale(dense::re(0.5), &dense::identity(2));
    let mut out = TransferOperator::rank_one(&dense::identity(2), &rho).expect("square");
    let c = 2.0 * (-1f64).powi(n as i32) * 3f64.powi(-(n as i32));
    for u in s.components() {
        let term = TransferOperator::rank_one(u, u).expect("square").scaled(c);
        out = out.add(&term).expect("same spaces");
    }
    out
}

/// `S·S = Σ_U S^U ⊗ S^U` on `C^2 ⊗ C^2`.
pub fn spin_dot_spin() -> DenseMatrix {
    let s = half_spin();
    spin::heisenberg_coupling(&s, &s)
}

/// `Ω^U = S^U ⊗ 1 + 1 ⊗ S^U`.
pub fn omega(u: &DenseMatrix) -> DenseMatrix {
    let id = dense::identity(2);
    dense::add(&dense::kron(u, &id), &dense::kron(&id, u))
}

/// `|1⊗1><ρ| + 2(−1)^{n+1} 3^{−(n+1)} Σ_U |Ω^U><S^U| + 4·3^{−(2n+1)} |S·S><ρ|`.
pub fn aklt_left_closed_form(n: u32) -> TransferOperator {
    let s = half_spin();
    let rho = dense::scale(dense::re(0.5), &dense::identity(2));
    let n = n as i32;
    let mut out = TransferOperator::rank_one(&dense::identity(4), &rho).expect("square");
    let c = 2.0 * (-1f64).powi(n + 1) * 3f64.powi(-(n + 1));
    for u in s.components() {
        let term = TransferOperator::rank_one(&omega(u), u).expect("square").scaled(c);
        out = out.add(&term).expect("same spaces");
    }
    let ss = TransferOperator::rank_one(&spin_dot_spin(), &rho)
        .expect("square")
        .scaled(4.0 * 3f64.powi(-(2 * n + 1)));
    out.add(&ss).expect("same spaces")
}

/// AKLT transfer operators for one decoration number.
#[derive(Clone, Debug)]
pub struct AkltTransfer {
    pub n: u32,
    pub bulk: TransferOperator,
    pub left_hub: TransferOperator,
    pub right_hub: TransferOperator,
    pub left: TransferOperator,
    pub right: TransferOperator,
}

impl AkltTransfer {
    /// `E_L = (E^n ⊗ E^n) ∘ E^⊳` and `E_R = E^⊲ ∘ (E^n ⊗ E^n)`.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return invalid("decoration number n must be at least 1");
        }
        let bulk = transfer_operator(&super::tensor::aklt_site_tensor());
        let (wl, wr) = super::tensor::aklt_boundary_tensors();
        let left_hub = transfer_operator(&wl);
        let right_hub = transfer_operator(&wr);
        let legs = bulk.power(n)?.tensor_square();
        let left = compose_and_power(&[(&legs, 1), (&left_hub, 1)])?;
        let right = compose_and_power(&[(&right_hub, 1), (&legs, 1)])?;
        Ok(Self { n, bulk, left_hub, right_hub, left, right })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_is_hs_adjoint() {
        let a = dense::from_rows(&[
            &[C64::new(1.0, 0.5), C64::new(0.0, -1.0)],
            &[C64::new(2.0, 0.0), C64::new(0.3, 0.2)],
            &[C64::new(-1.0, 1.0), C64::new(0.0, 0.0)],
        ]);
        let e = transfer_operator(&SiteTensor::new(vec![a]).unwrap());
        let x = dense::from_rows(&[&[ONE, C64::new(0.0, 2.0)], &[C64::new(1.0, -1.0), dense::re(3.0)]]);
        let b = dense::from_rows(&[
            &[ONE, dense::re(2.0), C64::new(0.0, 1.0)],
            &[dense::re(-1.0), C64::new(1.0, 1.0), ZERO],
            &[dense::re(0.5), ZERO, dense::re(2.0)],
        ]);
        let lhs = dense::trace(&dense::matmul(&dense::adjoint(&x), &e.apply(&b).unwrap()));
        let rhs = dense::trace(&dense::matmul(&dense::adjoint(&e.transpose().apply(&x).unwrap()), &b));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn power_zero_is_identity() {
        let e = transfer_operator(&super::super::tensor::aklt_site_tensor());
        assert!(e.power(0).unwrap().max_abs_diff(&TransferOperator::identity(2)) < 1e-15);
    }

    #[test]
    fn non_unital_map_has_no_fixed_point() {
        let e = TransferOperator::identity(2).scaled(2.0);
        assert!(fixed_point(&e).is_err());
    }

    #[test]
    fn composition_checks_dimensions() {
        let e = TransferOperator::identity(2);
        let f = TransferOperator::identity(3);
        assert!(e.after(&f).is_err());
    }
}
