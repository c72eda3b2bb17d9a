//! The projector inequality `EF + FE ≥ −‖EF − E∧F‖ (E + F)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseMatrix, C64};
use crate::error::{invalid, Result};

/// Eigenvalues of `EFE` above `1 − MEET_GAP` belong to `ran E ∩ ran F`.
const MEET_GAP: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FnwReport {
    /// Smallest eigenvalue of `EF + FE + ‖EF − E∧F‖(E + F)`.
    pub residual: f64,
    pub angle_norm: f64,
    pub meet_rank: usize,
}

fn projector_defect(p: &DenseMatrix) -> f64 {
    dense::max_abs_diff(&dense::matmul(p, p), p).max(dense::hermiticity_defect(p))
}

/// `E ∧ F` as the spectral projector of `EFE` at eigenvalue 1.
pub fn meet(e: &DenseMatrix, f: &DenseMatrix) -> Result<(DenseMatrix, usize)> {
    let efe = dense::hermitian_part(&dense::matmul(e, &dense::matmul(f, e)));
    let (vals, vecs) = dense::hermitian_eigen(&efe)?;
    let cols: Vec<Vec<C64>> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 1.0 - MEET_GAP)
        .map(|(k, _)| dense::column(&vecs, k))
        .collect();
    Ok((dense::projector_from_columns(e.nrows(), &cols), cols.len()))
}

pub fn fnw_check(e: &DenseMatrix, f: &DenseMatrix) -> Result<FnwReport> {
    if e.nrows() != e.ncols() || f.nrows() != f.ncols() || e.nrows() != f.nrows() {
        return invalid("E and F must be square of the same size");
    }
    for (name, p) in [("E", e), ("F", f)] {
        let defect = projector_defect(p);
        if defect > 1e-10 {
            return invalid(format!("{name} is not an orthogonal projector (defect {defect:e})"));
        }
    }
    let (m, meet_rank) = meet(e, f)?;
    let ef = dense::matmul(e, f);
    let angle_norm = dense::op_norm(&dense::sub(&ef, &m))?;
    let sym = dense::add(&ef, &dense::adjoint(&ef));
    let lhs = dense::add(&sym, &dense::scale(dense::re(angle_norm), &dense::add(e, f)));
    let residual = dense::hermitian_eigenvalues(&dense::hermitian_part(&lhs))?[0];
    Ok(FnwReport { residual, angle_norm, meet_rank })
}

/// Projector onto the span of `rank` complex Gaussian vectors in `ℂ^dim`.
pub fn random_projector(rng: &mut impl Rng, dim: usize, rank: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(rank);
    while cols.len() < rank {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        for _ in 0..2 {
            for q in &cols {
                let c = dense::dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dense::norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            cols.push(v);
        }
    }
    dense::projector_from_columns(dim, &cols)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FnwSweep {
    pub trials: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub seed: u64,
    pub worst_residual: f64,
    /// Trials in which `E ∧ F ≠ 0`.
    pub nontrivial_meets: usize,
}

/// `fnw_check` over `trials` seeded pairs with dimensions in
/// `min_dim..=max_dim` and uniformly random ranks. Every fourth pair shares
/// a planted common subspace so that nontrivial meets are exercised.
pub fn fnw_sweep(trials: usize, min_dim: usize, max_dim: usize, seed: u64) -> Result<FnwSweep> {
    if min_dim < 2 || min_dim > max_dim {
        return invalid(format!("need 2 <= min_dim <= max_dim, got {min_dim}..={max_dim}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut nontrivial = 0;
    for t in 0..trials {
        let dim = rng.random_range(min_dim..=max_dim);
        let rank = rng.random_range(1..dim);
        let e = random_projector(&mut rng, dim, rank);
        let f = if t % 4 == 3 {
            // F = (E restricted to a random subspace) + a random projector
            // orthogonal to that piece.
            let shared = dense::matmul(&e, &dense::matmul(&random_projector(&mut rng, dim, 1), &e));
            let (_, vecs) = dense::hermitian_eigen(&dense::hermitian_part(&shared))?;
            let s = dense::column(&vecs, dim - 1);
            let rank = rng.random_range(1..dim);
            let extra = random_projector(&mut rng, dim, rank);
            let keep = dense::sub(&dense::identity(dim), &dense::outer(&s, &s));
            let mut cols = vec![s];
            let (vals, evecs) = dense::hermitian_eigen(&dense::hermitian_part(&dense::matmul(
                &keep,
                &dense::matmul(&extra, &keep),
            )))?;
            cols.extend(vals.iter().enumerate().filter(|(_, &v)| v > 0.5).map(|(k, _)| dense::column(&evecs, k)));
            dense::projector_from_columns(dim, &cols)
        } else {
            let rank = rng.random_range(1..dim);
            random_projector(&mut rng, dim, rank)
        };
        let r = fnw_check(&e, &f)?;
        if r.meet_rank > 0 {
            nontrivial += 1;
        }
        worst = worst.min(r.residual);
    }
    Ok(FnwSweep { trials, min_dim, max_dim, seed, worst_residual: worst, nontrivial_meets: nontrivial })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_projectors_sit_on_the_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = random_projector(&mut rng, 5, 2);
        let r = fnw_check(&e, &e).unwrap();
        assert!(r.angle_norm < 1e-9);
        assert!(r.residual.abs() < 1e-9);
        assert_eq!(r.meet_rank, 2);
    }

    #[test]
    fn orthogonal_ranges_give_zero() {
        let e = dense::diag(&[dense::re(1.0), dense::re(0.0), dense::re(0.0)]);
        let f = dense::diag(&[dense::re(0.0), dense::re(1.0), dense::re(0.0)]);
        let r = fnw_check(&e, &f).unwrap();
        assert!(r.residual.abs() < 1e-12 && r.angle_norm < 1e-12);
        assert_eq!(r.meet_rank, 0);
    }

    #[test]
    fn rejects_non_projectors() {
        let a = dense::scale(dense::re(2.0), &dense::identity(3));
        assert!(fnw_check(&a, &dense::identity(3)).is_err());
    }
}
