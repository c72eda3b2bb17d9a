//! Lowest eigenpairs of sparse Hermitian operators.
//!
//! The operator is first split into the connected components of its
//! sparsity graph (for spin Hamiltonians these are the magnetization
//! sectors). Small blocks are diagonalized densely; large ones with an
//! explicitly restarted Lanczos iteration using full reorthogonalization
//! and locking of converged Ritz pairs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::{self, DenseMatrix, C64, ZERO};
use crate::error::{invalid, Error, Result};
use crate::sparse::{CsrMatrix, SparseHermitianOperator};

/// Contract on every returned eigenpair.
pub const RESIDUAL_CONTRACT: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// Blocks up to this size are diagonalized densely.
    pub dense_crossover: usize,
    /// Largest basis before a thick restart.
    pub krylov_dim: usize,
    /// Number of Ritz pairs expanded per step; should exceed the largest
    /// multiplicity within one sparsity block.
    pub block_size: usize,
    /// Iteration budget, in units of `krylov_dim` steps.
    pub max_restarts: usize,
    /// Ritz pairs are locked once `‖Hv − θv‖` drops below this.
    pub lock_tol: f64,
    pub seed: u64,
    pub want_vectors: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            dense_crossover: 1024,
            krylov_dim: 120,
            block_size: 4,
            max_restarts: 50,
            lock_tol: 1e-10,
            seed: crate::DEFAULT_SEED,
            want_vectors: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors in the full basis, when requested.
    pub vectors: Option<Vec<Vec<C64>>>,
    pub residual_norms: Vec<f64>,
}

/// One eigenpair found inside a block, in block coordinates.
struct Pair {
    value: f64,
    vector: Vec<C64>,
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// `w -= Σ_q <q, w> q`, twice for stability.
fn orthogonalize(w: &mut [C64], against: &[Vec<C64>]) {
    for _ in 0..2 {
        for q in against {
            let c = dense::dot(q, w);
            if c != ZERO {
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
    }
}

fn scale_in_place(v: &mut [C64], s: f64) {
    for x in v {
        *x *= s;
    }
}

/// Gershgorin lower bound on the spectrum.
fn gershgorin_min(a: &CsrMatrix) -> f64 {
    (0..a.dim())
        .map(|r| {
            let (mut diag, mut off) = (0.0, 0.0);
            for (c, v) in a.row(r) {
                if c == r {
                    diag += v.re;
                } else {
                    off += v.norm();
                }
            }
            diag - off
        })
        .fold(f64::INFINITY, f64::min)
}

fn dense_block(a: &CsrMatrix, keep: &mut dyn FnMut(usize, f64) -> bool) -> Result<Vec<Pair>> {
    let (vals, vecs) = dense::hermitian_eigen(&a.to_dense())?;
    let mut out = Vec::new();
    for (k, &value) in vals.iter().enumerate() {
        let go_on = keep(out.len(), value);
        out.push(Pair { value, vector: dense::column(&vecs, k) });
        if !go_on {
            break;
        }
    }
    Ok(out)
}

/// Ascending eigenpairs of one block until `keep(count, value)` is false
/// (the rejected pair is still returned, as the first value past the stop)
/// or the block is exhausted.
///
/// Block Krylov iteration with thick restarts: the basis grows by the
/// residuals of the `block_size` lowest Ritz pairs, is fully
/// reorthogonalized against itself and the locked vectors, and is cut back
/// to its lowest Ritz vectors when it reaches `krylov_dim`. A block larger
/// than the multiplicity of each eigenvalue within a sector lets degenerate
/// partners enter the basis together.
fn lanczos_block(
    n: usize,
    apply: &dyn Fn(&[C64], &mut [C64]),
    opts: &EigenOptions,
    rng: &mut ChaCha8Rng,
    keep: &mut dyn FnMut(usize, f64) -> bool,
) -> Result<Vec<Pair>> {
    let bs = opts.block_size.clamp(1, n);
    let max_basis = opts.krylov_dim.max(3 * bs).min(n);
    let mut locked: Vec<Vec<C64>> = Vec::new();
    let mut out: Vec<Pair> = Vec::new();
    let mut q: Vec<Vec<C64>> = Vec::new();
    let mut w: Vec<Vec<C64>> = Vec::new();
    // Projected matrix Q^* H Q, kept in step with q.
    let mut t: Vec<Vec<C64>> = Vec::new();
    let mut pending: Vec<Vec<C64>> = (0..bs).map(|_| random_vector(rng, n)).collect();
    let mut steps = 0usize;

    let combine = |basis: &[Vec<C64>], y: &DenseMatrix, col: usize| -> Vec<C64> {
        let mut out = vec![ZERO; n];
        for (j, v) in basis.iter().enumerate() {
            let c = y[(j, col)];
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    };

    loop {
        for mut v in pending.drain(..) {
            orthogonalize(&mut v, &locked);
            orthogonalize(&mut v, &q);
            let nv = dense::norm(&v);
            if nv < 1e-10 {
                continue;
            }
            scale_in_place(&mut v, 1.0 / nv);
            let mut hv = vec![ZERO; n];
            apply(&v, &mut hv);
            let col: Vec<C64> = q.iter().map(|qi| dense::dot(qi, &hv)).collect();
            for (row, c) in t.iter_mut().zip(&col) {
                row.push(*c);
            }
            let mut last: Vec<C64> = col.iter().map(|c| c.conj()).collect();
            last.push(dense::re(dense::dot(&v, &hv).re));
            t.push(last);
            q.push(v);
            w.push(hv);
        }
        if locked.len() + q.len() == 0 || (q.is_empty() && locked.len() < n) {
            pending = (0..bs).map(|_| random_vector(rng, n)).collect();
            continue;
        }
        if q.is_empty() {
            break;
        }
        steps += 1;

        let k = q.len();
        let tm = DenseMatrix::from_fn(k, k, |i, j| t[i][j]);
        let (theta, y) = dense::hermitian_eigen(&dense::hermitian_part(&tm))?;
        let residual_of = |i: usize| -> (Vec<C64>, Vec<C64>) {
            let x = combine(&q, &y, i);
            let mut r = combine(&w, &y, i);
            for (ri, xi) in r.iter_mut().zip(&x) {
                *ri -= xi * theta[i];
            }
            (x, r)
        };

        let (x0, r0) = residual_of(0);
        let r0_norm = dense::norm(&r0);
        if r0_norm < opts.lock_tol || locked.len() + k == n {
            let go_on = keep(out.len(), theta[0]);
            locked.push(x0.clone());
            out.push(Pair { value: theta[0], vector: x0 });
            if !go_on || locked.len() == n {
                break;
            }
            // Deflate the locked vector out of the basis and inject a fresh
            // random direction.
            let rest: Vec<usize> = (1..k).collect();
            restrict_basis(&mut q, &mut w, &mut t, &y, &theta, &rest, &combine);
            pending = vec![random_vector(rng, n)];
            continue;
        }
        if steps > opts.max_restarts * opts.krylov_dim {
            return Err(Error::Convergence { iterations: steps, residuals: vec![r0_norm] });
        }

        let targets = bs.min(k);
        if k + targets > max_basis.min(n - locked.len()) {
            let keep_count = (max_basis / 3).max(bs).min(k);
            let lowest: Vec<usize> = (0..keep_count).collect();
            restrict_basis(&mut q, &mut w, &mut t, &y, &theta, &lowest, &combine);
            // Expansion directions are the residuals of the kept Ritz
            // vectors, which are exactly the new basis vectors' residuals.
        }
        let k = q.len();
        let tm = DenseMatrix::from_fn(k, k, |i, j| t[i][j]);
        let (theta, y) = dense::hermitian_eigen(&dense::hermitian_part(&tm))?;
        pending = (0..bs.min(k))
            .map(|i| {
                let x = combine(&q, &y, i);
                let mut r = combine(&w, &y, i);
                for (ri, xi) in r.iter_mut().zip(&x) {
                    *ri -= xi * theta[i];
                }
                if dense::norm(&r) < 1e-13 {
                    random_vector(rng, n)
                } else {
                    r
                }
            })
            .collect();
    }
    verify_nothing_missed(n, apply, &locked, &out, rng)?;
    Ok(out)
}

/// Replaces the basis by the Ritz vectors `cols`, whose projected matrix is
/// diagonal.
fn restrict_basis(
    q: &mut Vec<Vec<C64>>,
    w: &mut Vec<Vec<C64>>,
    t: &mut Vec<Vec<C64>>,
    y: &DenseMatrix,
    theta: &[f64],
    cols: &[usize],
    combine: &dyn Fn(&[Vec<C64>], &DenseMatrix, usize) -> Vec<C64>,
) {
    let new_q: Vec<Vec<C64>> = cols.iter().map(|&c| combine(q, y, c)).collect();
    let new_w: Vec<Vec<C64>> = cols.iter().map(|&c| combine(w, y, c)).collect();
    *q = new_q;
    *w = new_w;
    *t = cols
        .iter()
        .enumerate()
        .map(|(i, _)| cols.iter().enumerate().map(|(j, &c)| if i == j { dense::re(theta[c]) } else { ZERO }).collect())
        .collect();
}

/// A short Krylov run from a fresh random vector in the complement of the
/// locked space. Ritz values bound the complement's spectrum from above, so
/// one below the largest locked value proves that an eigenvalue was missed.
fn verify_nothing_missed(
    n: usize,
    apply: &dyn Fn(&[C64], &mut [C64]),
    locked: &[Vec<C64>],
    out: &[Pair],
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let Some(top) = out.iter().map(|p| p.value).reduce(f64::max) else {
        return Ok(());
    };
    let room = n - locked.len();
    if room == 0 {
        return Ok(());
    }
    let steps = room.min(40);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(steps);
    let mut v = random_vector(rng, n);
    let mut proj = Vec::with_capacity(steps);
    for _ in 0..steps {
        orthogonalize(&mut v, locked);
        orthogonalize(&mut v, &basis);
        let nv = dense::norm(&v);
        if nv < 1e-10 {
            break;
        }
        scale_in_place(&mut v, 1.0 / nv);
        let mut hv = vec![ZERO; n];
        apply(&v, &mut hv);
        basis.push(v);
        proj.push(hv.clone());
        v = hv;
    }
    let k = basis.len();
    let tm = DenseMatrix::from_fn(k, k, |i, j| dense::dot(&basis[i], &proj[j]));
    let lowest = dense::hermitian_eigenvalues(&dense::hermitian_part(&tm))?[0];
    if lowest < top - 1e-8 * top.abs().max(1.0) {
        return Err(Error::Convergence {
            iterations: k,
            residuals: vec![top - lowest],
        });
    }
    Ok(())
}

/// Runs `solve` on each block, most promising first, and returns all
/// collected pairs in full-basis coordinates, ascending.
fn solve_blocks(
    h: &SparseHermitianOperator,
    opts: &EigenOptions,
    mut per_block: impl FnMut(&[(f64, usize, Vec<C64>)]) -> BlockPlan,
) -> Result<Vec<(f64, Vec<C64>)>> {
    let csr = h.csr();
    let mut blocks = csr.connected_blocks();
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found: Vec<(f64, usize, Vec<C64>)> = Vec::new();
    for (bi, idx) in blocks.iter().enumerate() {
        let block = csr.restrict(idx);
        let plan = per_block(&found);
        if gershgorin_min(&block) > plan.skip_above {
            continue;
        }
        let mut keep = plan.keep;
        let pairs = if idx.len() <= opts.dense_crossover {
            dense_block(&block, &mut *keep)?
        } else {
            lanczos_block(idx.len(), &|x, y| block.matvec(x, y), opts, &mut rng, &mut *keep)?
        };
        for p in pairs {
            found.push((p.value, bi, scatter(&p.vector, idx, h.dim())));
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    Ok(found.into_iter().map(|(v, _, x)| (v, x)).collect())
}

struct BlockPlan {
    skip_above: f64,
    keep: Box<dyn FnMut(usize, f64) -> bool>,
}

fn scatter(v: &[C64], idx: &[usize], dim: usize) -> Vec<C64> {
    let mut out = vec![ZERO; dim];
    for (x, &i) in v.iter().zip(idx) {
        out[i] = *x;
    }
    out
}

fn residual(h: &SparseHermitianOperator, value: f64, v: &[C64]) -> f64 {
    let hv = h.apply(v);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn finish(h: &SparseHermitianOperator, pairs: Vec<(f64, Vec<C64>)>, want_vectors: bool) -> Result<EigenResult> {
    let residual_norms: Vec<f64> = pairs.iter().map(|(v, x)| residual(h, *v, x)).collect();
    if let Some(worst) = residual_norms.iter().copied().reduce(f64::max) {
        if worst >= RESIDUAL_CONTRACT {
            return Err(Error::Convergence { iterations: 0, residuals: residual_norms });
        }
    }
    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let vectors = want_vectors.then(|| pairs.into_iter().map(|p| p.1).collect());
    Ok(EigenResult { eigenvalues, vectors, residual_norms })
}

/// The `k` smallest eigenvalues (with multiplicity).
pub fn lowest_eigenvalues(h: &SparseHermitianOperator, k: usize) -> Result<EigenResult> {
    if k >= h.dim() {
        return invalid(format!("need 1 <= k < dimension ({}), got k = {k}", h.dim()));
    }
    lowest_eigenpairs(h, k, &EigenOptions::default())
}

/// As `lowest_eigenvalues`, but `k` may equal the dimension.
pub fn lowest_eigenpairs(h: &SparseHermitianOperator, k: usize, opts: &EigenOptions) -> Result<EigenResult> {
    if k == 0 || k > h.dim() {
        return invalid(format!("need 1 <= k <= dimension ({}), got k = {k}", h.dim()));
    }
    let pairs = solve_blocks(h, opts, |found| {
        // Current k-th smallest value bounds what a later block can add.
        let threshold = if found.len() >= k { found[k - 1].0 } else { f64::INFINITY };
        BlockPlan {
            skip_above: threshold,
            keep: Box::new(move |count, value| count < k && value <= threshold),
        }
    })?;
    let mut pairs = pairs;
    pairs.truncate(k);
    if pairs.len() < k {
        return invalid("operator has fewer eigenpairs than requested");
    }
    finish(h, pairs, opts.want_vectors)
}

/// The `k` smallest eigenpairs of an implicitly given Hermitian operator,
/// always by Lanczos.
pub fn lowest_eigenpairs_of(
    dim: usize,
    apply: &dyn Fn(&[C64], &mut [C64]),
    k: usize,
    opts: &EigenOptions,
) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    if k == 0 || k >= dim {
        return invalid(format!("need 1 <= k < dimension ({dim}), got k = {k}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pairs = lanczos_block(dim, apply, opts, &mut rng, &mut |count, _| count + 1 < k)?;
    Ok(pairs.into_iter().map(|p| (p.value, p.vector)).unzip())
}

/// All eigenpairs below `tol`, plus the smallest eigenvalue at or above it
/// when the search establishes one (blocks whose Gershgorin bound exceeds
/// `separation` are skipped without diagonalization).
pub fn eigenpairs_below(
    h: &SparseHermitianOperator,
    tol: f64,
    separation: f64,
    opts: &EigenOptions,
) -> Result<(EigenResult, Option<f64>)> {
    let pairs = solve_blocks(h, opts, |_| BlockPlan {
        skip_above: separation,
        // Keep everything below tol and the first value past it.
        keep: Box::new(move |_, value| value < tol),
    })?;
    let next = pairs.iter().map(|p| p.0).find(|&v| v >= tol);
    let below: Vec<(f64, Vec<C64>)> = pairs.into_iter().filter(|p| p.0 < tol).collect();
    Ok((finish(h, below, opts.want_vectors)?, next))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal(values: &[f64]) -> SparseHermitianOperator {
        let t = values.iter().enumerate().map(|(i, &v)| (i, i, dense::re(v))).collect();
        SparseHermitianOperator::from_triplets(&[values.len()], t).unwrap()
    }

    #[test]
    fn diagonal_lowest() {
        let h = diagonal(&[3.0, 0.0, 2.0, 1.0, 5.0]);
        assert_eq!(lowest_eigenvalues(&h, 3).unwrap().eigenvalues, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn k_out_of_range() {
        let h = diagonal(&[1.0, 2.0]);
        assert!(lowest_eigenvalues(&h, 0).is_err());
        assert!(lowest_eigenvalues(&h, 2).is_err());
    }

    #[test]
    fn lanczos_agrees_with_dense_on_a_path_graph() {
        // Tridiagonal Laplacian-like matrix with a degenerate low cluster.
        let n = 400;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, dense::re(2.0 + (i % 7) as f64 * 0.01)));
            if i + 1 < n {
                t.push((i, i + 1, C64::new(-1.0, 0.1)));
                t.push((i + 1, i, C64::new(-1.0, -0.1)));
            }
        }
        let h = SparseHermitianOperator::from_triplets(&[n], t).unwrap();
        let dense_vals = dense::hermitian_eigenvalues(&h.to_dense()).unwrap();
        let opts = EigenOptions { dense_crossover: 10, krylov_dim: 60, ..Default::default() };
        let r = lowest_eigenpairs(&h, 6, &opts).unwrap();
        for (a, b) in r.eigenvalues.iter().zip(&dense_vals) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
