//! Sparse Hermitian operators on tensor-product Hilbert spaces.
//!
//! Storage is compressed sparse rows with columns sorted inside each row, so
//! two operators assembled from the same terms are bit-identical regardless
//! of assembly order (up to floating-point summation of coincident entries).

use crate::dense::{self, DenseMatrix, C64, ZERO};
use crate::error::{invalid, Result};

/// Plain CSR matrix, square.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<C64>,
}

impl CsrMatrix {
    /// Builds from unsorted triplets; coincident entries are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return invalid(format!("dimension {n} exceeds the supported index range"));
        }
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= n || *c >= n) {
            return invalid(format!("triplet ({r}, {c}) outside a {n}x{n} operator"));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c as u32);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self { n, row_ptr, cols, vals })
    }

    fn from_parts(n: usize, row_ptr: Vec<usize>, cols: Vec<u32>, vals: Vec<C64>) -> Self {
        debug_assert_eq!(row_ptr.len(), n + 1);
        debug_assert_eq!(cols.len(), vals.len());
        Self { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[range.clone()]
            .iter()
            .zip(&self.vals[range])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *yr = acc;
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = dense::zeros(self.n, self.n);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (r, c, v) in self.triplets() {
            let mirror = self.get(c, r);
            worst = worst.max((v - mirror.conj()).norm());
        }
        worst
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&(c as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => ZERO,
        }
    }

    /// Partition of the basis into connected components of the sparsity
    /// graph. The operator is block diagonal with respect to this
    /// partition, so every eigenvector can be chosen inside one block.
    /// Blocks are listed by their smallest index; indices inside a block
    /// ascend.
    pub fn connected_blocks(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (r, c, v) in self.triplets() {
            if r != c && v != ZERO {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.n {
            let root = find(&mut parent, i);
            if label[root] == usize::MAX {
                label[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[label[root]].push(i);
        }
        blocks
    }

    /// Principal submatrix on `indices` (which must be closed under the
    /// sparsity pattern for the result to be meaningful as a block).
    pub fn restrict(&self, indices: &[usize]) -> CsrMatrix {
        let mut position = std::collections::HashMap::with_capacity(indices.len());
        for (k, &i) in indices.iter().enumerate() {
            position.insert(i, k as u32);
        }
        let mut row_ptr = Vec::with_capacity(indices.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for &r in indices {
            let mut row: Vec<(u32, C64)> = self
                .row(r)
                .filter_map(|(c, v)| position.get(&c).map(|&k| (k, v)))
                .collect();
            row.sort_by_key(|&(k, _)| k);
            for (k, v) in row {
                cols.push(k);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix::from_parts(indices.len(), row_ptr, cols, vals)
    }
}

/// Hermitian operator on `⊗_k C^{local_dims[k]}`, site 0 being the most
/// significant tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitianOperator {
    local_dims: Vec<usize>,
    csr: CsrMatrix,
}

/// A two-site operator placed on an ordered pair of sites; the first
/// tensor factor of `op` acts on `sites.0`.
#[derive(Clone, Copy, Debug)]
pub struct TwoSiteTerm<'a> {
    pub op: &'a DenseMatrix,
    pub sites: (usize, usize),
}

pub(crate) fn product_dim(local_dims: &[usize]) -> Result<usize> {
    let mut dim = 1usize;
    for &d in local_dims {
        if d == 0 {
            return invalid("local dimensions must be positive");
        }
        dim = match dim.checked_mul(d) {
            Some(v) => v,
            None => return invalid("Hilbert space dimension overflows usize"),
        };
    }
    Ok(dim)
}

fn strides(local_dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; local_dims.len()];
    for k in (0..local_dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * local_dims[k + 1];
    }
    s
}

const HERMITIAN_TOL: f64 = 1e-12;

impl SparseHermitianOperator {
    pub fn from_triplets(local_dims: &[usize], triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        let dim = product_dim(local_dims)?;
        let csr = CsrMatrix::from_triplets(dim, triplets)?;
        let defect = csr.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return invalid(format!("operator is not Hermitian (defect {defect:.3e})"));
        }
        Ok(Self { local_dims: local_dims.to_vec(), csr })
    }

    pub fn zero(local_dims: &[usize]) -> Result<Self> {
        Self::from_triplets(local_dims, Vec::new())
    }

    pub fn identity(local_dims: &[usize]) -> Result<Self> {
        let dim = product_dim(local_dims)?;
        Self::from_triplets(local_dims, (0..dim).map(|i| (i, i, dense::ONE)).collect())
    }

    /// Sum of two-site terms, assembled row by row without an intermediate
    /// triplet list.
    pub fn from_two_site_terms(local_dims: &[usize], terms: &[TwoSiteTerm<'_>]) -> Result<Self> {
        let dim = product_dim(local_dims)?;
        if dim > u32::MAX as usize {
            return invalid(format!("dimension {dim} exceeds the supported index range"));
        }
        let stride = strides(local_dims);
        struct Prepared {
            si: usize,
            sj: usize,
            di: usize,
            dj: usize,
            rows: Vec<Vec<(usize, C64)>>,
        }
        let mut prepared = Vec::with_capacity(terms.len());
        for t in terms {
            let (i, j) = t.sites;
            if i == j || i >= local_dims.len() || j >= local_dims.len() {
                return invalid(format!(
                    "invalid site pair ({i}, {j}) for {} sites",
                    local_dims.len()
                ));
            }
            let (di, dj) = (local_dims[i], local_dims[j]);
            if t.op.nrows() != di * dj || t.op.ncols() != di * dj {
                return invalid(format!(
                    "two-site operator is {}x{}, sites ({i}, {j}) need {}x{}",
                    t.op.nrows(),
                    t.op.ncols(),
                    di * dj,
                    di * dj
                ));
            }
            let defect = dense::hermiticity_defect(t.op);
            if defect > HERMITIAN_TOL {
                return invalid(format!("two-site operator is not Hermitian (defect {defect:.3e})"));
            }
            let rows = (0..di * dj)
                .map(|a| {
                    (0..di * dj)
                        .filter_map(|b| {
                            let v = t.op[(a, b)];
                            (v.norm() > 1e-15).then_some((b, v))
                        })
                        .collect()
                })
                .collect();
            prepared.push(Prepared { si: stride[i], sj: stride[j], di, dj, rows });
        }

        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0usize);
        let mut cols: Vec<u32> = Vec::new();
        let mut vals: Vec<C64> = Vec::new();
        let mut buf: Vec<(usize, C64)> = Vec::new();
        for x in 0..dim {
            buf.clear();
            for p in &prepared {
                let xi = (x / p.si) % p.di;
                let xj = (x / p.sj) % p.dj;
                let base = x - xi * p.si - xj * p.sj;
                for &(b, v) in &p.rows[xi * p.dj + xj] {
                    let (bi, bj) = (b / p.dj, b % p.dj);
                    buf.push((base + bi * p.si + bj * p.sj, v));
                }
            }
            buf.sort_by_key(|&(c, _)| c);
            let mut last = usize::MAX;
            for &(c, v) in &buf {
                if c == last {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c as u32);
                    vals.push(v);
                    last = c;
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            local_dims: local_dims.to_vec(),
            csr: CsrMatrix::from_parts(dim, row_ptr, cols, vals),
        })
    }

    pub fn dim(&self) -> usize {
        self.csr.dim()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn nnz(&self) -> usize {
        self.csr.nnz()
    }

    pub fn csr(&self) -> &CsrMatrix {
        &self.csr
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.csr.triplets()
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        self.csr.matvec(x, y)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![ZERO; self.dim()];
        self.csr.matvec(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DenseMatrix {
        self.csr.to_dense()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.csr.hermiticity_defect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.local_dims != other.local_dims {
            return invalid("cannot add operators on different tensor structures");
        }
        let triplets = self.triplets().chain(other.triplets()).collect();
        Ok(Self {
            local_dims: self.local_dims.clone(),
            csr: CsrMatrix::from_triplets(self.dim(), triplets)?,
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.csr.vals {
            *v *= s;
        }
        out
    }

    /// Largest entrywise modulus of the difference with `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut diff = other.scaled(-1.0).triplets().collect::<Vec<_>>();
        diff.extend(self.triplets());
        CsrMatrix::from_triplets(self.dim(), diff)
            .map(|m| m.vals.iter().fold(0.0f64, |acc, v| acc.max(v.norm())))
            .unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::re;

    #[test]
    fn triplets_are_summed_and_sorted() {
        let m = CsrMatrix::from_triplets(
            3,
            vec![(2, 0, re(1.0)), (0, 1, re(2.0)), (0, 1, re(0.5)), (1, 1, re(-1.0))],
        )
        .unwrap();
        assert_eq!(
            m.triplets().collect::<Vec<_>>(),
            vec![(0, 1, re(2.5)), (1, 1, re(-1.0)), (2, 0, re(1.0))]
        );
    }

    #[test]
    fn blocks_follow_sparsity_graph() {
        let m = CsrMatrix::from_triplets(
            5,
            vec![(0, 3, re(1.0)), (3, 0, re(1.0)), (1, 1, re(2.0)), (2, 4, re(1.0)), (4, 2, re(1.0))],
        )
        .unwrap();
        assert_eq!(m.connected_blocks(), vec![vec![0, 3], vec![1], vec![2, 4]]);
        let b = m.restrict(&[2, 4]);
        assert_eq!(b.triplets().collect::<Vec<_>>(), vec![(0, 1, re(1.0)), (1, 0, re(1.0))]);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let err = SparseHermitianOperator::from_triplets(&[2], vec![(0, 1, re(1.0))]);
        assert!(err.is_err());
    }
}
