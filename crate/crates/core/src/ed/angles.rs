//! Principal angles between ground spaces and the exact value of
//! `ε_n = ‖P_1 P_2 − P_1 ∧ P_2‖`.

use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseMatrix, C64, ZERO};
use crate::ed::eigen::{lowest_eigenpairs_of, EigenOptions};
use crate::ed::kernel::checked_kernel;
use crate::error::{invalid, Error, Result};
use crate::lattice::{self, DecoratedGraph};

/// Singular values above `1 − INTERSECTION_GAP` span the intersection.
pub const INTERSECTION_GAP: f64 = 1e-9;
/// Singular values in `[1 − AMBIGUITY_GAP, 1 − INTERSECTION_GAP]` cannot be
/// classified reliably.
pub const AMBIGUITY_GAP: f64 = 1e-6;
/// Dimension of `ker h_v` on every Y-shaped patch.
pub const HUB_KERNEL_DIM: usize = 8;

/// Splits non-increasing cosines into the intersection count and the
/// largest cosine below it (0 when there is none).
pub fn split_cosines(cosines: &[f64]) -> Result<(usize, f64)> {
    if let Some(bad) = cosines.iter().find(|&&s| s >= 1.0 - AMBIGUITY_GAP && s <= 1.0 - INTERSECTION_GAP) {
        return Err(Error::Precision(format!(
            "singular value {bad:.15} lies between the intersection cluster and the rest"
        )));
    }
    let count = cosines.iter().filter(|&&s| s > 1.0 - INTERSECTION_GAP).count();
    let eps = cosines.iter().copied().filter(|&s| s <= 1.0 - INTERSECTION_GAP).fold(0.0, f64::max);
    Ok((count, eps))
}

/// Two subspaces of a common space, given by orthonormal columns.
#[derive(Clone, Debug)]
pub struct SubspacePair {
    pub ambient_dim: usize,
    pub basis_1: Vec<Vec<C64>>,
    pub basis_2: Vec<Vec<C64>>,
    /// Non-increasing singular values of `basis_1^* basis_2`.
    pub singular_values: Vec<f64>,
}

impl SubspacePair {
    pub fn new(ambient_dim: usize, basis_1: Vec<Vec<C64>>, basis_2: Vec<Vec<C64>>) -> Result<Self> {
        for (name, b) in [("basis_1", &basis_1), ("basis_2", &basis_2)] {
            if b.is_empty() || b.iter().any(|v| v.len() != ambient_dim) {
                return invalid(format!("{name} must be nonempty with vectors of length {ambient_dim}"));
            }
            let defect = dense::orthonormality_defect(b);
            if defect > 1e-10 {
                return invalid(format!("{name} is not orthonormal (defect {defect:e})"));
            }
        }
        let overlap = DenseMatrix::from_fn(basis_1.len(), basis_2.len(), |i, j| dense::dot(&basis_1[i], &basis_2[j]));
        let singular_values = dense::singular_values(&overlap)?;
        Ok(Self { ambient_dim, basis_1, basis_2, singular_values })
    }

    pub fn swapped(&self) -> Result<Self> {
        Self::new(self.ambient_dim, self.basis_2.clone(), self.basis_1.clone())
    }

    /// `(dim(S_1 ∩ S_2), ε)`.
    pub fn epsilon(&self) -> Result<(usize, f64)> {
        split_cosines(&self.singular_values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapMethod {
    DenseSvd,
    Lanczos,
}

impl OverlapMethod {
    pub fn tag(self) -> &'static str {
        match self {
            Self::DenseSvd => "principal-angles/dense-svd",
            Self::Lanczos => "principal-angles/lanczos",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpsilonExact {
    pub n: usize,
    pub eps: f64,
    /// `dim(𝒢_1 ∩ 𝒢_2) = dim ker H_G`.
    pub intersection_dim: usize,
    /// Leading cosines, non-increasing.
    pub leading_cosines: Vec<f64>,
    pub kernel_dims: (usize, usize),
    pub method: OverlapMethod,
}

/// Kernel vectors of `h_v` as `dim(G_L) × dim(C_n)` arrays and of `h_w` as
/// `dim(C_n) × dim(G_R)` arrays.
pub struct GroundSpaces {
    pub xi: Vec<DenseMatrix>,
    pub eta: Vec<DenseMatrix>,
    pub dims: (usize, usize, usize),
}

fn region_dim(g: &DecoratedGraph, ids: &[usize]) -> usize {
    ids.iter().map(|&i| g.vertices()[i].two_s as usize + 1).product()
}

pub fn ground_spaces(n: usize, opts: &EigenOptions) -> Result<GroundSpaces> {
    let g = lattice::build_g_graph(n)?;
    let (left, right) = lattice::g_graph_halves(&g);
    let dl = region_dim(&g, &g.vertices_in(lattice::Region::Gl));
    let dc = region_dim(&g, &g.vertices_in(lattice::Region::Cn));
    let dr = region_dim(&g, &g.vertices_in(lattice::Region::Gr));
    let kernel = |ids: &[usize]| -> Result<Vec<Vec<C64>>> {
        let h = lattice::hamiltonian(&g.induced_subgraph(ids)?)?;
        Ok(checked_kernel(&h, HUB_KERNEL_DIM, opts)?.vectors)
    };
    let xi = kernel(&left)?.iter().map(|v| dense::unvectorize(v, dl, dc)).collect();
    let eta = kernel(&right)?.iter().map(|v| dense::unvectorize(v, dc, dr)).collect();
    Ok(GroundSpaces { xi, eta, dims: (dl, dc, dr) })
}

impl GroundSpaces {
    /// `M[(a,r),(l,b)] = Σ_c conj(ξ_a[l,c]) η_b[c,r]`, the overlap of the
    /// bases `ξ_a ⊗ |r>` and `|l> ⊗ η_b`.
    pub fn overlap(&self) -> DenseMatrix {
        let (dl, _, dr) = self.dims;
        let (ka, kb) = (self.xi.len(), self.eta.len());
        let mut m = dense::zeros(ka * dr, dl * kb);
        for (a, xi) in self.xi.iter().enumerate() {
            let xc = dense::conj(xi);
            for (b, eta) in self.eta.iter().enumerate() {
                let x = dense::matmul(&xc, eta); // (l, r)
                for l in 0..dl {
                    for r in 0..dr {
                        m[(a * dr + r, l * kb + b)] = x[(l, r)];
                    }
                }
            }
        }
        m
    }

    /// `y = M x` with `x` indexed `(l, b)` and `y` indexed `(a, r)`, via
    /// `u[a,c,b] = Σ_l conj(ξ_a[l,c]) x[l,b]`, never forming `M`.
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let (dl, dc, dr) = self.dims;
        let kb = self.eta.len();
        let mut u = vec![ZERO; self.xi.len() * dc * kb];
        for (a, xi) in self.xi.iter().enumerate() {
            for l in 0..dl {
                let xl = &x[l * kb..(l + 1) * kb];
                for c in 0..dc {
                    let w = xi[(l, c)].conj();
                    let slot = &mut u[(a * dc + c) * kb..(a * dc + c + 1) * kb];
                    for (s, xb) in slot.iter_mut().zip(xl) {
                        *s += w * xb;
                    }
                }
            }
        }
        y.iter_mut().for_each(|v| *v = ZERO);
        for a in 0..self.xi.len() {
            let row = &mut y[a * dr..(a + 1) * dr];
            for (b, eta) in self.eta.iter().enumerate() {
                for c in 0..dc {
                    let w = u[(a * dc + c) * kb + b];
                    for (r, yr) in row.iter_mut().enumerate() {
                        *yr += w * eta[(c, r)];
                    }
                }
            }
        }
    }

    /// `x = M^* y`, via `v[a,c,b] = Σ_r conj(η_b[c,r]) y[a,r]`.
    fn apply_adjoint(&self, y: &[C64], x: &mut [C64]) {
        let (dl, dc, dr) = self.dims;
        let kb = self.eta.len();
        let mut v = vec![ZERO; self.xi.len() * dc * kb];
        for a in 0..self.xi.len() {
            let ya = &y[a * dr..(a + 1) * dr];
            for (b, eta) in self.eta.iter().enumerate() {
                for c in 0..dc {
                    let mut acc = ZERO;
                    for (r, yr) in ya.iter().enumerate() {
                        acc += eta[(c, r)].conj() * yr;
                    }
                    v[(a * dc + c) * kb + b] = acc;
                }
            }
        }
        x.iter_mut().for_each(|z| *z = ZERO);
        for (a, xi) in self.xi.iter().enumerate() {
            for l in 0..dl {
                let xl = &mut x[l * kb..(l + 1) * kb];
                for c in 0..dc {
                    let w = xi[(l, c)];
                    for (xb, vb) in xl.iter_mut().zip(&v[(a * dc + c) * kb..(a * dc + c + 1) * kb]) {
                        *xb += w * vb;
                    }
                }
            }
        }
    }

    /// Leading `count` singular values of `M` from the top of `M^*M`.
    pub fn leading_cosines_iterative(&self, count: usize, opts: &EigenOptions) -> Result<Vec<f64>> {
        let (dl, _, dr) = self.dims;
        let (rows, cols) = (self.xi.len() * dr, dl * self.eta.len());
        let neg_gram = |x: &[C64], out: &mut [C64]| {
            let mut mid = vec![ZERO; rows];
            self.apply(x, &mut mid);
            self.apply_adjoint(&mid, out);
            out.iter_mut().for_each(|v| *v = -*v);
        };
        let (vals, _) = lowest_eigenpairs_of(cols, &neg_gram, count, opts)?;
        Ok(vals.iter().map(|v| (-v).max(0.0).sqrt()).collect())
    }
}

/// Largest `n` handled without the override.
pub const DENSE_MAX_N: usize = 2;

/// `ε_n` from the principal angles between `ker(h_v) ⊗ ℋ_{G_R}` and
/// `ℋ_{G_L} ⊗ ker(h_w)` inside `ℋ_G`.
pub fn epsilon_exact(n: usize, allow_large: bool) -> Result<EpsilonExact> {
    epsilon_exact_with(n, allow_large, &EigenOptions::default())
}

pub fn epsilon_exact_with(n: usize, allow_large: bool, opts: &EigenOptions) -> Result<EpsilonExact> {
    if n == 0 {
        return invalid("decoration number n must be at least 1");
    }
    if n > 3 {
        return invalid(format!("exact epsilon is only supported for n <= 3, got {n}"));
    }
    if n > DENSE_MAX_N && !allow_large {
        return invalid(format!("n = {n} needs the large-n override (memory and runtime guard)"));
    }
    let spaces = ground_spaces(n, opts)?;
    let kernel_dims = (spaces.xi.len(), spaces.eta.len());
    let (cosines, method) = if n <= DENSE_MAX_N {
        (dense::singular_values(&spaces.overlap())?, OverlapMethod::DenseSvd)
    } else {
        // 16 intersection directions plus a few to expose the next cosine.
        {
            let wide = EigenOptions { block_size: opts.block_size.max(8), ..opts.clone() };
            (spaces.leading_cosines_iterative(24, &wide)?, OverlapMethod::Lanczos)
        }
    };
    let (intersection_dim, eps) = split_cosines(&cosines)?;
    Ok(EpsilonExact {
        n,
        eps,
        intersection_dim,
        leading_cosines: cosines.iter().take(24).copied().collect(),
        kernel_dims,
        method,
    })
}

/// The same number with the roles of the two ground spaces exchanged
/// (singular values of `M^*`).
pub fn epsilon_exact_swapped(n: usize) -> Result<f64> {
    if n == 0 || n > DENSE_MAX_N {
        return invalid(format!("swapped check runs densely for 1 <= n <= {DENSE_MAX_N}"));
    }
    let spaces = ground_spaces(n, &EigenOptions::default())?;
    let cosines = dense::singular_values(&dense::adjoint(&spaces.overlap()))?;
    Ok(split_cosines(&cosines)?.1)
}
