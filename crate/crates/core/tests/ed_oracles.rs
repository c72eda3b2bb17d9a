//! Exact diagonalisation against independent dense oracles.

use gapcert::dense::{self, ZERO};
use gapcert::ed::{self, angles, EigenOptions, SubspacePair};
use gapcert::lattice::{self, Region};

#[test]
fn hub_kernel_matches_full_dense_spectrum() {
    let h = lattice::hamiltonian(&lattice::build_y_graph(1).unwrap()).unwrap();
    let spec = dense::hermitian_eigenvalues(&h.to_dense()).unwrap();
    let zeros = spec.iter().filter(|v| v.abs() < 1e-9).count();
    assert_eq!(zeros, 8);
    let gamma = ed::gamma_y(1).unwrap().gamma;
    assert!((gamma - spec[8]).abs() < 1e-10, "{gamma} vs {}", spec[8]);
    assert!(spec[0] > -1e-10);
}

#[test]
fn sparse_solver_agrees_with_dense_on_the_hub_patch() {
    let h = lattice::hamiltonian(&lattice::build_y_graph(1).unwrap()).unwrap();
    let spec = dense::hermitian_eigenvalues(&h.to_dense()).unwrap();
    let opts = EigenOptions { dense_crossover: 4, ..EigenOptions::default() };
    let got = ed::lowest_eigenpairs(&h, 12, &opts).unwrap();
    for (a, b) in got.eigenvalues.iter().zip(&spec) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn smallest_torus_is_frustration_free() {
    let g = lattice::build_decorated_torus(1, 1, 1).unwrap();
    let h = lattice::hamiltonian(&g).unwrap();
    assert_eq!(h.dim(), 432);
    let spec = dense::hermitian_eigenvalues(&h.to_dense()).unwrap();
    assert!(spec[0].abs() < 1e-10);
}

#[test]
fn g_patch_is_ordered_left_centre_right() {
    for n in 1..=3 {
        let g = lattice::build_g_graph(n).unwrap();
        let (gl, cn, gr) = (g.vertices_in(Region::Gl), g.vertices_in(Region::Cn), g.vertices_in(Region::Gr));
        let all: Vec<usize> = gl.iter().chain(&cn).chain(&gr).copied().collect();
        assert_eq!(all, (0..g.vertices().len()).collect::<Vec<_>>());
    }
}

/// Bases `ξ_a ⊗ |r>` and `|l> ⊗ η_b` written out in the full space of `G`.
fn explicit_pair(n: usize) -> SubspacePair {
    let s = angles::ground_spaces(n, &EigenOptions::default()).unwrap();
    let (dl, dc, dr) = s.dims;
    let dim = dl * dc * dr;
    let mut b1 = Vec::new();
    for xi in &s.xi {
        for r in 0..dr {
            let mut v = vec![ZERO; dim];
            for l in 0..dl {
                for c in 0..dc {
                    v[(l * dc + c) * dr + r] = xi[(l, c)];
                }
            }
            b1.push(v);
        }
    }
    let mut b2 = Vec::new();
    for l in 0..dl {
        for eta in &s.eta {
            let mut v = vec![ZERO; dim];
            for c in 0..dc {
                for r in 0..dr {
                    v[(l * dc + c) * dr + r] = eta[(c, r)];
                }
            }
            b2.push(v);
        }
    }
    SubspacePair::new(dim, b1, b2).unwrap()
}

#[test]
fn explicit_subspaces_reproduce_epsilon_one() {
    let pair = explicit_pair(1);
    let (k, eps) = pair.epsilon().unwrap();
    let fast = ed::epsilon_exact(1, false).unwrap();
    assert_eq!(k, fast.intersection_dim);
    assert!((eps - fast.eps).abs() < 1e-10, "{eps} vs {}", fast.eps);
    let (k_sw, eps_sw) = pair.swapped().unwrap().epsilon().unwrap();
    assert_eq!(k_sw, k);
    assert!((eps_sw - eps).abs() < 1e-10);
    assert!((fast.eps - 0.478).abs() < 2e-3);
}

#[test]
fn intersection_is_the_ground_space_of_the_patch() {
    let fast = ed::epsilon_exact(1, false).unwrap();
    let h = lattice::hamiltonian(&lattice::build_g_graph(1).unwrap()).unwrap();
    let ker = ed::kernel_basis(&h, 1e-8).unwrap();
    assert_eq!(ker.dim, fast.intersection_dim);
    assert_eq!(ker.dim, 16);
}

#[test]
fn epsilon_is_symmetric_and_deterministic() {
    let a = ed::epsilon_exact(1, false).unwrap();
    let b = ed::epsilon_exact(1, false).unwrap();
    assert_eq!(a.eps.to_bits(), b.eps.to_bits());
    let swapped = angles::epsilon_exact_swapped(1).unwrap();
    assert!((swapped - a.eps).abs() < 1e-10);
}

#[test]
fn implicit_cosines_match_dense_svd() {
    let s = angles::ground_spaces(1, &EigenOptions::default()).unwrap();
    let dense_sv = dense::singular_values(&s.overlap()).unwrap();
    let opts = EigenOptions { block_size: 8, ..EigenOptions::default() };
    let iter = s.leading_cosines_iterative(20, &opts).unwrap();
    for (a, b) in iter.iter().zip(&dense_sv) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn large_n_needs_override() {
    assert!(ed::epsilon_exact(3, false).is_err());
    assert!(ed::epsilon_exact(0, false).is_err());
    assert!(ed::epsilon_exact(4, true).is_err());
}

#[test]
fn fnw_sweep_is_exact_on_random_projectors() {
    let s = ed::fnw_sweep(100, 4, 10, 7).unwrap();
    assert!(s.worst_residual > -1e-10, "{}", s.worst_residual);
    assert!(s.nontrivial_meets > 0);
}

#[test]
fn torus_inequalities_hold() {
    let t = ed::torus_checks(1, 1, 1).unwrap();
    assert_eq!(t.kernel_dim, t.tilde_kernel_dim);
    assert!(t.sum_lower_margin > -1e-10);
    assert!(t.sum_upper_margin > -1e-10);
    assert!(t.comparable_lower_margin > -1e-10);
    assert!(t.comparable_upper_margin > -1e-10);
    assert!(t.square_identity_defect < 1e-10);
    assert!(t.fnw_min_residual > -1e-10);
}

#[test]
#[ignore = "about 90 s; run with --ignored"]
fn epsilon_three_is_below_the_transfer_bound() {
    let e = ed::epsilon_exact(3, true).unwrap();
    let eps_bound = gapcert::mps::bounds::epsilon_bound(3).unwrap().eps;
    assert_eq!(e.intersection_dim, 16);
    assert!(e.eps <= eps_bound + 1e-9, "{} vs {eps_bound}", e.eps);
}
