//! MPS tensors against their explicit matrix forms, and the transfer
//! operators against closed forms and brute-force contractions.

use gapcert::dense::{self, DenseMatrix, C64, ZERO};
use gapcert::lattice;
use gapcert::mps::{bounds, gamma, tensor, transfer};

const TOL: f64 = 1e-12;

fn ket(bits: &[usize]) -> Vec<C64> {
    // Qubit basis with |up> = 0, |down> = 1; first factor most significant.
    let mut v = vec![ZERO; 1 << bits.len()];
    let idx = bits.iter().fold(0, |acc, b| 2 * acc + b);
    v[idx] = dense::re(1.0);
    v
}

fn lin(terms: &[(f64, Vec<C64>)]) -> Vec<C64> {
    let mut out = vec![ZERO; terms[0].1.len()];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x * *c;
        }
    }
    out
}

const UP: usize = 0;
const DN: usize = 1;

fn psi_plus() -> Vec<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    lin(&[(h, ket(&[UP, DN])), (h, ket(&[DN, UP]))])
}

#[test]
fn left_hub_tensor_matches_explicit_form() {
    let (wl, _) = tensor::aklt_boundary_tensors();
    let (s3, s23) = (1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt());
    let expected = [
        dense::scale(dense::re(-1.0), &dense::outer(&ket(&[DN]), &ket(&[UP, UP]))),
        dense::add(
            &dense::scale(dense::re(s3), &dense::outer(&ket(&[UP]), &ket(&[UP, UP]))),
            &dense::scale(dense::re(-s23), &dense::outer(&ket(&[DN]), &psi_plus())),
        ),
        dense::add(
            &dense::scale(dense::re(-s3), &dense::outer(&ket(&[DN]), &ket(&[DN, DN]))),
            &dense::scale(dense::re(s23), &dense::outer(&ket(&[UP]), &psi_plus())),
        ),
        dense::outer(&ket(&[UP]), &ket(&[DN, DN])),
    ];
    for (k, e) in expected.iter().enumerate() {
        assert!(dense::max_abs_diff(wl.matrix(k), e) < TOL, "W^L index {k}");
    }
}

#[test]
fn right_hub_tensor_matches_explicit_form() {
    let (_, wr) = tensor::aklt_boundary_tensors();
    let (s3, s23) = (1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt());
    let expected = [
        dense::outer(&ket(&[DN, DN]), &ket(&[UP])),
        dense::add(
            &dense::scale(dense::re(s3), &dense::outer(&ket(&[DN, DN]), &ket(&[DN]))),
            &dense::scale(dense::re(-s23), &dense::outer(&psi_plus(), &ket(&[UP]))),
        ),
        dense::add(
            &dense::scale(dense::re(s3), &dense::outer(&ket(&[UP, UP]), &ket(&[UP]))),
            &dense::scale(dense::re(-s23), &dense::outer(&psi_plus(), &ket(&[DN]))),
        ),
        dense::outer(&ket(&[UP, UP]), &ket(&[DN])),
    ];
    for (k, e) in expected.iter().enumerate() {
        assert!(dense::max_abs_diff(wr.matrix(k), e) < TOL, "W^R index {k}");
    }
}

#[test]
fn left_hub_map_at_identity() {
    // E^⊳(1) = Σ W^* W = 1 + (4/3) S·S on the two virtual legs.
    let (wl, _) = tensor::aklt_boundary_tensors();
    let e = transfer::transfer_operator(&wl);
    let got = e.apply(&dense::identity(2)).unwrap();
    let want = dense::add(&dense::identity(4), &dense::scale(dense::re(4.0 / 3.0), &transfer::spin_dot_spin()));
    assert!(dense::max_abs_diff(&got, &want) < TOL);
}

fn half_spins() -> [DenseMatrix; 3] {
    let h = 0.5;
    [
        dense::from_real_rows(&[&[0.0, h], &[h, 0.0]]),
        dense::from_rows(&[&[ZERO, C64::new(0.0, -h)], &[C64::new(0.0, h), ZERO]]),
        dense::from_real_rows(&[&[h, 0.0], &[0.0, -h]]),
    ]
}

#[test]
fn bulk_map_is_four_thirds_sum_s_b_s() {
    let e = transfer::transfer_operator(&tensor::aklt_site_tensor());
    let b = dense::from_rows(&[&[C64::new(0.3, 0.1), C64::new(-1.2, 0.4)], &[C64::new(0.7, -0.9), C64::new(2.0, 0.0)]]);
    let mut want = dense::zeros(2, 2);
    for s in half_spins() {
        want = dense::add(&want, &dense::matmul(&s, &dense::matmul(&b, &s)));
    }
    let want = dense::scale(dense::re(4.0 / 3.0), &want);
    assert!(dense::max_abs_diff(&e.apply(&b).unwrap(), &want) < TOL);
}

#[test]
fn displayed_chain_tensor_gives_the_same_transfer_map() {
    let a = transfer::transfer_operator(&tensor::aklt_site_tensor());
    let b = transfer::transfer_operator(&tensor::aklt_site_tensor_displayed());
    assert!(a.max_abs_diff(&b) < TOL);
}

/// `max_{B} ‖H_G Γ_G(B)‖ / ‖Γ_G(B)‖` over matrix units, built from a chain
/// tensor `v` and the standard hub tensors.
fn kernel_defect(v: &tensor::SiteTensor, n: usize) -> f64 {
    let g = lattice::build_g_graph(n).unwrap();
    let h = lattice::hamiltonian(&g).unwrap();
    let (wl, wr) = tensor::aklt_boundary_tensors();
    let tl = tensor::left_region_tensor(v, &wl, n).unwrap();
    let tr = tensor::right_region_tensor(v, &wr, n).unwrap();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut b = dense::zeros(4, 4);
            b[(i, j)] = dense::re(1.0);
            let psi = gamma::gamma_state(n, v, Some(&tl), Some(&tr), &b).unwrap();
            assert_eq!(psi.len(), g.hilbert_dim().unwrap());
            worst = worst.max(dense::norm(&h.apply(&psi)) / dense::norm(&psi));
        }
    }
    worst
}

#[test]
fn chain_tensor_builds_ground_states_of_the_patch() {
    assert!(kernel_defect(&tensor::aklt_site_tensor(), 1) < 1e-12);
    assert!(kernel_defect(&tensor::aklt_site_tensor(), 2) < 1e-12);
}

#[test]
fn displayed_chain_tensor_does_not_build_ground_states() {
    // Same transfer map, but its spin-flip phase does not match the hub
    // tensors, so the contracted states leave the kernel.
    assert!(kernel_defect(&tensor::aklt_site_tensor_displayed(), 1) > 1.0);
}

#[test]
fn bulk_powers_match_closed_form() {
    let e = transfer::transfer_operator(&tensor::aklt_site_tensor());
    for n in 1..=10 {
        let closed = transfer::aklt_bulk_power_closed_form(n);
        assert!(e.power(n).unwrap().max_abs_diff(&closed) < TOL, "n = {n}");
    }
}

#[test]
fn left_map_matches_closed_form_and_right_map_is_its_transpose() {
    for n in 1..=6u32 {
        let t = transfer::AkltTransfer::new(n).unwrap();
        assert!(t.left.max_abs_diff(&transfer::aklt_left_closed_form(n)) < TOL, "n = {n}");
        assert!(t.right.max_abs_diff(&t.left.transpose()) < TOL, "n = {n}");
        let q = bounds::q_matrices(n).unwrap();
        let half = dense::scale(dense::re(0.5), &q.q_left);
        assert!(dense::max_abs_diff(&q.q_right, &half) < TOL);
    }
}

#[test]
fn transfer_maps_are_completely_positive() {
    let t = transfer::AkltTransfer::new(2).unwrap();
    for map in [&t.bulk, &t.left_hub, &t.right_hub, &t.left, &t.right] {
        assert!(map.choi_min_eigenvalue().unwrap() > -TOL);
    }
}

#[test]
fn fixed_point_is_half_identity() {
    let e = transfer::transfer_operator(&tensor::aklt_site_tensor());
    let fp = transfer::fixed_point(&e).unwrap();
    assert!(fp.primitive);
    assert!(dense::max_abs_diff(&fp.rho, &dense::scale(dense::re(0.5), &dense::identity(2))) < TOL);
    assert!((fp.second_modulus - 1.0 / 3.0).abs() < TOL);
}

#[test]
fn gram_matrix_matches_explicit_states_on_the_full_patch() {
    let n = 2;
    let v = tensor::aklt_site_tensor();
    let tl = tensor::aklt_left_region_tensor(n).unwrap();
    let tr = tensor::aklt_right_region_tensor(n).unwrap();
    let g = gamma::gamma_gram(n, &v, Some(&tl), Some(&tr)).unwrap();
    let units: Vec<Vec<C64>> = (0..16)
        .map(|k| {
            let mut b = dense::zeros(4, 4);
            b[(k / 4, k % 4)] = dense::re(1.0);
            gamma::gamma_state(n, &v, Some(&tl), Some(&tr), &b).unwrap()
        })
        .collect();
    for i in 0..16 {
        for j in 0..16 {
            let direct = dense::dot(&units[i], &units[j]);
            assert!((direct - g[(i, j)]).norm() < 1e-10 * g[(i, i)].re.max(1.0));
        }
    }
    assert_eq!(gamma::gram_rank(&g).unwrap(), 16);
}
