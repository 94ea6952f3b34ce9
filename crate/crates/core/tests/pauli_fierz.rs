use fockforge_core::fock::{FockSpace, Statistics};
use fockforge_core::linalg::{c, eigvalsh, identity, inner, kron, CMat, CVec};
use fockforge_core::pauli_fierz::*;
use fockforge_core::random;
use fockforge_core::thermal::ThermalParams;
use fockforge_core::Error;
use proptest::prelude::*;

fn factored(b: &CMat, w: &CVec) -> CMat {
    let n = b.nrows();
    let d = w.len();
    CMat::from_fn(n * d, n, |r, l| b[(r / d, l)] * w[r % d])
}

fn random_model(seed: u64, dim_k: usize, d: usize, cutoff: usize) -> PauliFierzModel {
    let mut r = random::rng(seed);
    let k = random::hermitian(&mut r, dim_k);
    let h = random::hermitian_with_spectrum(&mut r, d, 0.5, 1.5);
    let v = random::complex_matrix(&mut r, dim_k * d, dim_k) * c(0.2, 0.0);
    let g = ThermalParams::thermal(Statistics::Bose, &h, 1.3).unwrap();
    PauliFierzModel::new(k, h, v, Some(g), cutoff).unwrap()
}

fn dist(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}

#[test]
fn factored_coupling_is_tensor_product() {
    let mut r = random::rng(1);
    let space = FockSpace::bose(2, 4).unwrap();
    let b = random::complex_matrix(&mut r, 3, 3);
    let w = random::complex_vector(&mut r, 2);
    let a = coupled_create(3, &space, &factored(&b, &w)).unwrap();
    assert!(dist(&a, &kron(&b, &space.create(&w).unwrap())) < 1e-12);

    let one = coupled_create(3, &space, &factored(&identity(3), &w)).unwrap();
    assert!(dist(&one, &kron(&identity(3), &space.create(&w).unwrap())) < 1e-12);

    let zero = coupled_create(3, &space, &CMat::zeros(6, 3)).unwrap();
    assert_eq!(zero.norm(), 0.0);
}

#[test]
fn coupled_annihilation_on_one_particle_sector_is_adjoint_coupling() {
    // a(q)Ψ = q*Ψ for Ψ ∈ K⊗Γ¹(Z) = K⊗Z.
    let mut r = random::rng(2);
    let (dim_k, d) = (2, 3);
    let space = FockSpace::bose(d, 3).unwrap();
    let q = random::complex_matrix(&mut r, dim_k * d, dim_k);
    let a = coupled_annihilate(dim_k, &space, &q).unwrap();
    let psi = random::complex_vector(&mut r, dim_k * d);
    let mut full = CVec::zeros(dim_k * space.dim());
    for k in 0..dim_k {
        for j in 0..d {
            let mut occ = vec![0u16; d];
            occ[j] = 1;
            full[k * space.dim() + space.index_of(&occ).unwrap()] = psi[k * d + j];
        }
    }
    let out = a * full;
    let expected = q.adjoint() * &psi;
    for k in 0..dim_k {
        assert!((out[k * space.dim()] - expected[k]).norm() < 1e-12);
    }
}

#[test]
fn coupled_create_is_linear_in_rank_two_couplings() {
    let mut r = random::rng(3);
    let space = FockSpace::bose(2, 5).unwrap();
    let (b1, b2) = (random::complex_matrix(&mut r, 2, 2), random::complex_matrix(&mut r, 2, 2));
    let (w1, w2) = (random::complex_vector(&mut r, 2), random::complex_vector(&mut r, 2));
    let q = factored(&b1, &w1) + factored(&b2, &w2);
    let direct = kron(&b1, &space.create(&w1).unwrap()) + kron(&b2, &space.create(&w2).unwrap());
    assert!(dist(&coupled_create(2, &space, &q).unwrap(), &direct) < 1e-12);
    let ann = coupled_annihilate(2, &space, &q).unwrap();
    assert!(dist(&ann, &direct.adjoint()) < 1e-12);
}

#[test]
fn coupled_create_rejects_bad_shapes() {
    let space = FockSpace::bose(2, 2).unwrap();
    assert!(matches!(
        coupled_create(2, &space, &CMat::zeros(6, 2)),
        Err(Error::ShapeMismatch { .. })
    ));
    assert!(matches!(
        coupled_create(2, &space, &CMat::zeros(4, 3)),
        Err(Error::ShapeMismatch { .. })
    ));
}

#[test]
fn v_star_defining_identity() {
    // (Φ⊗w | vΨ) = (v⋆Φ | Ψ⊗w̄), with w̄ in the coordinates conj(w).
    let mut r = random::rng(4);
    let (n, d) = (3, 2);
    let v = random::complex_matrix(&mut r, n * d, n);
    let vs = v_star(&v, n).unwrap();
    for _ in 0..5 {
        let phi = random::complex_vector(&mut r, n);
        let psi = random::complex_vector(&mut r, n);
        let w = random::complex_vector(&mut r, d);
        let lhs = inner(&phi.kronecker(&w), &(&v * &psi));
        let rhs = inner(&(&vs * &phi), &psi.kronecker(&w.conjugate()));
        assert!((lhs - rhs).norm() < 1e-12);
    }
    assert!(dist(&v_star(&vs, n).unwrap(), &v) < 1e-14);
}

#[test]
fn v_star_of_factored_coupling() {
    let mut r = random::rng(5);
    let b = random::complex_matrix(&mut r, 2, 2);
    let w = random::complex_vector(&mut r, 3);
    let vs = v_star(&factored(&b, &w), 2).unwrap();
    assert!(dist(&vs, &factored(&b.adjoint(), &w.conjugate())) < 1e-14);

    let herm = random::hermitian(&mut r, 2);
    let real_w = CVec::from_fn(3, |i, _| c(i as f64 - 0.7, 0.0));
    let fixed = factored(&herm, &real_w);
    assert!(dist(&v_star(&fixed, 2).unwrap(), &fixed) < 1e-14);
}

#[test]
fn check_middle_inserts_identity_and_factors() {
    let mut r = random::rng(6);
    let a = random::complex_matrix(&mut r, 2 * 3, 2 * 3);
    let out = check_middle(&identity(2), &a, 2).unwrap();
    for i in 0..12 {
        for j in 0..12 {
            let (k, kb, x) = (i / 6, (i / 3) % 2, i % 3);
            let (l, lb, y) = (j / 6, (j / 3) % 2, j % 3);
            let expected = if kb == lb { a[(k * 3 + x, l * 3 + y)] } else { c(0.0, 0.0) };
            assert_eq!(out[(i, j)], expected);
        }
    }

    let cm = random::complex_matrix(&mut r, 2, 2);
    let bbar = random::complex_matrix(&mut r, 3, 3);
    let a0 = random::complex_matrix(&mut r, 4, 4);
    let out = check_middle(&bbar, &kron(&cm, &a0), 2).unwrap();
    assert!(dist(&out, &kron(&kron(&cm, &bbar), &a0)) < 1e-13);
}

#[test]
fn check_middle_twice_on_two_by_two_by_two() {
    let mut r = random::rng(7);
    let a = random::complex_matrix(&mut r, 4, 4);
    let b1 = random::complex_matrix(&mut r, 2, 2);
    let b2 = random::complex_matrix(&mut r, 2, 2);
    let once = check_middle(&b1, &a, 2).unwrap();
    let twice = check_middle(&b2, &once, 2).unwrap();
    // Index (k, b2, b1, x) with every factor of dimension 2.
    let split = |i: usize| (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
    for i in 0..16 {
        for j in 0..16 {
            let (k, p2, p1, x) = split(i);
            let (l, q2, q1, y) = split(j);
            let expected = b2[(p2, q2)] * b1[(p1, q1)] * a[(k * 2 + x, l * 2 + y)];
            assert!((twice[(i, j)] - expected).norm() < 1e-14);
        }
    }
    assert!(matches!(check_middle(&b1, &CMat::zeros(3, 3), 2), Err(Error::ShapeMismatch { .. })));
}

#[test]
fn free_hamiltonian_spectrum() {
    let k = CMat::from_diagonal(&CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]));
    let m = PauliFierzModel::new(k, identity(1), CMat::zeros(2, 2), None, 2).unwrap();
    let e = eigvalsh(&hamiltonian(&m).unwrap()).unwrap();
    let expected = [0.0, 1.0, 1.0, 2.0, 2.0, 3.0];
    for (a, b) in e.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn spin_boson_ground_energy_drops_with_coupling() {
    let e = |g: f64| {
        let m = PauliFierzModel::spin_boson(g, None, 10).unwrap();
        let h = hamiltonian(&m).unwrap();
        assert!((&h - h.adjoint()).norm() < 1e-12);
        eigvalsh(&h).unwrap()[0]
    };
    let (e0, e1, e2) = (e(0.0), e(0.1), e(0.2));
    assert!((e0 + 1.0).abs() < 1e-12);
    assert!(e1 < e0 && e2 < e1);
    // Second order: −g²/(1 + 2) per unit boson energy.
    assert!((e1 - e0 + 0.01 / 3.0).abs() < 1e-4);
}

#[test]
fn model_validation() {
    let m = PauliFierzModel::spin_boson(0.1, None, 4).unwrap();
    assert!(matches!(semi_liouvillean(&m), Err(Error::MissingGamma)));
    assert!(matches!(standard_liouvillean(&m), Err(Error::MissingGamma)));
    assert!(matches!(
        PauliFierzModel::new(identity(2), identity(1), CMat::zeros(3, 2), None, 4),
        Err(Error::ShapeMismatch { .. })
    ));
    assert!(PauliFierzModel::new(identity(2), -identity(1), CMat::zeros(2, 2), None, 4).is_err());

    let mut r = random::rng(8);
    let h = random::hermitian_with_spectrum(&mut r, 2, 0.5, 1.5);
    let g = ThermalParams::new(Statistics::Bose, CMat::from_diagonal(&CVec::from_vec(vec![c(0.2, 0.0), c(0.5, 0.0)])))
        .unwrap();
    assert!(matches!(
        PauliFierzModel::new(identity(1), h, CMat::zeros(2, 1), Some(g), 3),
        Err(Error::CommutationViolation(_))
    ));
}

#[test]
fn semi_interaction_matches_thermal_left_creators() {
    // V_γ = Σ_j B_j ⊗ a*_l(e_j) + h.c. with the left creators of the doubled representation.
    let m = random_model(9, 2, 2, 3);
    let rep = m.doubled().unwrap();
    let blocks = coupling_blocks(&m.v, 2).unwrap();
    let mut expected = CMat::zeros(2 * rep.space.dim(), 2 * rep.space.dim());
    for (j, b) in blocks.iter().enumerate() {
        let mut e = CVec::zeros(2);
        e[j] = c(1.0, 0.0);
        expected += kron(b, &rep.left_create(&e).unwrap());
    }
    let expected = &expected + expected.adjoint();
    let semi = semi_liouvillean(&m).unwrap();
    assert!(dist(&semi.interaction, &expected) < 1e-12);
    assert!((&semi.full - semi.full.adjoint()).norm() < 1e-12);
}

#[test]
fn semi_at_zero_density_has_no_right_coupling() {
    let mut m = random_model(10, 2, 1, 3);
    m.gamma = Some(ThermalParams::new(Statistics::Bose, CMat::zeros(1, 1)).unwrap());
    let q = left_coupling(&m).unwrap();
    let blocks = coupling_blocks(&q, 2).unwrap();
    assert!(dist(&blocks[0], &coupling_blocks(&m.v, 2).unwrap()[0]) < 1e-14);
    assert_eq!(blocks[1].norm(), 0.0);

    let zero_v = m.with_v(CMat::zeros(2, 2)).unwrap();
    let report = confined_pf_check(&zero_v).unwrap();
    assert!(report.max_deviation() < 1e-10);
}

#[test]
fn standard_liouvillean_structure() {
    let m = random_model(11, 2, 2, 3);
    let l = standard_liouvillean(&m).unwrap();
    assert!((&l.full - l.full.adjoint()).norm() < 1e-12);
    assert!(l.full.trace().norm() < 1e-9);
    assert!(dist(&l.right, &right_interaction_closed(&m).unwrap()) < 1e-10);
    assert!(left_right_commutator_defect(&m, &l).unwrap() < 1e-9);
    let j = standard_conjugation(&m).unwrap();
    assert!(j.involution_defect() < 1e-12, "{:e}", j.involution_defect());
    assert!(dist(&conjugate_sparse(&j, &l.full), &(-&l.full)) < 1e-10);
}

#[test]
fn left_interaction_commutes_with_right_generators() {
    let m = random_model(12, 2, 2, 3);
    let rep = m.doubled().unwrap();
    let l = standard_liouvillean(&m).unwrap();
    let dim_g = rep.space.dim();
    let mut r = random::rng(13);
    let b = random::complex_matrix(&mut r, 2, 2);
    let right_system = kron(&kron(&identity(2), &b.conjugate()), &identity(dim_g));
    assert!((&l.left * &right_system - &right_system * &l.left).norm() < 1e-12);

    let z = random::complex_vector(&mut r, 2);
    let right_field = kron(&identity(4), &rep.right_create(&z).unwrap());
    let comm = &l.left * &right_field - &right_field * &l.left;
    let cols = system_sector_upto(&rep.space, 4, rep.exact_sector());
    let defect: f64 = cols.iter().map(|&j| comm.column(j).norm_squared()).sum::<f64>().sqrt();
    assert!(defect < 1e-9);
}

#[test]
fn free_standard_liouvillean_is_antisymmetric() {
    let m = random_model(14, 2, 1, 3);
    let m = m.with_v(CMat::zeros(2, 2)).unwrap();
    let l = standard_liouvillean(&m).unwrap();
    assert!(dist(&l.full, &l.free) < 1e-14);
    let ev = eigvalsh(&l.full).unwrap();
    for (a, b) in ev.iter().zip(ev.iter().rev()) {
        assert!((a + b).abs() < 1e-10);
    }
}

#[test]
fn free_kms_vector_is_null() {
    let beta = 1.3;
    let mut r = random::rng(15);
    let k = random::hermitian(&mut r, 2);
    let h = random::hermitian_with_spectrum(&mut r, 2, 0.5, 1.5);
    let g = ThermalParams::thermal(Statistics::Bose, &h, beta).unwrap();
    let m = PauliFierzModel::new(k, h, CMat::zeros(4, 2), Some(g), 3).unwrap();
    let omega = free_kms_vector(&m, beta).unwrap();
    let l = standard_liouvillean(&m).unwrap();
    assert!((&l.full * &omega).norm() < 1e-12);
}

#[test]
fn hypothesis_norms_are_reported() {
    let m = PauliFierzModel::spin_boson(0.1, Some(0.25), 4).unwrap();
    let n = m.hypothesis_norms().unwrap();
    assert!((n.h_inv_sqrt_v - 0.1).abs() < 1e-12);
    let root = (1.0f64 / 0.75).sqrt();
    assert!((n.one_plus_rho_sqrt_v.unwrap() - 0.1 * root).abs() < 1e-12);
    assert!((n.one_plus_h_one_plus_rho_sqrt_v.unwrap() - 0.2 * root).abs() < 1e-12);
}

#[test]
fn confined_free_model_matches_exactly() {
    let m = PauliFierzModel::spin_boson(0.0, Some(0.25), 6).unwrap();
    let report = confined_pf_check(&m).unwrap();
    assert!(report.max_deviation() < 1e-10);
    assert!(report.semi_reference > 0 && report.standard_reference > 0);
}

#[test]
fn confined_spin_boson_converges_with_cutoff() {
    let mut last = f64::INFINITY;
    for n in [8, 10, 12, 14] {
        let m = PauliFierzModel::spin_boson(0.1, Some(0.25), n).unwrap();
        let report = confined_pf_check(&m).unwrap();
        let dev = report.max_deviation();
        assert!(dev < last, "cutoff {n}: {dev:e} after {last:e}");
        last = dev;
    }
    assert!(last <= 1e-5, "{last:e}");
}

#[test]
fn bottleneck_matching() {
    assert_eq!(bottleneck_match(&[], &[1.0]), 0.0);
    assert_eq!(bottleneck_match(&[1.0, 2.0], &[1.0]), f64::INFINITY);
    assert_eq!(bottleneck_match(&[1.0, 1.0], &[0.0, 1.0, 1.0, 5.0]), 0.0);
    // A doubled reference value needs two partners.
    let d = bottleneck_match(&[1.0, 1.0], &[0.0, 1.0, 3.0]);
    assert!((d - 1.0).abs() < 1e-12);
    let clusters = cluster(&[1.0, 1.0 + 1e-9, 2.0], CLUSTER_TOL);
    assert_eq!(clusters.len(), 2);
    assert_eq!(clusters[0].1, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bottleneck_bounded_by_perturbation(
        values in prop::collection::vec(-5.0f64..5.0, 1..12),
        shifts in prop::collection::vec(-1e-3f64..1e-3, 12),
        extra in prop::collection::vec(-10.0f64..10.0, 0..6),
    ) {
        let spectrum: Vec<f64> = values.iter().zip(&shifts).map(|(v, s)| v + s).chain(extra).collect();
        let bound = shifts.iter().take(values.len()).fold(0.0f64, |m, s| m.max(s.abs()));
        prop_assert!(bottleneck_match(&values, &spectrum) <= bound + 1e-12);
    }

    #[test]
    fn coupled_create_adjoint_and_linearity(seed in 0u64..1000) {
        let mut r = random::rng(seed);
        let space = FockSpace::bose(2, 3).unwrap();
        let q1 = random::complex_matrix(&mut r, 4, 2);
        let q2 = random::complex_matrix(&mut r, 4, 2);
        let z = random::complex_normal(&mut r);
        let lhs = coupled_create(2, &space, &(&q1 + &q2 * z)).unwrap();
        let rhs = coupled_create(2, &space, &q1).unwrap() + coupled_create(2, &space, &q2).unwrap() * z;
        prop_assert!(dist(&lhs, &rhs) < 1e-11);
        let ann = coupled_annihilate(2, &space, &q1).unwrap();
        prop_assert!(dist(&ann, &coupled_create(2, &space, &q1).unwrap().adjoint()) < 1e-14);
    }

    #[test]
    fn v_star_is_involutive(seed in 0u64..1000) {
        let mut r = random::rng(seed);
        let v = random::complex_matrix(&mut r, 6, 2);
        prop_assert!(dist(&v_star(&v_star(&v, 2).unwrap(), 2).unwrap(), &v) < 1e-14);
    }
}
