use fockforge_core::fock::FockSpace;
use fockforge_core::lattice::*;
use fockforge_core::linalg::{c, CMat, CVec, RMat, ONE};
use fockforge_core::random;
use fockforge_core::reps::{field, q_operator};
use fockforge_core::thermal::tracial_field;
use fockforge_core::Error;
use proptest::prelude::*;

fn e(d: usize, k: usize, phase: (f64, f64)) -> CVec {
    let mut v = CVec::zeros(d);
    v[k] = c(phase.0, phase.1);
    v
}

#[test]
fn complements() {
    let w = RealSubspace::whole(2);
    assert_eq!(w.perp().unwrap().dim(), 0);
    let v = RealSubspace::from_complex(1, &[e(1, 0, (1.0, 0.0))]).unwrap();
    let s = v.symplectic_complement().unwrap();
    assert!(s.distance(&v) < 1e-14);
    let mut r = random::rng(1);
    for k in 0..=6 {
        let v = RealSubspace::random(&mut r, 3, k).unwrap();
        let p = v.perp().unwrap();
        assert_eq!(v.dim() + p.dim(), 6);
        assert!(p.perp().unwrap().distance(&v) < 1e-12);
        let back = v.symplectic_complement().unwrap().symplectic_complement().unwrap();
        assert!(back.distance(&v) < 1e-12);
    }
}

#[test]
fn lattice_operations() {
    let mut r = random::rng(2);
    let v = RealSubspace::random(&mut r, 2, 2).unwrap();
    assert!(meet(&[v.clone(), v.clone()]).unwrap().distance(&v) < 1e-12);
    assert_eq!(join(&[v.clone(), v.perp().unwrap()]).unwrap().dim(), 4);
    for (k1, k2) in [(2, 3), (3, 3), (1, 2), (4, 2)] {
        let a = RealSubspace::random(&mut r, 3, k1).unwrap();
        let b = RealSubspace::random(&mut r, 3, k2).unwrap();
        let m = meet(&[a.clone(), b.clone()]).unwrap();
        let j = join(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(m.dim() + j.dim(), a.dim() + b.dim());
        let lhs = meet(&[a.clone(), b.clone()]).unwrap().perp().unwrap();
        let rhs = join(&[a.perp().unwrap(), b.perp().unwrap()]).unwrap();
        assert!(lhs.distance(&rhs) < 1e-10);
    }
    // A shared direction is detected.
    let shared = RMat::from_column_slice(4, 1, &[1.0, 0.5, -0.2, 0.3]);
    let a = RealSubspace::new(2, &RMat::from_columns(&[shared.column(0).into_owned(), RMat::from_column_slice(4, 1, &[0.0, 1.0, 0.0, 0.0]).column(0).into_owned()])).unwrap();
    let b = RealSubspace::new(2, &RMat::from_columns(&[shared.column(0).into_owned(), RMat::from_column_slice(4, 1, &[0.0, 0.0, 0.0, 1.0]).column(0).into_owned()])).unwrap();
    assert_eq!(meet(&[a, b]).unwrap().dim(), 1);
    assert!(matches!(join(&[]), Err(Error::InvalidArgument(_))));
}

#[test]
fn split_of_complex_subspace() {
    let v = RealSubspace::complex_span(3, &[e(3, 0, (1.0, 0.0)), e(3, 1, (0.6, 0.8))]).unwrap();
    assert!(v.is_complex(1e-12));
    let s = general_position_split(&v).unwrap();
    assert!(s.w_plus.distance(&v) < 1e-12);
    assert_eq!((s.w0.dim(), s.w1.dim(), s.w_minus.dim()), (0, 0, 2));
}

#[test]
fn split_of_real_line() {
    let v = RealSubspace::from_complex(1, &[e(1, 0, (1.0, 0.0))]).unwrap();
    let s = general_position_split(&v).unwrap();
    assert_eq!(s.w1.dim(), 2);
    assert!(s.v1.distance(&v) < 1e-14);
    assert_eq!(s.w_plus.dim() + s.w0.dim() + s.w_minus.dim(), 0);
}

#[test]
fn generic_half_dimensional_subspace_is_in_general_position() {
    let mut r = random::rng(3);
    for d in 1..=4 {
        let v = RealSubspace::random(&mut r, d, d).unwrap();
        let s = general_position_split(&v).unwrap();
        // m = p+q−1 is complex linear and ε flips its sign, so an odd complex
        // dimension forces a kernel: W₁ is one complex dimension.
        let odd = d % 2;
        assert_eq!(s.w1.dim(), 2 * odd);
        assert_eq!(s.w0.dim(), 2 * (d - odd));
        assert!(s.v0_in_general_position());
        let back = join(&[s.v0.clone(), s.v1.clone()]).unwrap();
        assert!(back.distance(&v) < 1e-10);
    }
}

#[test]
fn split_recombines() {
    let mut r = random::rng(4);
    for k in 0..=6 {
        // Mix a complex part, a Lagrangian part and a generic part.
        let extra = RealSubspace::random(&mut r, 3, k).unwrap();
        let v = join(&[
            RealSubspace::complex_span(3, &[e(3, 0, (1.0, 0.0))]).unwrap(),
            extra,
        ])
        .unwrap();
        let s = general_position_split(&v).unwrap();
        let total = s.w_plus.dim() + s.w0.dim() + s.w1.dim() + s.w_minus.dim();
        assert_eq!(total, 6, "k = {k}");
        for part in [&s.w_plus, &s.w0, &s.w1, &s.w_minus] {
            assert!(part.is_complex(1e-9));
        }
        let recombined = join(&[s.w_plus.clone(), s.v0.clone(), s.v1.clone()]).unwrap();
        assert!(recombined.distance(&v) < 1e-9);
        assert!(s.v0_in_general_position());
    }
}

#[test]
fn halmos_angles_match_principal_angles() {
    let mut r = random::rng(5);
    for d in [2, 4] {
        let v = RealSubspace::random(&mut r, d, d).unwrap();
        let h = halmos_angles(&v).unwrap();
        // Oracle: cosines of the principal angles between V and iV.
        let cos = (v.basis().transpose() * v.times_i().basis()).singular_values();
        let mut want: Vec<f64> = cos.iter().filter(|&&x| x > 1e-9).map(|x| 0.5 * (1.0 - x)).collect();
        want.sort_by(f64::total_cmp);
        want.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let mut got = h.chi_values.clone();
        got.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9);
        }
        assert!(h.chi_values.iter().all(|&x| x > 0.0 && x < 0.5));
        assert!(h.isometry_defect() < 1e-9);
        let range = RealSubspace::new(d, &h.isometry).unwrap();
        assert!(range.distance(&v) < 1e-9);
        let co = RealSubspace::new(d, &h.complement_isometry).unwrap();
        assert!(co.distance(&v.symplectic_complement().unwrap()) < 1e-9);
        let ez = RealSubspace::new(d, &(&h.epsilon * h.z.basis())).unwrap();
        assert!(ez.containment_defect(&h.z) > 0.5);
        assert!((h.z.basis().transpose() * ez.basis()).norm() < 1e-10);
        let i = fockforge_core::linalg::real_i(d);
        let one = RMat::identity(2 * d, 2 * d);
        assert!((&h.epsilon * &h.epsilon - &one).norm() < 1e-10);
        assert!((&h.epsilon * &i + &i * &h.epsilon).norm() < 1e-10);
        assert!((&h.w * &h.epsilon + &h.epsilon * &h.w).norm() < 1e-10);
        assert!((&h.w * &i - &i * &h.w).norm() < 1e-10);
    }
}

#[test]
fn halmos_rotation_graph() {
    // V = span_R{(1, 0), (i cos θ, sin θ)} in C²: the angle between V and iV is θ.
    for theta in [0.3f64, 0.9, 1.4] {
        let v = RealSubspace::from_complex(
            2,
            &[
                CVec::from_vec(vec![ONE, c(0.0, 0.0)]),
                CVec::from_vec(vec![c(0.0, theta.cos()), c(theta.sin(), 0.0)]),
            ],
        )
        .unwrap();
        let h = halmos_angles(&v).unwrap();
        let cos = (v.basis().transpose() * v.times_i().basis()).singular_values();
        let want = 0.5 * (1.0 - cos.max());
        assert!((h.chi_values[0] - want).abs() < 1e-10);
        let half = (0.5 * cos.max().acos()).sin().powi(2);
        assert!((h.chi_values[0] - half).abs() < 1e-10);
        let rho = want / (1.0 - 2.0 * want);
        let rho_spec = (h.rho.clone().symmetric_eigen().eigenvalues).max();
        assert!((rho_spec - rho).abs() < 1e-9);
    }
}

#[test]
fn halmos_rejects_special_position() {
    let v = RealSubspace::from_complex(2, &[e(2, 0, (1.0, 0.0)), e(2, 0, (0.0, 1.0))]).unwrap();
    assert!(matches!(halmos_angles(&v), Err(Error::GeneralPositionViolated(_))));
}

#[test]
fn commutant_trivial_cases() {
    let dim = 4;
    let all = matrix_units(dim);
    let c1 = commutant(&all).unwrap();
    assert_eq!(c1.basis.len(), 1);
    assert!(containment_defect(&scalars(dim), &c1.basis) < 1e-12);
    let c2 = commutant(&[CMat::identity(dim, dim)]).unwrap();
    assert_eq!(c2.basis.len(), dim * dim);
    assert!(matches!(commutant(&[CMat::identity(200, 200)]), Err(Error::DimensionGuard(200, 128))));
}

#[test]
fn double_commutant_contains_generators() {
    let space = FockSpace::fermi(2).unwrap();
    let mut r = random::rng(7);
    let v = RealSubspace::random(&mut r, 2, 2).unwrap();
    let alg = field_algebra(&space, &v).unwrap();
    assert_eq!(alg.len(), 4);
    let comm = commutant(&alg).unwrap();
    let dbl = commutant(&comm.basis).unwrap();
    assert!(containment_defect(&dbl.basis, &alg) < 1e-9);
    for x in &comm.basis {
        for a in &alg {
            assert!((x * a - a * x).norm() < 1e-9);
        }
    }
}

#[test]
fn duality_extremes() {
    let whole = fermionic_duality_check(&RealSubspace::whole(2)).unwrap();
    assert_eq!(whole.dim_commutant, 1);
    assert!(whole.defect() < 1e-9);
    let zero = fermionic_duality_check(&RealSubspace::zero(2)).unwrap();
    assert_eq!(zero.dim_commutant, 16);
    assert!(zero.defect() < 1e-9);
}

#[test]
fn duality_random_subspaces() {
    let mut r = random::rng(8);
    for k in 0..=4 {
        for _ in 0..2 {
            let v = RealSubspace::random(&mut r, 2, k).unwrap();
            let rep = fermionic_duality_check(&v).unwrap();
            assert!(rep.defect() < 1e-8, "{rep:?}");
            assert!(!rep.gray_zone);
        }
    }
    let v = RealSubspace::random(&mut r, 2, 2).unwrap();
    let space = FockSpace::fermi(2).unwrap();
    let alg = field_algebra(&space, &v).unwrap();
    let dual = lambda_conjugate(&space, &field_algebra(&space, &v.symplectic_complement().unwrap()).unwrap());
    assert_eq!(commutant(&alg).unwrap().basis.len(), dual.len());
}

#[test]
fn duality_larger_spaces() {
    let mut r = random::rng(11);
    for (d, k) in [(3, 1), (3, 3), (3, 4), (4, 3), (4, 6)] {
        let v = RealSubspace::random(&mut r, d, k).unwrap();
        let rep = fermionic_duality_check(&v).unwrap();
        assert!(rep.defect() < 1e-8, "{rep:?}");
    }
}

#[test]
fn duality_without_lambda_fails() {
    // The Λ twist matters whenever V is not complex.
    let mut r = random::rng(9);
    let v = RealSubspace::random(&mut r, 2, 1).unwrap();
    let space = FockSpace::fermi(2).unwrap();
    let comm = commutant(&field_algebra(&space, &v).unwrap()).unwrap();
    let plain = field_algebra(&space, &v.symplectic_complement().unwrap()).unwrap();
    assert!(containment_defect(&comm.basis, &plain) > 1e-3);
}

#[test]
fn lattice_morphism_and_monotonicity() {
    let mut r = random::rng(10);
    let space = FockSpace::fermi(2).unwrap();
    for _ in 0..3 {
        let a = RealSubspace::random(&mut r, 2, 3).unwrap();
        let b = RealSubspace::random(&mut r, 2, 3).unwrap();
        let m = meet(&[a.clone(), b.clone()]).unwrap();
        let ma = field_algebra(&space, &a).unwrap();
        let mb = field_algebra(&space, &b).unwrap();
        let mm = field_algebra(&space, &m).unwrap();
        let inter = span_intersection(&ma, &mb).unwrap();
        assert_eq!(inter.len(), mm.len());
        assert!(containment_defect(&inter, &mm) < 1e-9);
        assert!(containment_defect(&ma, &mm) < 1e-9);
        let big = join(&[a.clone(), RealSubspace::random(&mut r, 2, 1).unwrap()]).unwrap();
        assert!(containment_defect(&field_algebra(&space, &big).unwrap(), &ma) < 1e-9);
    }
}

#[test]
fn tracial_center_contains_q_for_odd_dimension() {
    for m in [2usize, 3] {
        let space = FockSpace::fermi(m).unwrap();
        let fields: Vec<CMat> = (0..m)
            .map(|k| {
                let mut v = vec![0.0; m];
                v[k] = 1.0;
                tracial_field(&space, &v, false).unwrap()
            })
            .collect();
        let alg = span_basis(&{
            let mut mons = Vec::new();
            for mask in 0..(1usize << m) {
                let mut x = space.identity();
                for (i, f) in fields.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        x *= f;
                    }
                }
                mons.push(x);
            }
            mons
        })
        .unwrap();
        let comm = commutant(&fields).unwrap();
        let center = span_intersection(&alg, &comm.basis).unwrap();
        let basis: Vec<CVec> = (0..m).map(|k| e(m, k, (1.0, 0.0))).collect();
        let q = q_operator(&space, &basis).unwrap();
        if m % 2 == 1 {
            assert_eq!(center.len(), 2);
            assert!(containment_defect(&center, &[q]) < 1e-9);
        } else {
            assert_eq!(center.len(), 1);
        }
    }
}

#[test]
fn field_algebra_rejects_bosons() {
    let space = FockSpace::bose(1, 2).unwrap();
    assert!(field_algebra(&space, &RealSubspace::whole(1)).is_err());
    let f = FockSpace::fermi(1).unwrap();
    let phi = field(&f, &e(1, 0, (1.0, 0.0))).unwrap();
    assert_eq!(commutant(&[phi]).unwrap().basis.len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn double_complement(seed in 0u64..10_000, d in 1usize..4, k in 0usize..7) {
        let mut r = random::rng(seed);
        let v = RealSubspace::random(&mut r, d, k.min(2 * d)).unwrap();
        prop_assert!(v.perp().unwrap().perp().unwrap().distance(&v) < 1e-10);
        prop_assert!(v.symplectic_complement().unwrap().symplectic_complement().unwrap().distance(&v) < 1e-10);
    }

    #[test]
    fn rank_identity(seed in 0u64..10_000, k1 in 0usize..5, k2 in 0usize..5) {
        let mut r = random::rng(seed);
        let a = RealSubspace::random(&mut r, 2, k1).unwrap();
        let b = RealSubspace::random(&mut r, 2, k2).unwrap();
        let m = meet(&[a.clone(), b.clone()]).unwrap();
        let j = join(&[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(m.dim() + j.dim(), a.dim() + b.dim());
    }
}
