use fockforge_core::bogolubov::*;
use fockforge_core::fock::FockSpace;
use fockforge_core::linalg::{c, identity, CMat, ONE};
use fockforge_core::random;
use fockforge_core::reps::squeezer;
use fockforge_core::Error;
use proptest::prelude::*;

fn jmat() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)])
}

fn fermi_turn(theta: f64) -> BogolubovBlocks {
    BogolubovBlocks::new(identity(2) * c(theta.cos(), 0.0), jmat() * c(theta.sin(), 0.0), BlockKind::Orthogonal)
        .unwrap()
}

fn random_rotation(r: &mut random::Rng64, d: usize) -> BogolubovBlocks {
    loop {
        let o = random::special_orthogonal(r, 2 * d);
        let b = BogolubovBlocks::from_real(&o, BlockKind::Orthogonal).unwrap();
        if b.p_min_singular() > 1e-3 {
            return b;
        }
    }
}

fn random_symplectic(r: &mut random::Rng64, d: usize, scale: f64) -> BogolubovBlocks {
    let h = random::hermitian(r, d) * c(0.0, scale);
    let s = random::symmetric(r, d) * c(scale, 0.0);
    BogolubovBlocks::from_generator(&h, &s, BlockKind::Symplectic).unwrap()
}

#[test]
fn identity_blocks() {
    for kind in [BlockKind::Symplectic, BlockKind::Orthogonal] {
        let b = BogolubovBlocks::identity(2, kind);
        assert_eq!(b.validate().max_residual(), 0.0);
        let cd = b.to_cd().unwrap();
        assert_eq!(cd.c.norm() + cd.d.norm(), 0.0);
    }
    let s = FockSpace::bose(2, 4).unwrap();
    let u = shale_implementer(&s, &BogolubovBlocks::identity(2, BlockKind::Symplectic)).unwrap();
    assert!((u - s.identity()).norm() < 1e-15);
    let f = FockSpace::fermi(2).unwrap();
    let (plus, minus) = metaplectic_pair(&f, &BogolubovBlocks::identity(2, BlockKind::Orthogonal)).unwrap();
    assert!((plus - f.identity()).norm() < 1e-15);
    assert!((minus + f.identity()).norm() < 1e-15);
}

#[test]
fn squeeze_blocks() {
    let t = 0.37;
    let b = BogolubovBlocks::squeeze(t);
    assert!(b.validate().max_residual() <= 1e-12);
    let cd = b.to_cd().unwrap();
    assert!((cd.c[(0, 0)] - c(t.tanh(), 0.0)).norm() < 1e-14);
    assert!((cd.d[(0, 0)] - c(t.tanh(), 0.0)).norm() < 1e-14);
    assert!(cd.reconstruction_defect < 1e-12);
}

#[test]
fn fermi_turn_blocks_and_degeneracy() {
    let b = fermi_turn(0.7);
    assert!(b.validate().max_residual() <= 1e-12);
    // Hand computation: c = p⁻¹q = tan θ J, d = q p̄⁻¹ = tan θ J.
    let cd = b.to_cd().unwrap();
    assert!((cd.c - jmat() * c(0.7f64.tan(), 0.0)).norm() < 1e-13);
    assert!(cd.formula_defect < 1e-12 && cd.reconstruction_defect < 1e-12);
    match fermi_turn(std::f64::consts::FRAC_PI_2).to_cd() {
        Err(Error::FermiDegenerate(_)) => {}
        other => panic!("expected FermiDegenerate, got {other:?}"),
    }
}

#[test]
fn fermi_random_rotations_intertwine() {
    let mut r = random::rng(7);
    for k in 0..20 {
        let d = 1 + k % 3;
        let s = FockSpace::fermi(d).unwrap();
        let b = random_rotation(&mut r, d);
        assert!(b.validate().max_residual() < 1e-10);
        let u = shale_implementer(&s, &b).unwrap();
        assert!((u.adjoint() * &u - s.identity()).norm() < 1e-10);
        assert!(u[(0, 0)].re > 0.0 && u[(0, 0)].im.abs() < 1e-12);
        for _ in 0..3 {
            let z = random::complex_vector(&mut r, d);
            assert!(intertwining_residual(&s, &b, &u, &z).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn bose_squeeze_intertwines() {
    let s = FockSpace::bose(1, 20).unwrap();
    for t in [-0.3, -0.1, 0.2, 0.3] {
        let b = BogolubovBlocks::squeeze(t);
        let u = shale_implementer(&s, &b).unwrap();
        assert!(u[(0, 0)].re > 0.0);
        let z = CMat::from_element(1, 1, c(0.6, -0.8)).column(0).into_owned();
        assert!(intertwining_residual(&s, &b, &u, &z).unwrap() <= 1e-7);
        assert!(truncation_warning(&s, &b).is_none());
    }
}

#[test]
fn bose_multimode_intertwines() {
    let mut r = random::rng(11);
    let s = FockSpace::bose(2, 10).unwrap();
    let b = random_symplectic(&mut r, 2, 0.15);
    let rep = b.validate();
    assert!(rep.max_residual() < 1e-10 && rep.min_eig_pp >= 1.0 - 1e-12);
    let u = shale_implementer(&s, &b).unwrap();
    let z = random::complex_vector(&mut r, 2);
    assert!(intertwining_residual(&s, &b, &u, &z).unwrap() <= 1e-7);
}

#[test]
fn fermi_composition_is_plus_minus() {
    let mut r = random::rng(3);
    let s = FockSpace::fermi(3).unwrap();
    for _ in 0..5 {
        let (b1, b2) = (random_rotation(&mut r, 3), random_rotation(&mut r, 3));
        let b12 = b1.compose(&b2);
        if b12.p_min_singular() < 1e-3 {
            continue;
        }
        let (u1, _) = metaplectic_pair(&s, &b1).unwrap();
        let (u2, _) = metaplectic_pair(&s, &b2).unwrap();
        let (u12, _) = metaplectic_pair(&s, &b12).unwrap();
        assert!(sign_ambiguous_distance(&(u1 * u2), &u12) <= 1e-9);
    }
}

#[test]
fn bose_composition_is_plus_minus() {
    let s = FockSpace::bose(1, 40).unwrap();
    let b1 = BogolubovBlocks::squeeze(0.3);
    let rot = BogolubovBlocks::new(
        CMat::from_element(1, 1, c(0.6, 0.8)),
        CMat::zeros(1, 1),
        BlockKind::Symplectic,
    )
    .unwrap();
    let b2 = rot.compose(&BogolubovBlocks::squeeze(-0.25));
    let (u1, _) = metaplectic_pair(&s, &b1).unwrap();
    let (u2, _) = metaplectic_pair(&s, &b2).unwrap();
    let (u12, _) = metaplectic_pair(&s, &b1.compose(&b2)).unwrap();
    let low = s.projector_upto(6);
    let lhs = &low * u1 * u2 * &low;
    let rhs = &low * u12 * &low;
    assert!(sign_ambiguous_distance(&lhs, &rhs) <= 1e-7);
}

#[test]
fn metaplectic_differs_by_phase() {
    let mut r = random::rng(5);
    let s = FockSpace::bose(2, 6).unwrap();
    let b = random_symplectic(&mut r, 2, 0.2);
    let u = shale_implementer(&s, &b).unwrap();
    let (plus, _) = metaplectic_pair(&s, &b).unwrap();
    let (phase, residual) = best_phase(&plus, &u);
    assert!((phase.norm() - 1.0).abs() < 1e-9);
    assert!(residual < 1e-9 * u.norm());
}

#[test]
fn inverse_implements_adjoint() {
    let mut r = random::rng(9);
    let s = FockSpace::fermi(2).unwrap();
    let b = random_rotation(&mut r, 2);
    let u = shale_implementer(&s, &b).unwrap();
    let v = shale_implementer(&s, &b.inverse().unwrap()).unwrap();
    let (phase, residual) = best_phase(&v, &u.adjoint());
    assert!((phase.norm() - 1.0).abs() < 1e-9 && residual < 1e-9);
}

#[test]
fn positive_blocks_give_squeezers() {
    let mut r = random::rng(13);
    let cb = random::with_norm(random::symmetric(&mut r, 2), 0.3);
    let b = positive_symplectic_from_c(&cb).unwrap();
    assert!(b.validate().max_residual() < 1e-10);
    let s = FockSpace::bose(2, 8).unwrap();
    let diff = shale_implementer(&s, &b).unwrap() - squeezer(&s, &cb).unwrap();
    assert!(diff.norm() <= 1e-7);

    let cf = random::antisymmetric(&mut r, 3);
    let b = positive_orthogonal_from_c(&cf).unwrap();
    assert!(b.validate().max_residual() < 1e-10);
    let f = FockSpace::fermi(3).unwrap();
    let diff = shale_implementer(&f, &b).unwrap() - squeezer(&f, &cf).unwrap();
    assert!(diff.norm() <= 1e-10);

    let zero = positive_orthogonal_from_c(&CMat::zeros(2, 2)).unwrap();
    assert_eq!(zero, BogolubovBlocks::identity(2, BlockKind::Orthogonal));
    let scalar = positive_symplectic_from_c(&CMat::from_element(1, 1, c(0.5, 0.0))).unwrap();
    assert!((scalar.p[(0, 0)] - c(1.0 / 0.75f64.sqrt(), 0.0)).norm() < 1e-14);
}

#[test]
fn positive_blocks_reject_bad_kernels() {
    let asym = CMat::from_row_slice(2, 2, &[ONE, c(0.1, 0.0), c(0.2, 0.0), ONE]);
    assert!(matches!(positive_symplectic_from_c(&asym), Err(Error::SymmetryViolation(_))));
    assert!(matches!(positive_orthogonal_from_c(&asym), Err(Error::SymmetryViolation(_))));
    let big = CMat::from_element(1, 1, c(1.2, 0.0));
    assert!(matches!(positive_symplectic_from_c(&big), Err(Error::NormTooLarge(_))));
}

#[test]
fn degenerate_path_intertwines() {
    let s = FockSpace::fermi(2).unwrap();
    let mut r = random::rng(21);
    let flip = fermi_turn(std::f64::consts::FRAC_PI_2);
    for b in [flip.clone(), random_rotation(&mut r, 2).compose(&flip).compose(&random_rotation(&mut r, 2))] {
        let imp = degenerate_implementer(&s, &b).unwrap();
        let u = &imp.unitary;
        assert!((u.adjoint() * u - s.identity()).norm() < 1e-10);
        for _ in 0..3 {
            let z = random::complex_vector(&mut r, 2);
            assert!(intertwining_residual(&s, &b, u, &z).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn quarter_turn_action_is_rotation() {
    let s = FockSpace::fermi(2).unwrap();
    let u = quarter_turn(&s, 0, 3).unwrap();
    let r0 = conjugation_action(&s, &u).unwrap().to_real();
    assert!((r0[(3, 0)].abs() - 1.0).abs() < 1e-12 && (r0[(0, 3)].abs() - 1.0).abs() < 1e-12);
    assert!((r0[(1, 1)] - 1.0).abs() < 1e-12 && (r0[(2, 2)] - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn block_identities(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = random::rng(seed);
        let b = random_symplectic(&mut r, d, 0.3);
        prop_assert!(b.validate().max_residual() < 1e-9);
        let cd = b.to_cd().unwrap();
        prop_assert!(cd.formula_defect < 1e-9 && cd.symmetry_defect < 1e-9);
        prop_assert!(cd.reconstruction_defect < 1e-8);
        let pp = b.p.adjoint() * &b.p;
        let lhs = identity(d) - &cd.c * cd.c.adjoint();
        prop_assert!((lhs - fockforge_core::linalg::inverse(&pp).unwrap()).norm() < 1e-9);

        let f = random_rotation(&mut r, d);
        let cd = f.to_cd().unwrap();
        prop_assert!(cd.formula_defect < 1e-9 && cd.symmetry_defect < 1e-9);
        let pp = f.p.adjoint() * &f.p;
        let lhs = identity(d) + &cd.c * cd.c.adjoint();
        prop_assert!((lhs - fockforge_core::linalg::inverse(&pp).unwrap()).norm() < 1e-9 * (1.0 + pp.norm()));
    }

    #[test]
    fn real_and_complex_composition_agree(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random_rotation(&mut r, 2);
        let b = random_rotation(&mut r, 2);
        let diff = a.compose(&b).to_real() - a.to_real() * b.to_real();
        prop_assert!(diff.norm() < 1e-12);
    }
}
