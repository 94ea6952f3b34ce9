//! Verification routines shared by model tasks and the suite battery. Each
//! appends checks and diagnostics to a report.

use fockforge_core::bogolubov::{intertwining_residual, metaplectic_pair, shale_implementer, sign_ambiguous_distance};
use fockforge_core::bogolubov::{expected_excitation, truncation_warning, BogolubovBlocks};
use fockforge_core::fock::{FockSpace, Statistics};
use fockforge_core::lattice::{fermionic_duality_check, RealSubspace};
use fockforge_core::linalg::{c, eigvalsh, CMat, CVec};
use fockforge_core::pauli_fierz::{self as pf, PauliFierzModel};
use fockforge_core::reps::{car_defect, ccr_defect, gaussian_kernel_residual, gaussian_vector};
use fockforge_core::thermal::{
    confined_gibbs, confined_modular_oracle, exp_i_generator, fermi_monomial_oracle, kms_scan, left_two_point,
    left_two_point_closed, max_entry_distance, DoubledRep, KmsState, ThermalParams,
};
use fockforge_core::Result;

use crate::report::{Check, Report};

pub fn stat_tag(s: Statistics) -> &'static str {
    match s {
        Statistics::Bose => "bose",
        Statistics::Fermi => "fermi",
    }
}

/// max ‖[φ(y₁),φ(y₂)]₊ − 2y₁αy₂‖ over pairs.
pub fn car(report: &mut Report, space: &FockSpace, pairs: &[(CVec, CVec)], tol: f64) -> Result<()> {
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        worst = worst.max(car_defect(space, a, b)?);
    }
    report.check(Check::new(format!("car_anticommutator_d{}", space.d()), worst, tol));
    report.value(format!("pairs_d{}", space.d()), pairs.len() as f64);
    Ok(())
}

/// max ‖[a(w₁),a*(w₂)] − (w₁|w₂)‖ on sectors below the cutoff.
pub fn ccr(report: &mut Report, space: &FockSpace, pairs: &[(CVec, CVec)], tol: f64) -> Result<()> {
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        worst = worst.max(ccr_defect(space, a, b)?);
    }
    report.check(Check::new(
        format!("ccr_commutator_d{}_n{}", space.d(), space.n_max()),
        worst,
        tol,
    ));
    Ok(())
}

pub fn fermi_trace(report: &mut Report, gamma: &CMat, tol: f64, label: &str) -> Result<()> {
    let space = FockSpace::fermi(gamma.nrows())?;
    let g = confined_gibbs(&space, gamma)?;
    report.check(Check::new(format!("fermi_trace_{label}"), (g.trace - g.closed_form).abs(), tol));
    Ok(())
}

/// |det(1−γ)⁻¹ − Tr_{≤N} Γ(γ)| within the analytic tail Σ_{n>N} C(n+d−1,d−1)g^n.
pub fn bose_trace(report: &mut Report, gamma: &CMat, cutoff: usize, label: &str) -> Result<()> {
    let space = FockSpace::bose(gamma.nrows(), cutoff)?;
    let g = confined_gibbs(&space, gamma)?;
    let gap = g.closed_form - g.trace;
    report.check(Check::new(
        format!("bose_trace_tail_{label}"),
        gap.abs(),
        g.tail_bound + 1e-12 * g.closed_form,
    ));
    report.check(Check::new(format!("bose_trace_below_closed_form_{label}"), (-gap).max(0.0), 1e-12 * g.closed_form));
    report.value(format!("tail_bound_{label}"), g.tail_bound);
    Ok(())
}

/// U_r a*(z) = (a*(pz) + a(qz̄)) U_r and U_r φ(z) = φ(rz) U_r on exact sectors.
pub fn intertwining(
    report: &mut Report,
    space: &FockSpace,
    blocks: &BogolubovBlocks,
    probes: &[CVec],
    tol: f64,
    label: &str,
) -> Result<()> {
    let u = shale_implementer(space, blocks)?;
    let mut worst: f64 = 0.0;
    for z in probes {
        worst = worst.max(intertwining_residual(space, blocks, &u, z)?);
    }
    report.check(Check::new(format!("intertwining_{label}"), worst, tol));
    report.value(format!("expected_excitation_{label}"), expected_excitation(blocks));
    if let Some(w) = truncation_warning(space, blocks) {
        report.note(format!("{label}: {w}"));
    }
    Ok(())
}

/// U_{r₁}U_{r₂} = ±U_{r₁r₂} on sectors ≤ `upto`.
pub fn composition(
    report: &mut Report,
    space: &FockSpace,
    b1: &BogolubovBlocks,
    b2: &BogolubovBlocks,
    upto: usize,
    tol: f64,
    label: &str,
) -> Result<()> {
    let (u1, _) = metaplectic_pair(space, b1)?;
    let (u2, _) = metaplectic_pair(space, b2)?;
    let (u12, _) = metaplectic_pair(space, &b1.compose(b2))?;
    let low = space.projector_upto(upto);
    let lhs = &low * u1 * u2 * &low;
    let rhs = &low * u12 * &low;
    report.check(Check::new(format!("composition_{label}"), sign_ambiguous_distance(&lhs, &rhs), tol));
    Ok(())
}

/// (a(z) ∓ a*(cz̄))Ω_c, restricted to exact sectors for bosons.
pub fn gaussian_kernel(
    report: &mut Report,
    space: &FockSpace,
    kernel: &CMat,
    probes: &[CVec],
    tol: f64,
    label: &str,
) -> Result<()> {
    let g = gaussian_vector(space, kernel)?;
    let top = match space.statistics() {
        Statistics::Bose => space.n_max().saturating_sub(1),
        Statistics::Fermi => space.n_max(),
    };
    let mut worst: f64 = 0.0;
    for z in probes {
        let res = gaussian_kernel_residual(space, kernel, &g.vector, z)?;
        worst = worst.max(space.vector_block_norm(&res, top));
    }
    report.check(Check::new(format!("kernel_condition_{label}"), worst, tol));
    report.value(format!("norm_tail_{label}"), g.norm_defect());
    Ok(())
}

/// Operator two-point functions of the left fields against closed forms.
pub fn two_point(report: &mut Report, rep: &DoubledRep, probes: &[CVec], tol: f64, label: &str) -> Result<()> {
    let mut worst: f64 = 0.0;
    for z1 in probes {
        for z2 in probes {
            let got = left_two_point(rep, z1, z2)?;
            let want = left_two_point_closed(&rep.params, z1, z2);
            for k in 0..5 {
                worst = worst.max((got[k] - want[k]).norm());
            }
        }
    }
    report.check(Check::new(format!("two_point_{label}"), worst, tol));
    Ok(())
}

/// Δ against the polar-decomposition oracle, and J φ_l J = φ_r.
pub fn modular_data(
    report: &mut Report,
    rep: &DoubledRep,
    probes: &[CVec],
    oracle_cutoff: usize,
    tol_delta: f64,
    tol_j: f64,
    label: &str,
) -> Result<()> {
    let (j, delta) = rep.modular_data()?;
    match rep.statistics() {
        Statistics::Fermi => {
            let oracle = fermi_monomial_oracle(rep)?;
            report.check(Check::new(
                format!("delta_vs_oracle_{label}"),
                max_entry_distance(&oracle.delta, &delta),
                tol_delta,
            ));
            report.check(Check::new(
                format!("j_vs_oracle_{label}"),
                max_entry_distance(&oracle.j.u, &j.u),
                tol_delta,
            ));
            report.value(format!("oracle_consistency_{label}"), oracle.consistency);
        }
        Statistics::Bose => {
            let setup = fockforge_core::thermal::ConfinedSetup::new(rep.params.clone(), oracle_cutoff)?;
            let (oracle, delta_pull, j_pull) = confined_modular_oracle(&setup)?;
            report.check(Check::new(
                format!("delta_vs_oracle_{label}"),
                max_entry_distance(&oracle.delta, &delta_pull),
                tol_delta,
            ));
            report.check(Check::new(
                format!("j_vs_oracle_{label}"),
                max_entry_distance(&oracle.j.u, &j_pull),
                tol_delta,
            ));
            report.value(format!("oracle_consistency_{label}"), oracle.consistency);
        }
    }
    let top = rep.exact_sector();
    let mut worst: f64 = 0.0;
    for z in probes {
        let res = j.conjugate(&rep.left_field(z)?) - rep.right_field(z)?;
        worst = worst.max(rep.space.block_norm(&res, top, top));
    }
    report.check(Check::new(format!("j_left_to_right_{label}"), worst, tol_j));
    Ok(())
}

/// Δ = e^{−L}, L = dΓ(h ⊕ −h̄), for γ = e^{−h}.
pub fn delta_liouvillean(report: &mut Report, rep: &DoubledRep, h: &CMat, tol: f64, label: &str) -> Result<()> {
    let delta = rep.modular_operator()?;
    let l = rep.standard_liouvillean(h)?;
    let e = exp_i_generator(&rep.space, &l, c(0.0, 1.0))?;
    report.check(Check::new(format!("delta_exp_minus_l_{label}"), max_entry_distance(&delta, &e), tol));
    Ok(())
}

/// Left fields at the probes plus the identity.
pub fn field_probes(rep: &DoubledRep, probes: &[CVec]) -> Result<Vec<CMat>> {
    let mut out = probes.iter().map(|z| rep.left_field(z)).collect::<Result<Vec<_>>>()?;
    out.push(rep.space.identity());
    Ok(out)
}

/// Largest KMS defect of the vacuum of `rep` for the dynamics generated by dΓ(h ⊕ −h̄).
pub fn kms_vector_defect(rep: &DoubledRep, h: &CMat, probes: &[CVec], beta: f64, t: f64) -> Result<f64> {
    let l = rep.standard_liouvillean(h)?;
    let state = KmsState::Vector(rep.space.vacuum());
    Ok(kms_scan(&rep.space, &l, &state, &field_probes(rep, probes)?, beta, t)?.defect)
}

/// Largest KMS defect of Γ(γ)/TrΓ(γ) on Γ(Z) for the dynamics dΓ(h).
pub fn kms_density_defect(space: &FockSpace, h: &CMat, gamma: &CMat, ops: &[CMat], beta: f64, t: f64) -> Result<f64> {
    let gibbs = confined_gibbs(space, gamma)?;
    let gen = space.dgamma(h)?;
    Ok(kms_scan(space, &gen, &KmsState::Density(gibbs.density_matrix), ops, beta, t)?.defect)
}

pub fn duality(report: &mut Report, v: &RealSubspace, tol: f64, label: &str) -> Result<()> {
    let r = fermionic_duality_check(v)?;
    report.check(Check::new(format!("duality_{label}"), r.defect(), tol));
    report.value(format!("dim_commutant_{label}"), r.dim_commutant as f64);
    if r.gray_zone {
        report.note(format!("{label}: rank decision in the gray zone"));
    }
    Ok(())
}

pub fn thermal_params(stat: Statistics, h: &CMat, beta: f64) -> Result<ThermalParams> {
    ThermalParams::thermal(stat, h, beta)
}

/// Structural identities of the Liouvilleans: Hermiticity, left/right
/// commutation, and Jπ(V_γ)J against its closed form.
pub fn pf_structure(report: &mut Report, model: &PauliFierzModel, label: &str) -> Result<()> {
    let h = pf::hamiltonian(model)?;
    report.check(Check::new(format!("hamiltonian_hermitian_{label}"), (&h - h.adjoint()).norm(), 1e-12));
    let semi = pf::semi_liouvillean(model)?;
    report.check(Check::new(
        format!("semi_hermitian_{label}"),
        (&semi.full - semi.full.adjoint()).norm(),
        1e-12,
    ));
    let l = pf::standard_liouvillean(model)?;
    report.check(Check::new(
        format!("standard_hermitian_{label}"),
        (&l.full - l.full.adjoint()).norm(),
        1e-12,
    ));
    report.check(Check::new(format!("standard_trace_{label}"), l.full.trace().norm(), 1e-9));
    report.check(Check::new(
        format!("left_right_commute_{label}"),
        pf::left_right_commutator_defect(model, &l)?,
        1e-9,
    ));
    report.check(Check::new(
        format!("right_closed_form_{label}"),
        (&l.right - pf::right_interaction_closed(model)?).norm(),
        1e-10,
    ));
    Ok(())
}

/// Spectral equivalences of the confined Liouvilleans with the difference spectra.
pub fn pf_confined(report: &mut Report, model: &PauliFierzModel, tol: f64, label: &str) -> Result<f64> {
    let r = pf::confined_pf_check(model)?;
    report.check(Check::new(format!("semi_spectrum_{label}"), r.semi_deviation, tol));
    report.check(Check::new(format!("standard_spectrum_{label}"), r.standard_deviation, tol));
    report.value(format!("omega_tail_{label}"), r.omega_tail);
    report.value(format!("window_{label}"), r.window);
    report.value(format!("semi_reference_{label}"), r.semi_reference as f64);
    report.value(format!("standard_reference_{label}"), r.standard_reference as f64);
    report.value(format!("h_inv_sqrt_v_{label}"), r.hypothesis.h_inv_sqrt_v);
    if let Some(x) = r.hypothesis.one_plus_rho_sqrt_v {
        report.value(format!("one_plus_rho_sqrt_v_{label}"), x);
    }
    if let Some(x) = r.hypothesis.one_plus_h_one_plus_rho_sqrt_v {
        report.value(format!("one_plus_h_one_plus_rho_sqrt_v_{label}"), x);
    }
    Ok(r.max_deviation())
}

/// Ground energy of H, for reporting.
pub fn pf_ground_energy(model: &PauliFierzModel) -> Result<f64> {
    Ok(eigvalsh(&pf::hamiltonian(model)?)?[0])
}
