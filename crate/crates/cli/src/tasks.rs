//! `fockforge run`: one model file, one report.

use fockforge_core::bogolubov::{BlockKind, BogolubovBlocks};
use fockforge_core::fock::{FockSpace, Statistics};
use fockforge_core::lattice::RealSubspace;
use fockforge_core::linalg::{c, expm_herm, CMat, CVec};
use fockforge_core::pauli_fierz::PauliFierzModel;
use fockforge_core::random::{self, Rng64};
use fockforge_core::thermal::{DoubledRep, ThermalParams};

use crate::battery::{battery, Scale};
use crate::checks::{self, stat_tag};
use crate::model::{ModelFile, Task};
use crate::report::{Check, Report};
use crate::suite::{run_jobs, threads_from_env};
use crate::CliError;

type Out = Result<(), CliError>;

fn probes(r: &mut Rng64, d: usize, n: usize) -> Vec<CVec> {
    (0..n).map(|_| random::complex_vector(r, d)).collect()
}

fn cutoff(m: &ModelFile, default: usize) -> Result<usize, CliError> {
    match m.cutoff {
        Some(0) => Err(CliError::Schema("\"cutoff\" must be positive".into())),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

fn beta(m: &ModelFile) -> Result<f64, CliError> {
    match m.beta {
        Some(b) if b.is_finite() && b > 0.0 => Ok(b),
        Some(b) => Err(CliError::Schema(format!("\"beta\" must be positive and finite, got {b}"))),
        None => Err(CliError::Schema(format!("task {} needs \"beta\"", m.task.name()))),
    }
}

fn expect_dim(field: &str, m: &CMat, d: usize) -> Out {
    if m.shape() != (d, d) {
        return Err(CliError::Schema(format!(
            "\"{field}\" must be {d}x{d}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// The density parameter: `gamma` when given, else e^{−βh}.
fn params(m: &ModelFile, stat: Statistics, h: &CMat) -> Result<ThermalParams, CliError> {
    match m.matrix("gamma")? {
        Some(g) => {
            expect_dim("gamma", &g, h.nrows())?;
            Ok(ThermalParams::new(stat, g)?)
        }
        None => Ok(checks::thermal_params(stat, h, beta(m)?)?),
    }
}

pub fn run_model(m: &ModelFile, seed: u64) -> Result<Report, CliError> {
    let id = m.name.clone().unwrap_or_else(|| m.task.name().to_string());
    let mut rep = Report::new(id, m.task.name(), seed);
    let mut r = random::rng(seed);
    match m.task {
        Task::VerifyCcr => verify_ccr(m, &mut rep, &mut r)?,
        Task::VerifyCar => verify_car(m, &mut rep, &mut r)?,
        Task::Bogolubov => bogolubov(m, &mut rep, &mut r)?,
        Task::Gaussian => gaussian(m, &mut rep, &mut r)?,
        Task::Thermal => thermal(m, &mut rep, &mut r)?,
        Task::Kms => kms(m, &mut rep, &mut r)?,
        Task::Lattice => lattice(m, &mut rep, &mut r)?,
        Task::PauliFierz => pauli_fierz(m, &mut rep)?,
        Task::Suite => suite(m, &mut rep, seed)?,
    }
    Ok(rep)
}

fn pairs(r: &mut Rng64, d: usize, n: usize) -> Vec<(CVec, CVec)> {
    (0..n)
        .map(|_| (random::complex_vector(r, d), random::complex_vector(r, d)))
        .collect()
}

fn verify_ccr(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    if m.statistics.is_some() && m.statistics()? != Statistics::Bose {
        return Err(CliError::Schema("verify-ccr needs \"statistics\": \"bose\"".into()));
    }
    let d = m.require_d()?;
    let space = FockSpace::bose(d, cutoff(m, 10)?)?;
    let n = m.samples.unwrap_or(20);
    checks::ccr(rep, &space, &pairs(r, d, n), m.tolerance("ccr", 1e-12))?;
    Ok(())
}

fn verify_car(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    if m.statistics.is_some() && m.statistics()? != Statistics::Fermi {
        return Err(CliError::Schema("verify-car needs \"statistics\": \"fermi\"".into()));
    }
    let d = m.require_d()?;
    let n = m.samples.unwrap_or(100);
    checks::car(rep, &FockSpace::fermi(d)?, &pairs(r, d, n), m.tolerance("car", 1e-12))?;
    Ok(())
}

fn bogolubov(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    let stat = m.statistics()?;
    let p = m.require_square("p")?;
    let d = p.nrows();
    let q = m.matrix("q")?.unwrap_or_else(|| CMat::zeros(d, d));
    expect_dim("q", &q, d)?;
    let (kind, space, tol) = match stat {
        Statistics::Bose => (BlockKind::Symplectic, FockSpace::bose(d, cutoff(m, 20)?)?, 1e-7),
        Statistics::Fermi => (BlockKind::Orthogonal, FockSpace::fermi(d)?, 1e-10),
    };
    let blocks = BogolubovBlocks::new(p, q, kind)?;
    let z = probes(r, d, m.samples.unwrap_or(3));
    checks::intertwining(rep, &space, &blocks, &z, m.tolerance("intertwining", tol), stat_tag(stat))?;
    Ok(())
}

fn gaussian(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    let stat = m.statistics()?;
    let kernel = m.require_square("kernel")?;
    let d = kernel.nrows();
    let (space, tol) = match stat {
        Statistics::Bose => (FockSpace::bose(d, cutoff(m, 20)?)?, 1e-8),
        Statistics::Fermi => (FockSpace::fermi(d)?, 1e-12),
    };
    let z = probes(r, d, m.samples.unwrap_or(3));
    checks::gaussian_kernel(rep, &space, &kernel, &z, m.tolerance("kernel_condition", tol), stat_tag(stat))?;
    Ok(())
}

fn thermal(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    let stat = m.statistics()?;
    let h = m.require_square("h")?;
    let d = h.nrows();
    let p = params(m, stat, &h)?;
    let gamma = p.gamma.clone();
    let tag = stat_tag(stat);
    match stat {
        Statistics::Fermi => checks::fermi_trace(rep, &gamma, m.tolerance("trace", 1e-12), tag)?,
        Statistics::Bose => checks::bose_trace(rep, &gamma, cutoff(m, 20)?, tag)?,
    }
    let doubled_cutoff = if stat == Statistics::Bose { cutoff(m, 3)?.min(4) } else { 1 };
    let dr = DoubledRep::new(p, doubled_cutoff)?;
    let z = probes(r, d, m.samples.unwrap_or(3));
    let tol = if stat == Statistics::Bose { 1e-6 } else { 1e-10 };
    checks::two_point(rep, &dr, &z, m.tolerance("two_point", tol), tag)?;
    if m.gamma.is_none() {
        checks::delta_liouvillean(rep, &dr, &h, m.tolerance("delta_liouvillean", 1e-9), tag)?;
    }
    Ok(())
}

/// KMS condition of Γ(γ) for the dynamics e^{ith} at inverse temperature β.
/// A γ that is not e^{−βh} fails with the defect named kms_defect.
fn kms(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    let stat = m.statistics()?;
    let h = m.require_square("h")?;
    let d = h.nrows();
    let b = beta(m)?;
    let gamma = match m.matrix("gamma")? {
        Some(g) => {
            expect_dim("gamma", &g, d)?;
            g
        }
        None => expm_herm(&h, c(-b, 0.0))?,
    };
    let space = FockSpace::new(stat, d, cutoff(m, 6)?)?;
    let dim = space.dim();
    let ops: Vec<CMat> = (0..m.samples.unwrap_or(3))
        .map(|_| random::complex_matrix(r, dim, dim))
        .collect();
    let defect = checks::kms_density_defect(&space, &h, &gamma, &ops, b, 0.4)?;
    rep.check(Check::new("kms_defect", defect, m.tolerance("kms_defect", 1e-8)));
    let thermal = expm_herm(&h, c(-b, 0.0))?;
    rep.value("gamma_distance_from_thermal", (&gamma - thermal).norm());
    Ok(())
}

fn lattice(m: &ModelFile, rep: &mut Report, r: &mut Rng64) -> Out {
    let d = m.require_d()?;
    let v = match (m.real_basis(d)?, m.subspace_dim) {
        (Some(b), _) => RealSubspace::new(d, &b)?,
        (None, Some(k)) => RealSubspace::random(r, d, k)?,
        (None, None) => return Err(CliError::Schema("task lattice needs \"basis\" or \"subspace_dim\"".into())),
    };
    checks::duality(rep, &v, m.tolerance("duality", 1e-8), "v")?;
    Ok(())
}

fn pauli_fierz(m: &ModelFile, rep: &mut Report) -> Out {
    let k = m.require_square("k")?;
    let h = m.require_square("h")?;
    let v = m.require_matrix("v")?;
    let gamma = params(m, Statistics::Bose, &h)?;
    let n = cutoff(m, 14)?;
    let model = PauliFierzModel::new(k, h, v, Some(gamma), n)?;
    // Structural identities on a small doubled space; the spectral check at the model cutoff.
    let structure_cutoff = if model.d() == 1 { n.min(6) } else { n.min(2) };
    checks::pf_structure(rep, &model.with_cutoff(structure_cutoff), "structure")?;
    checks::pf_confined(rep, &model, m.tolerance("confined", 1e-5), "confined")?;
    rep.value("ground_energy", checks::pf_ground_energy(&model)?);
    Ok(())
}

/// The whole battery folded into one report, check names prefixed by job id.
fn suite(m: &ModelFile, rep: &mut Report, seed: u64) -> Out {
    let name = m.suite.as_deref().unwrap_or("smoke");
    let scale = Scale::parse(name).ok_or_else(|| CliError::Schema(format!("unknown suite {name:?}")))?;
    let jobs = battery(scale);
    for o in run_jobs(&jobs, seed, threads_from_env()?)? {
        let sub = o.result?;
        for ch in sub.checks {
            rep.check(Check {
                name: format!("{}/{}", o.id, ch.name),
                ..ch
            });
        }
        for (k, x) in sub.values {
            rep.value(format!("{}/{k}", o.id), x);
        }
        rep.notes.extend(sub.notes.into_iter().map(|n| format!("{}: {n}", o.id)));
    }
    Ok(())
}
