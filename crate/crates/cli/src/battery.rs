//! The verification battery run by `fockforge suite`. Every job produces one
//! report; jobs are grouped by the acceptance criterion they exercise.

use fockforge_core::bogolubov::{BlockKind, BogolubovBlocks};
use fockforge_core::fock::{FockSpace, Statistics};
use fockforge_core::lattice::RealSubspace;
use fockforge_core::linalg::{c, expm_herm, CMat, CVec};
use fockforge_core::pauli_fierz::PauliFierzModel;
use fockforge_core::random::{self, Rng64};
use fockforge_core::thermal::DoubledRep;
use fockforge_core::Result;

use crate::checks::{self, stat_tag};
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Smoke,
    Full,
}

impl Scale {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "smoke" => Some(Scale::Smoke),
            "full" => Some(Scale::Full),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scale::Smoke => "smoke",
            Scale::Full => "full",
        }
    }
}

type JobFn = Box<dyn Fn(&mut Report, &mut Rng64) -> Result<()> + Send + Sync>;

pub struct Job {
    pub criterion: u8,
    pub id: String,
    run: JobFn,
}

impl Job {
    fn new(criterion: u8, id: impl Into<String>, run: impl Fn(&mut Report, &mut Rng64) -> Result<()> + Send + Sync + 'static) -> Self {
        Job {
            criterion,
            id: id.into(),
            run: Box::new(run),
        }
    }

    /// Runs the job with a generator derived from `seed` and the job id.
    pub fn run(&self, seed: u64) -> Result<Report> {
        let mut report = Report::new(&self.id, format!("criterion-{}", self.criterion), seed);
        let mut rng = random::rng(seed ^ fnv1a(self.id.as_bytes()));
        (self.run)(&mut report, &mut rng)?;
        Ok(report)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub fn criterion_title(n: u8) -> &'static str {
    match n {
        1 => "CAR exactness",
        2 => "CCR on truncation",
        3 => "determinant/trace identities",
        4 => "Bogolubov intertwining and composition",
        5 => "Gaussian kernel conditions",
        6 => "thermal two-point functions",
        7 => "modular data",
        8 => "KMS condition",
        9 => "fermionic lattice duality",
        10 => "confined Pauli-Fierz equivalences",
        11 => "suite determinism",
        _ => "unknown",
    }
}

/// Wall-clock budget of each criterion in seconds.
pub fn criterion_budget(n: u8) -> f64 {
    match n {
        1 | 2 => 1.0,
        3 => 2.0,
        4 => 30.0,
        5 | 6 | 8 => 10.0,
        7 => 20.0,
        9 => 60.0,
        10 => 120.0,
        _ => f64::INFINITY,
    }
}

fn pairs(r: &mut Rng64, d: usize, n: usize) -> Vec<(CVec, CVec)> {
    (0..n)
        .map(|_| (random::complex_vector(r, d), random::complex_vector(r, d)))
        .collect()
}

fn probes(r: &mut Rng64, d: usize, n: usize) -> Vec<CVec> {
    (0..n).map(|_| random::complex_vector(r, d)).collect()
}

/// A random rotation of R^{2d} whose p block has singular values ≥ 1e−3.
fn nondegenerate_rotation(r: &mut Rng64, d: usize) -> Result<BogolubovBlocks> {
    loop {
        let o = random::special_orthogonal(r, 2 * d);
        let b = BogolubovBlocks::from_real(&o, BlockKind::Orthogonal)?;
        if b.p_min_singular() > 1e-3 {
            return Ok(b);
        }
    }
}

fn random_positive(r: &mut Rng64, d: usize, scale: f64) -> CMat {
    let a = random::complex_matrix(r, d, d);
    &a * a.adjoint() * c(scale / d as f64, 0.0)
}

fn c01(scale: Scale) -> Vec<Job> {
    match scale {
        Scale::Full => (1..=6)
            .map(|d| {
                Job::new(1, format!("c01-car-d{d}"), move |rep, r| {
                    checks::car(rep, &FockSpace::fermi(d)?, &pairs(r, d, 100), 1e-12)
                })
            })
            .collect(),
        Scale::Smoke => vec![Job::new(1, "c01-car", |rep, r| {
            for d in [3, 6] {
                checks::car(rep, &FockSpace::fermi(d)?, &pairs(r, d, 20), 1e-12)?;
            }
            Ok(())
        })],
    }
}

fn c02(scale: Scale) -> Vec<Job> {
    match scale {
        Scale::Full => (1..=3)
            .map(|d| {
                Job::new(2, format!("c02-ccr-d{d}"), move |rep, r| {
                    checks::ccr(rep, &FockSpace::bose(d, 10)?, &pairs(r, d, 20), 1e-12)
                })
            })
            .collect(),
        Scale::Smoke => vec![Job::new(2, "c02-ccr", |rep, r| {
            checks::ccr(rep, &FockSpace::bose(2, 10)?, &pairs(r, 2, 10), 1e-12)
        })],
    }
}

fn c03(scale: Scale) -> Vec<Job> {
    let per_d = if scale == Scale::Full { 3 } else { 1 };
    let fermi = Job::new(3, "c03-trace-fermi", move |rep, r| {
        for d in 1..=4 {
            for k in 0..per_d {
                let g = random_positive(r, d, 1.5);
                checks::fermi_trace(rep, &g, 1e-12, &format!("d{d}_{k}"))?;
            }
        }
        Ok(())
    });
    let bose = Job::new(3, "c03-trace-bose", move |rep, r| {
        for d in 1..=2 {
            for k in 0..per_d {
                let g = random::hermitian_with_spectrum(r, d, 0.0, 0.8);
                checks::bose_trace(rep, &g, 20, &format!("d{d}_{k}"))?;
            }
        }
        Ok(())
    });
    match scale {
        Scale::Full => vec![fermi, bose],
        Scale::Smoke => vec![Job::new(3, "c03-trace", move |rep, r| {
            (fermi.run)(rep, r)?;
            (bose.run)(rep, r)
        })],
    }
}

fn c04(scale: Scale) -> Vec<Job> {
    let (n_fermi, squeezes): (usize, Vec<f64>) = match scale {
        Scale::Full => (20, vec![-0.3, -0.15, 0.1, 0.3]),
        Scale::Smoke => (5, vec![0.3]),
    };
    let n_comp = if scale == Scale::Full { 5 } else { 1 };
    let fermi = Job::new(4, "c04-fermi-intertwining", move |rep, r| {
        for k in 0..n_fermi {
            let d = 1 + k % 3;
            let b = nondegenerate_rotation(r, d)?;
            let space = FockSpace::fermi(d)?;
            let z = probes(r, d, 3);
            checks::intertwining(rep, &space, &b, &z, 1e-10, &format!("r{k}_d{d}"))?;
        }
        Ok(())
    });
    let bose = Job::new(4, "c04-bose-squeeze", move |rep, r| {
        let space = FockSpace::bose(1, 20)?;
        for (k, &t) in squeezes.iter().enumerate() {
            let z = probes(r, 1, 3);
            checks::intertwining(rep, &space, &BogolubovBlocks::squeeze(t), &z, 1e-7, &format!("t{k}"))?;
            rep.value(format!("t{k}"), t);
        }
        Ok(())
    });
    let comp = Job::new(4, "c04-composition", move |rep, r| {
        let space = FockSpace::fermi(3)?;
        let mut done = 0;
        while done < n_comp {
            let (b1, b2) = (nondegenerate_rotation(r, 3)?, nondegenerate_rotation(r, 3)?);
            if b1.compose(&b2).p_min_singular() < 1e-3 {
                continue;
            }
            checks::composition(rep, &space, &b1, &b2, 3, 1e-7, &format!("fermi_{done}"))?;
            done += 1;
        }
        // Bosons: a squeeze times a rotated squeeze, compared on sectors ≤ 6 of cutoff 40.
        let space = FockSpace::bose(1, 40)?;
        let b1 = BogolubovBlocks::squeeze(0.3);
        let rot = BogolubovBlocks::new(CMat::from_element(1, 1, c(0.6, 0.8)), CMat::zeros(1, 1), BlockKind::Symplectic)?;
        let b2 = rot.compose(&BogolubovBlocks::squeeze(-0.25));
        checks::composition(rep, &space, &b1, &b2, 6, 1e-7, "bose")
    });
    match scale {
        Scale::Full => vec![fermi, bose, comp],
        Scale::Smoke => vec![Job::new(4, "c04-bogolubov", move |rep, r| {
            (fermi.run)(rep, r)?;
            (bose.run)(rep, r)?;
            (comp.run)(rep, r)
        })],
    }
}

fn c05(scale: Scale) -> Vec<Job> {
    let n = if scale == Scale::Full { 20 } else { 5 };
    let bose = Job::new(5, "c05-gaussian-bose", move |rep, r| {
        for k in 0..n {
            let d = 1 + k % 2;
            let kernel = random::with_norm(random::symmetric(r, d), 0.5);
            let space = FockSpace::bose(d, 20)?;
            checks::gaussian_kernel(rep, &space, &kernel, &probes(r, d, 2), 1e-8, &format!("c{k}_d{d}"))?;
        }
        Ok(())
    });
    let fermi = Job::new(5, "c05-gaussian-fermi", move |rep, r| {
        for k in 0..n {
            let d = 2 + k % 3;
            let kernel = random::with_norm(random::antisymmetric(r, d), 1.3);
            let space = FockSpace::fermi(d)?;
            checks::gaussian_kernel(rep, &space, &kernel, &probes(r, d, 2), 1e-12, &format!("c{k}_d{d}"))?;
        }
        Ok(())
    });
    match scale {
        Scale::Full => vec![bose, fermi],
        Scale::Smoke => vec![Job::new(5, "c05-gaussian", move |rep, r| {
            (bose.run)(rep, r)?;
            (fermi.run)(rep, r)
        })],
    }
}

fn two_point_job(stat: Statistics, beta: f64, rep: &mut Report, r: &mut Rng64) -> Result<()> {
    let tol = match stat {
        Statistics::Bose => 1e-6,
        Statistics::Fermi => 1e-10,
    };
    for d in 1..=2 {
        let h = random::hermitian_with_spectrum(r, d, 0.3, 1.5);
        let dr = DoubledRep::new(checks::thermal_params(stat, &h, beta)?, 3)?;
        checks::two_point(rep, &dr, &probes(r, d, 3), tol, &format!("{}_beta{beta}_d{d}", stat_tag(stat)))?;
    }
    Ok(())
}

fn c06(scale: Scale) -> Vec<Job> {
    match scale {
        Scale::Full => {
            let mut jobs = Vec::new();
            for stat in [Statistics::Bose, Statistics::Fermi] {
                for beta in [0.5, 1.0, 2.0] {
                    jobs.push(Job::new(6, format!("c06-two-point-{}-beta{beta}", stat_tag(stat)), move |rep, r| {
                        two_point_job(stat, beta, rep, r)
                    }));
                }
            }
            jobs
        }
        Scale::Smoke => vec![Job::new(6, "c06-two-point", |rep, r| {
            two_point_job(Statistics::Bose, 1.0, rep, r)?;
            two_point_job(Statistics::Fermi, 1.0, rep, r)
        })],
    }
}

fn c07(scale: Scale) -> Vec<Job> {
    let dims: Vec<usize> = if scale == Scale::Full { vec![1, 2] } else { vec![1] };
    let d_fermi = dims.clone();
    let fermi = Job::new(7, "c07-modular-fermi", move |rep, r| {
        for &d in &d_fermi {
            let h = random::hermitian_with_spectrum(r, d, 0.3, 1.5);
            let dr = DoubledRep::new(checks::thermal_params(Statistics::Fermi, &h, 1.0)?, 1)?;
            checks::modular_data(rep, &dr, &probes(r, d, 3), 1, 1e-7, 1e-10, &format!("d{d}"))?;
        }
        Ok(())
    });
    let d_bose = dims.clone();
    let bose = Job::new(7, "c07-modular-bose", move |rep, r| {
        for &d in &d_bose {
            let oracle_cutoff = if d == 1 { 5 } else { 2 };
            let h = random::hermitian_with_spectrum(r, d, 0.4, 1.2);
            let dr = DoubledRep::new(checks::thermal_params(Statistics::Bose, &h, 1.0)?, 4)?;
            checks::modular_data(rep, &dr, &probes(r, d, 3), oracle_cutoff, 1e-7, 1e-10, &format!("d{d}"))?;
        }
        Ok(())
    });
    let delta = Job::new(7, "c07-delta-liouvillean", move |rep, r| {
        for stat in [Statistics::Bose, Statistics::Fermi] {
            for &d in &dims {
                let h = random::hermitian_with_spectrum(r, d, 0.3, 1.5);
                let dr = DoubledRep::new(checks::thermal_params(stat, &h, 1.0)?, 2)?;
                checks::delta_liouvillean(rep, &dr, &h, 1e-9, &format!("{}_d{d}", stat_tag(stat)))?;
            }
        }
        Ok(())
    });
    match scale {
        Scale::Full => vec![fermi, bose, delta],
        Scale::Smoke => vec![Job::new(7, "c07-modular", move |rep, r| {
            (fermi.run)(rep, r)?;
            (bose.run)(rep, r)?;
            (delta.run)(rep, r)
        })],
    }
}

fn kms_job(stat: Statistics, betas: &[f64], rep: &mut Report, r: &mut Rng64) -> Result<()> {
    let tag = stat_tag(stat);
    let h = random::hermitian_with_spectrum(r, 2, 0.3, 1.2);
    let z = probes(r, 2, 3);
    for &beta in betas {
        let good = DoubledRep::new(checks::thermal_params(stat, &h, beta)?, 2)?;
        let bad = DoubledRep::new(checks::thermal_params(stat, &h, 2.0 * beta)?, 2)?;
        let ok = checks::kms_vector_defect(&good, &h, &z, beta, 0.3)?;
        let wrong = checks::kms_vector_defect(&bad, &h, &z, beta, 0.3)?;
        rep.check(Check::new(format!("kms_vector_{tag}_beta{beta}"), ok, 1e-8));
        rep.check(Check::separation(format!("kms_vector_mismatch_{tag}_beta{beta}"), wrong, 1e-4));
        rep.value(format!("kms_vector_mismatch_defect_{tag}_beta{beta}"), wrong);

        let space = FockSpace::new(stat, 2, 6)?;
        let dim = space.dim();
        let ops: Vec<CMat> = (0..3).map(|_| random::complex_matrix(r, dim, dim)).collect();
        let gamma = expm_herm(&h, c(-beta, 0.0))?;
        let gamma_bad = expm_herm(&h, c(-2.0 * beta, 0.0))?;
        let ok = checks::kms_density_defect(&space, &h, &gamma, &ops, beta, 0.4)?;
        let wrong = checks::kms_density_defect(&space, &h, &gamma_bad, &ops, beta, 0.4)?;
        rep.check(Check::new(format!("kms_density_{tag}_beta{beta}"), ok, 1e-8));
        rep.check(Check::separation(format!("kms_density_mismatch_{tag}_beta{beta}"), wrong, 1e-4));
        rep.value(format!("kms_density_mismatch_defect_{tag}_beta{beta}"), wrong);
    }
    Ok(())
}

fn c08(scale: Scale) -> Vec<Job> {
    match scale {
        Scale::Full => [Statistics::Fermi, Statistics::Bose]
            .into_iter()
            .map(|stat| {
                Job::new(8, format!("c08-kms-{}", stat_tag(stat)), move |rep, r| {
                    kms_job(stat, &[0.5, 1.0], rep, r)
                })
            })
            .collect(),
        Scale::Smoke => vec![Job::new(8, "c08-kms", |rep, r| {
            kms_job(Statistics::Fermi, &[1.0], rep, r)?;
            kms_job(Statistics::Bose, &[1.0], rep, r)
        })],
    }
}

fn c09(scale: Scale) -> Vec<Job> {
    let n = if scale == Scale::Full { 10 } else { 3 };
    vec![Job::new(9, "c09-duality", move |rep, r| {
        for i in 0..n {
            let k = 1 + i % 3;
            let v = RealSubspace::random(r, 2, k)?;
            checks::duality(rep, &v, 1e-8, &format!("v{i}_k{k}"))?;
        }
        Ok(())
    })]
}

fn confined_series(rep: &mut Report, cutoffs: &[usize], tol_last: f64, tol_each: f64) -> Result<()> {
    let mut devs = Vec::new();
    for (i, &n) in cutoffs.iter().enumerate() {
        let model = PauliFierzModel::spin_boson(0.1, Some(0.25), n)?;
        let tol = if i + 1 == cutoffs.len() { tol_last } else { tol_each };
        devs.push(checks::pf_confined(rep, &model, tol, &format!("n{n}"))?);
    }
    let ratio = devs.windows(2).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
    let mut mono = Check::new("monotone_improvement", ratio, 1.0);
    mono.pass = ratio.is_finite() && ratio < 1.0;
    rep.check(mono);
    Ok(())
}

fn c10(scale: Scale) -> Vec<Job> {
    match scale {
        Scale::Full => vec![
            Job::new(10, "c10-pf-structure", |rep, r| {
                checks::pf_structure(rep, &PauliFierzModel::spin_boson(0.1, Some(0.25), 6)?, "spin_boson")?;
                let k = random::hermitian(r, 2);
                let h = random::hermitian_with_spectrum(r, 2, 0.5, 1.5);
                let v = random::complex_matrix(r, 4, 2) * c(0.2, 0.0);
                let g = checks::thermal_params(Statistics::Bose, &h, 1.3)?;
                checks::pf_structure(rep, &PauliFierzModel::new(k, h, v, Some(g), 3)?, "generic")
            }),
            Job::new(10, "c10-pf-confined", |rep, _| confined_series(rep, &[8, 10, 12, 14], 1e-5, 1e-2)),
        ],
        Scale::Smoke => vec![Job::new(10, "c10-pauli-fierz", |rep, _| {
            checks::pf_structure(rep, &PauliFierzModel::spin_boson(0.1, Some(0.25), 4)?, "spin_boson")?;
            let free = PauliFierzModel::spin_boson(0.0, Some(0.25), 6)?;
            checks::pf_confined(rep, &free, 1e-10, "free")?;
            confined_series(rep, &[8, 10], 1e-3, 1e-2)
        })],
    }
}

/// All jobs of a suite, in report order.
pub fn battery(scale: Scale) -> Vec<Job> {
    let mut jobs = Vec::new();
    for f in [c01, c02, c03, c04, c05, c06, c07, c08, c09, c10] {
        jobs.extend(f(scale));
    }
    jobs
}
