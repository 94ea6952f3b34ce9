//! Araki-Woods and Araki-Wyss representations on the doubled Fock space
//! Γ(Z ⊕ Z̄), tracial fields, modular data, KMS checks and the confined-gas
//! identifications.
//!
//! The doubled one-particle space is C^{2d}: modes 0..d carry Z, modes d..2d
//! carry Z̄ in the basis ē_i, so z̄ has coordinates conj(z) and ā acts as conj(a).
//! Bosonic thermal fields are the identified fields (a* + a)/√2; fermionic ones
//! are a* + a.

use crate::error::{Error, Result};
use crate::fock::{ExpLaw, FockSpace, Statistics};
use crate::linalg::{
    c, direct_sum, eigh, mul_sparse_left, mul_sparse_right, herm_apply, identity, inner, inverse, require_square, sqrt_psd, CMat, CVec, C64,
    ONE, ZERO,
};
use crate::reps::{field, gaussian_vector, squeezer, squeezer_apply, GaussianVector};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalParams {
    pub statistics: Statistics,
    pub gamma: CMat,
    pub h: Option<CMat>,
    pub beta: Option<f64>,
}

impl ThermalParams {
    /// Bose: 0 ≤ γ < 1. Fermi: γ ≥ 0.
    pub fn new(statistics: Statistics, gamma: CMat) -> Result<Self> {
        let d = require_square(&gamma)?;
        if d == 0 {
            return Err(Error::InvalidArgument("empty one-particle space".into()));
        }
        let herm = (&gamma - gamma.adjoint()).norm();
        if herm > tol::ALGEBRAIC * gamma.norm().max(1.0) {
            return Err(Error::SymmetryViolation(herm));
        }
        let (ev, _) = eigh(&gamma)?;
        if ev[0] < -tol::SPECTRAL {
            return Err(Error::KernelViolation(format!("γ has negative eigenvalue {:e}", ev[0])));
        }
        if statistics == Statistics::Bose && ev[d - 1] >= 1.0 - tol::SPECTRAL {
            return Err(Error::KernelViolation(format!(
                "bosonic γ needs spectrum below 1, found {}",
                ev[d - 1]
            )));
        }
        Ok(ThermalParams {
            statistics,
            gamma,
            h: None,
            beta: None,
        })
    }

    /// γ = e^{−βh}.
    pub fn thermal(statistics: Statistics, h: &CMat, beta: f64) -> Result<Self> {
        let gamma = herm_apply(h, |x| c((-beta * x).exp(), 0.0))?;
        let mut p = Self::new(statistics, gamma)?;
        p.h = Some(h.clone());
        p.beta = Some(beta);
        Ok(p)
    }

    pub fn with_h(mut self, h: CMat) -> Result<Self> {
        check_commutes(&h, &self.gamma)?;
        self.h = Some(h);
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.gamma.nrows()
    }

    /// ρ = γ(1−γ)⁻¹ (Bose) or χ = γ(γ+1)⁻¹ (Fermi).
    pub fn density(&self) -> CMat {
        match self.statistics {
            Statistics::Bose => herm_apply(&self.gamma, |g| c(g / (1.0 - g), 0.0)),
            Statistics::Fermi => herm_apply(&self.gamma, |g| c(g / (1.0 + g), 0.0)),
        }
        .expect("γ is Hermitian")
    }

    fn density_root(&self) -> CMat {
        sqrt_psd(&self.density()).expect("density is positive")
    }

    /// (1+ρ)^{1/2} (Bose) or (1−χ)^{1/2} (Fermi).
    fn complement_root(&self) -> CMat {
        match self.statistics {
            Statistics::Bose => herm_apply(&self.gamma, |g| c((1.0 / (1.0 - g)).sqrt(), 0.0)),
            Statistics::Fermi => herm_apply(&self.gamma, |g| c((1.0 / (1.0 + g)).sqrt(), 0.0)),
        }
        .expect("γ is Hermitian")
    }
}

fn check_commutes(a: &CMat, b: &CMat) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: format!("{:?}", b.shape()),
            got: format!("{:?}", a.shape()),
        });
    }
    let defect = (a * b - b * a).norm();
    if defect > tol::ALGEBRAIC * (1.0 + a.norm() * b.norm()) {
        return Err(Error::CommutationViolation(defect));
    }
    Ok(())
}

/// An antiunitary operator x ↦ u·conj(x) in the occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Antiunitary {
    pub u: CMat,
}

impl Antiunitary {
    pub fn apply(&self, v: &CVec) -> CVec {
        &self.u * v.conjugate()
    }

    /// J A J⁻¹ = u Ā u*.
    pub fn conjugate(&self, a: &CMat) -> CMat {
        &self.u * a.conjugate() * self.u.adjoint()
    }

    /// ‖J² − 1‖ = ‖u ū − 1‖.
    pub fn involution_defect(&self) -> f64 {
        (&self.u * self.u.conjugate() - identity(self.u.nrows())).norm()
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.u.adjoint() * &self.u - identity(self.u.nrows())).norm()
    }
}

/// Araki-Woods (Bose) or Araki-Wyss (Fermi) representation on Γ(Z ⊕ Z̄).
#[derive(Debug, Clone)]
pub struct DoubledRep {
    pub params: ThermalParams,
    pub space: FockSpace,
}

impl DoubledRep {
    /// `cutoff` is the single-sided bosonic cutoff; the doubled space uses twice it.
    pub fn new(params: ThermalParams, cutoff: usize) -> Result<Self> {
        let d = params.d();
        let space = match params.statistics {
            Statistics::Bose => FockSpace::bose(2 * d, 2 * cutoff)?,
            Statistics::Fermi => FockSpace::fermi(2 * d)?,
        };
        Ok(DoubledRep { params, space })
    }

    pub fn d(&self) -> usize {
        self.params.d()
    }

    pub fn statistics(&self) -> Statistics {
        self.params.statistics
    }

    fn require(&self, s: Statistics) -> Result<()> {
        if self.statistics() != s {
            return Err(Error::StatisticsMismatch(format!(
                "operation needs a {} representation",
                s.name()
            )));
        }
        Ok(())
    }

    fn check_len(&self, z: &CVec) -> Result<()> {
        crate::linalg::require_len(z, self.d())
    }

    /// Coordinates of (z1, z̄2) given z1 and the coordinates of z̄2.
    fn pair(&self, z1: CVec, z2bar: CVec) -> CVec {
        crate::reps::DoubledVector::new(z1, z2bar).concat()
    }

    /// Leg vectors of the left field: ((1+ρ)^{1/2}z, conj(ρ^{1/2}z)) or ((1−χ)^{1/2}z, conj(χ^{1/2}z)).
    fn left_vector(&self, z: &CVec) -> CVec {
        let p = &self.params;
        self.pair(p.complement_root() * z, (p.density_root() * z).conjugate())
    }

    /// Leg vectors of the right field: (ρ^{1/2}z, conj((1+ρ)^{1/2}z)) and the fermionic analogue.
    fn right_vector(&self, z: &CVec) -> CVec {
        let p = &self.params;
        self.pair(p.density_root() * z, (p.complement_root() * z).conjugate())
    }

    fn raw_field(&self, w: &CVec) -> Result<CMat> {
        let f = field(&self.space, w)?;
        Ok(match self.statistics() {
            Statistics::Bose => f / c(std::f64::consts::SQRT_2, 0.0),
            Statistics::Fermi => f,
        })
    }

    /// φ((1+ρ)^{1/2}z, ρ̄^{1/2}z̄).
    pub fn aw_left_field(&self, z: &CVec) -> Result<CMat> {
        self.require(Statistics::Bose)?;
        self.check_len(z)?;
        self.raw_field(&self.left_vector(z))
    }

    /// φ(ρ^{1/2}z, (ρ̄+1)^{1/2}z̄).
    pub fn aw_right_field(&self, z: &CVec) -> Result<CMat> {
        self.require(Statistics::Bose)?;
        self.check_len(z)?;
        self.raw_field(&self.right_vector(z))
    }

    /// φ((1−χ)^{1/2}z, χ̄^{1/2}z̄).
    pub fn awy_left_field(&self, z: &CVec) -> Result<CMat> {
        self.require(Statistics::Fermi)?;
        self.check_len(z)?;
        self.raw_field(&self.left_vector(z))
    }

    /// Λ φ(χ^{1/2}z, (1−χ̄)^{1/2}z̄) Λ.
    pub fn awy_right_field(&self, z: &CVec) -> Result<CMat> {
        self.require(Statistics::Fermi)?;
        self.check_len(z)?;
        let l = self.space.lambda_op();
        Ok(&l * self.raw_field(&self.right_vector(z))? * &l)
    }

    pub fn left_field(&self, z: &CVec) -> Result<CMat> {
        match self.statistics() {
            Statistics::Bose => self.aw_left_field(z),
            Statistics::Fermi => self.awy_left_field(z),
        }
    }

    pub fn right_field(&self, z: &CVec) -> Result<CMat> {
        match self.statistics() {
            Statistics::Bose => self.aw_right_field(z),
            Statistics::Fermi => self.awy_right_field(z),
        }
    }

    /// a*(P z, 0) + a(0, conj(D^{1/2} z)), P = (1+ρ)^{1/2} or (1−χ)^{1/2}.
    pub fn left_create(&self, z: &CVec) -> Result<CMat> {
        self.check_len(z)?;
        let p = &self.params;
        let zero = CVec::zeros(self.d());
        let up = self.pair(p.complement_root() * z, zero.clone());
        let down = self.pair(zero, (p.density_root() * z).conjugate());
        Ok(self.space.create(&up)? + self.space.annihilate(&down)?)
    }

    pub fn left_annihilate(&self, z: &CVec) -> Result<CMat> {
        Ok(self.left_create(z)?.adjoint())
    }

    /// a(D^{1/2}z, 0) + a*(0, conj(P z)), Λ-dressed for fermions.
    pub fn right_create(&self, z: &CVec) -> Result<CMat> {
        self.check_len(z)?;
        let p = &self.params;
        let zero = CVec::zeros(self.d());
        let down = self.pair(p.density_root() * z, zero.clone());
        let up = self.pair(zero, (p.complement_root() * z).conjugate());
        let op = self.space.annihilate(&down)? + self.space.create(&up)?;
        Ok(match self.statistics() {
            Statistics::Bose => op,
            Statistics::Fermi => {
                let l = self.space.lambda_op();
                &l * op * &l
            }
        })
    }

    pub fn right_annihilate(&self, z: &CVec) -> Result<CMat> {
        Ok(self.right_create(z)?.adjoint())
    }

    /// Γ(swap) on the doubled space: exchanges the two legs.
    fn gamma_swap(&self) -> Result<CMat> {
        let d = self.d();
        let mut swap = CMat::zeros(2 * d, 2 * d);
        for i in 0..d {
            swap[(i, d + i)] = ONE;
            swap[(d + i, i)] = ONE;
        }
        self.space.gamma(&swap)
    }

    /// J_s = Γ(ε) or J_a = ΛΓ(ε), with ε(z1, z̄2) = (z2, z̄1).
    pub fn modular_conjugation(&self) -> Result<Antiunitary> {
        let g = self.gamma_swap()?;
        Ok(Antiunitary {
            u: match self.statistics() {
                Statistics::Bose => g,
                Statistics::Fermi => self.space.lambda_op() * g,
            },
        })
    }

    /// Δ = Γ(γ ⊕ γ̄⁻¹).
    pub fn modular_operator(&self) -> Result<CMat> {
        let (ev, vecs) = eigh(&self.params.gamma)?;
        let bad: Vec<usize> = (0..ev.len()).filter(|&k| ev[k] <= tol::SPECTRAL).collect();
        if !bad.is_empty() {
            let v = vecs.column(bad[0]);
            return Err(Error::KernelViolation(format!(
                "Ker γ ≠ {{0}}: eigenvalue {:e} with eigenvector {:?}",
                ev[bad[0]],
                v.iter().map(|x| [x.re, x.im]).collect::<Vec<_>>()
            )));
        }
        let inv = inverse(&self.params.gamma)?.conjugate();
        self.space.gamma(&direct_sum(&self.params.gamma, &inv))
    }

    pub fn modular_data(&self) -> Result<(Antiunitary, CMat)> {
        Ok((self.modular_conjugation()?, self.modular_operator()?))
    }

    /// L = dΓ(h ⊕ (−h̄)).
    pub fn standard_liouvillean(&self, h: &CMat) -> Result<CMat> {
        check_commutes(h, &self.params.gamma)?;
        self.space.dgamma(&direct_sum(h, &(-h.conjugate())))
    }

    /// The Gaussian kernel [[0, γ^{1/2}], [±γ̄^{1/2}, 0]].
    pub fn gamma_kernel(&self) -> Result<CMat> {
        let d = self.d();
        let root = sqrt_psd(&self.params.gamma)?;
        let sign = self.statistics().sign();
        let mut k = CMat::zeros(2 * d, 2 * d);
        k.view_mut((0, d), (d, d)).copy_from(&root);
        k.view_mut((d, 0), (d, d)).copy_from(&(root.conjugate() * c(sign, 0.0)));
        Ok(k)
    }

    /// Ω_γ = det(1∓γ)^{±1/2} exp(½a*(c))Ω.
    pub fn omega_gamma(&self) -> Result<GaussianVector> {
        gaussian_vector(&self.space, &self.gamma_kernel()?)
    }

    /// R_γ, the squeezer of the kernel of Ω_γ.
    pub fn r_gamma(&self) -> Result<CMat> {
        squeezer(&self.space, &self.gamma_kernel()?)
    }

    /// R_γ v.
    pub fn r_gamma_apply(&self, v: &CVec) -> Result<CVec> {
        squeezer_apply(&self.space, &self.gamma_kernel()?, v)
    }

    /// Largest sector on which products of two ladder operators are exact.
    pub fn exact_sector(&self) -> usize {
        match self.statistics() {
            Statistics::Bose => self.space.n_max().saturating_sub(1),
            Statistics::Fermi => self.space.n_max(),
        }
    }
}

/// Tracial fields on Γ_a(W), W = V ⊕ iV = C^m: φ_l(v) = φ(v), φ_r(v) = Λφ(v)Λ for real v.
pub fn tracial_field(space: &FockSpace, v: &[f64], right: bool) -> Result<CMat> {
    if space.statistics() != Statistics::Fermi {
        return Err(Error::StatisticsMismatch("tracial fields are fermionic".into()));
    }
    let w = CVec::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)));
    let f = field(space, &w)?;
    Ok(if right {
        let l = space.lambda_op();
        &l * f * &l
    } else {
        f
    })
}

/// e^{i z H} for Hermitian H, computed per particle-number sector when H
/// conserves the particle number so that no round-off crosses sectors.
pub fn exp_i_generator(space: &FockSpace, h: &CMat, z: C64) -> Result<CMat> {
    let dim = space.dim();
    if h.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch {
            expected: format!("{dim}x{dim}"),
            got: format!("{:?}", h.shape()),
        });
    }
    let number = space.number();
    let conserves = (h * &number - &number * h).norm() <= tol::ALGEBRAIC * (1.0 + h.norm());
    let iz = c(0.0, 1.0) * z;
    if !conserves {
        return crate::linalg::expm_herm(h, iz);
    }
    let mut out = CMat::zeros(dim, dim);
    for n in 0..=space.n_max() {
        let idx: Vec<usize> = (0..dim).filter(|&s| space.total(s) == n).collect();
        if idx.is_empty() {
            continue;
        }
        let block = CMat::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])]);
        let e = crate::linalg::expm_herm(&block, iz)?;
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate() {
                out[(a, b)] = e[(i, j)];
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum KmsState {
    /// ω(X) = (Ψ|XΨ).
    Vector(CVec),
    /// ω(X) = Tr(σX).
    Density(CMat),
}

impl KmsState {
    fn expect(&self, x: &CMat) -> C64 {
        match self {
            KmsState::Vector(v) => inner(v, &(x * v)),
            KmsState::Density(s) => (s * x).trace(),
        }
    }
}

/// |ω(A τ^{t+iβ}(B)) − ω(τ^t(B) A)| with τ^z(B) = e^{izH} B e^{−izH}.
pub fn kms_defect(
    space: &FockSpace,
    generator: &CMat,
    state: &KmsState,
    a: &CMat,
    b: &CMat,
    beta: f64,
    t: f64,
) -> Result<f64> {
    let z = c(t, beta);
    let lhs = match state {
        // For vector states evaluate on vectors, so that e^{∓βH} only meets
        // the low sectors that A*Ψ and BΨ occupy.
        KmsState::Vector(v) => {
            let fwd = exp_i_generator(space, generator, z)?;
            let back = exp_i_generator(space, generator, -z)?;
            let right = &fwd * (b * (&back * v));
            inner(&(a.adjoint() * v), &right)
        }
        KmsState::Density(_) => {
            let fwd = exp_i_generator(space, generator, z)?;
            let back = exp_i_generator(space, generator, -z)?;
            state.expect(&(a * fwd * b * back))
        }
    };
    let fwd = exp_i_generator(space, generator, c(t, 0.0))?;
    let tb = &fwd * b * fwd.adjoint();
    let rhs = state.expect(&(tb * a));
    Ok((lhs - rhs).norm())
}

#[derive(Debug, Clone)]
pub struct KmsWitness {
    pub defect: f64,
    /// Indices into the probe family of the pair attaining `defect`.
    pub pair: (usize, usize),
}

/// Largest KMS defect over ordered pairs of a probe family.
pub fn kms_scan(
    space: &FockSpace,
    generator: &CMat,
    state: &KmsState,
    probes: &[CMat],
    beta: f64,
    t: f64,
) -> Result<KmsWitness> {
    let mut best = KmsWitness {
        defect: 0.0,
        pair: (0, 0),
    };
    for (i, a) in probes.iter().enumerate() {
        for (j, b) in probes.iter().enumerate() {
            let d = kms_defect(space, generator, state, a, b, beta, t)?;
            if d > best.defect {
                best = KmsWitness { defect: d, pair: (i, j) };
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct GibbsData {
    pub density_matrix: CMat,
    pub trace: f64,
    /// det(1−γ)⁻¹ (Bose) or det(1+γ) (Fermi).
    pub closed_form: f64,
    /// Analytic bound on the bosonic truncation tail Σ_{n>N} TrΓ_n(γ); zero for fermions.
    pub tail_bound: f64,
}

/// Γ(γ)/TrΓ(γ) on `space` with the trace and its closed form.
pub fn confined_gibbs(space: &FockSpace, gamma: &CMat) -> Result<GibbsData> {
    let d = require_square(gamma)?;
    if d != space.d() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", space.d(), space.d()),
            got: format!("{d}x{d}"),
        });
    }
    let (ev, _) = eigh(gamma)?;
    if ev[0] < -tol::SPECTRAL {
        return Err(Error::KernelViolation(format!("γ has negative eigenvalue {:e}", ev[0])));
    }
    let g = space.gamma(gamma)?;
    let trace = g.trace().re;
    let (closed_form, tail_bound) = match space.statistics() {
        Statistics::Bose => {
            let top = ev[d - 1];
            if top >= 1.0 {
                return Err(Error::KernelViolation(format!("bosonic γ needs spectrum below 1, found {top}")));
            }
            let closed = 1.0 / ev.iter().map(|x| 1.0 - x).product::<f64>();
            // Σ_{n>N} C(n+d−1, d−1) g^n with g the largest eigenvalue.
            let mut tail = 0.0;
            let mut n = space.n_max() + 1;
            loop {
                let term = crate::fock::binomial((n + d - 1) as u128, (d - 1) as u128) as f64 * top.powi(n as i32);
                tail += term;
                if term < 1e-18 * tail.max(f64::MIN_POSITIVE) || top == 0.0 || n > space.n_max() + 100_000 {
                    break;
                }
                n += 1;
            }
            (closed, tail)
        }
        Statistics::Fermi => (ev.iter().map(|x| 1.0 + x).product::<f64>(), 0.0),
    };
    Ok(GibbsData {
        density_matrix: g / c(trace, 0.0),
        trace,
        closed_form,
        tail_bound,
    })
}

/// The modular pair of S: Xᵢ ↦ Yᵢ (S AΩ = A*Ω), from its polar decomposition.
#[derive(Debug, Clone)]
pub struct ModularOracle {
    pub j: Antiunitary,
    pub delta: CMat,
    /// ‖M conj(X) − Y‖: whether the antilinear map is consistent on the family.
    pub consistency: f64,
}

/// Columns of `x` are AΩ and columns of `y` are A*Ω for a spanning family of A.
/// Writing S = M∘conj gives Δ = S*S = Mᵀ conj(M) and J = S Δ^{−1/2}.
pub fn modular_oracle(x: &CMat, y: &CMat) -> Result<ModularOracle> {
    let xc = x.conjugate();
    let svd = xc.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let pinv = svd
        .pseudo_inverse(tol::KERNEL_REL * smax)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let m = y * pinv;
    let consistency = (&m * &xc - y).norm();
    let delta = m.transpose() * m.conjugate();
    let delta = (&delta + delta.adjoint()) * c(0.5, 0.0);
    let inv_root = herm_apply(&delta, |v| c(1.0 / v.max(f64::MIN_POSITIVE).sqrt(), 0.0))?;
    let u = &m * inv_root.conjugate();
    Ok(ModularOracle {
        j: Antiunitary { u },
        delta,
        consistency,
    })
}

/// Oracle for the Araki-Wyss representation from all ordered monomials in
/// the left fields φ_l(e_k), φ_l(i e_k).
pub fn fermi_monomial_oracle(rep: &DoubledRep) -> Result<ModularOracle> {
    rep.require(Statistics::Fermi)?;
    let d = rep.d();
    let mut gens = Vec::with_capacity(2 * d);
    for k in 0..d {
        for phase in [ONE, c(0.0, 1.0)] {
            let mut z = CVec::zeros(d);
            z[k] = phase;
            gens.push(rep.awy_left_field(&z)?);
        }
    }
    let omega = rep.space.vacuum();
    let count = 1usize << gens.len();
    let dim = rep.space.dim();
    let mut x = CMat::zeros(dim, count);
    let mut y = CMat::zeros(dim, count);
    for mask in 0..count {
        let mut a = rep.space.identity();
        for (k, g) in gens.iter().enumerate() {
            if mask & (1 << k) != 0 {
                a = a * g;
            }
        }
        x.set_column(mask, &(&a * &omega));
        y.set_column(mask, &(a.adjoint() * &omega));
    }
    modular_oracle(&x, &y)
}

/// The confined standard representation: Γ(Z) ⊗ Γ(Z̄) embedded in Γ(Z ⊕ Z̄).
#[derive(Debug, Clone)]
pub struct ConfinedSetup {
    pub single: FockSpace,
    pub law: ExpLaw,
    pub rep: DoubledRep,
}

impl ConfinedSetup {
    pub fn new(params: ThermalParams, cutoff: usize) -> Result<Self> {
        let rep = DoubledRep::new(params, cutoff)?;
        let single = FockSpace::new(rep.statistics(), rep.d(), cutoff)?;
        let law = ExpLaw::into_target(&single, &single, rep.space.clone())?;
        Ok(ConfinedSetup { single, law, rep })
    }

    fn lambda_diag(&self) -> CMat {
        match self.single.statistics() {
            Statistics::Bose => self.single.identity(),
            Statistics::Fermi => self.single.lambda_op(),
        }
    }

    /// θ_l(A) = U (A ⊗ 1) U*.
    pub fn theta_l(&self, a: &CMat) -> CMat {
        self.law.lift(a, &self.single.identity())
    }

    /// θ_r(Ā) = U (1 ⊗ V Ā V*) U* with V = Λ for fermions (particle reversal).
    pub fn theta_r(&self, a: &CMat) -> CMat {
        let l = self.lambda_diag();
        self.law.lift(&self.single.identity(), &(&l * a.conjugate() * &l))
    }

    /// The vector of B ∈ B²(Γ(Z)) under B²(Γ(Z)) ≃ Γ(Z) ⊗ Γ(Z̄) ≃ Γ(Z ⊕ Z̄).
    pub fn hilbert_schmidt_vector(&self, b: &CMat) -> CVec {
        let dim = self.single.dim();
        let l = self.lambda_diag();
        let flat = CVec::from_fn(dim * dim, |k, _| {
            let (i, j) = (k / dim, k % dim);
            b[(i, j)] * l[(j, j)]
        });
        &self.law.map * flat
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// ‖R_γΩ_γ − Ω‖.
    pub vacuum: f64,
    /// Largest ‖R φ(z,0) − φ_l(z) R‖ and ‖R Λ^{f}φ(0,z̄)Λ^{f} − φ_r(z̄) R‖ over probes, on exact sectors.
    pub fields: f64,
    /// ‖R_γ L − L R_γ‖.
    pub liouvillean: f64,
    /// Largest |(Ω_γ|θ_l(A)Ω_γ) − Tr(Γ(γ)A)/TrΓ(γ)| over probes.
    pub expectations: f64,
    /// ‖Ω_γ − HS vector of Γ(γ^{1/2})/(TrΓ(γ))^{1/2}‖.
    pub standard_vector: f64,
}

impl EquivalenceReport {
    pub fn max(&self) -> f64 {
        [self.vacuum, self.fields, self.liouvillean, self.expectations, self.standard_vector]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Checks the intertwining properties of R_γ on the probe vectors `zs`.
pub fn confined_equivalence_check(setup: &ConfinedSetup, h: &CMat, zs: &[CVec]) -> Result<EquivalenceReport> {
    let rep = &setup.rep;
    let space = &rep.space;
    let d = rep.d();
    let omega_g = rep.omega_gamma()?.vector;
    let vacuum = (rep.r_gamma_apply(&omega_g)? - space.vacuum()).norm();
    let r = rep.r_gamma()?;
    let top = rep.exact_sector();
    let lam = match rep.statistics() {
        Statistics::Bose => space.identity(),
        Statistics::Fermi => space.lambda_op(),
    };
    let scale = match rep.statistics() {
        Statistics::Bose => c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Statistics::Fermi => ONE,
    };
    let mut fields = 0.0f64;
    let mut expectations = 0.0f64;
    let gibbs = confined_gibbs(&setup.single, &rep.params.gamma)?;
    for z in zs {
        let zero = CVec::zeros(d);
        let left = field(space, &rep.pair(z.clone(), zero.clone()))? * scale;
        let right = &lam * field(space, &rep.pair(zero, z.conjugate()))? * scale * &lam;
        let res_l = mul_sparse_right(&r, &left) - mul_sparse_left(&rep.left_field(z)?, &r);
        let res_r = mul_sparse_right(&r, &right) - mul_sparse_left(&rep.right_field(z)?, &r);
        fields = fields.max(space.block_norm(&res_l, top, top)).max(space.block_norm(&res_r, top, top));

        let single_field = field(&setup.single, z)? * scale;
        for a in [single_field.clone(), &single_field * &single_field] {
            let lhs = inner(&omega_g, &(setup.theta_l(&a) * &omega_g));
            let rhs = (&gibbs.density_matrix * &a).trace();
            expectations = expectations.max((lhs - rhs).norm());
        }
    }
    let l = rep.standard_liouvillean(h)?;
    let liouvillean = (mul_sparse_right(&r, &l) - mul_sparse_left(&l, &r)).norm();
    let root = sqrt_psd(&rep.params.gamma)?;
    let hs = setup.hilbert_schmidt_vector(&setup.single.gamma(&root)?) / c(gibbs.closed_form.sqrt(), 0.0);
    let standard_vector = (hs - &omega_g).norm();
    Ok(EquivalenceReport {
        vacuum,
        fields,
        liouvillean,
        expectations,
        standard_vector,
    })
}

/// Hilbert-Schmidt picture oracle of the confined standard form: the algebra
/// B(Γ(Z)) ⊗ 1 with the vector of σ^{1/2}, σ the truncated Gibbs density.
/// Returns the oracle and the exact Δ, J unitary pulled back to Γ(Z) ⊗ Γ(Z̄).
pub fn confined_modular_oracle(setup: &ConfinedSetup) -> Result<(ModularOracle, CMat, CMat)> {
    let rep = &setup.rep;
    let single = &setup.single;
    let gibbs = confined_gibbs(single, &rep.params.gamma)?;
    let root = sqrt_psd(&gibbs.density_matrix)?;
    let dim = single.dim();
    let xi = setup.hilbert_schmidt_vector(&root);
    let map = &setup.law.map;
    let mut x = CMat::zeros(dim * dim, dim * dim);
    let mut y = CMat::zeros(dim * dim, dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut e = CMat::zeros(dim, dim);
            e[(i, j)] = ONE;
            let k = i * dim + j;
            x.set_column(k, &(map.adjoint() * (setup.theta_l(&e) * &xi)));
            y.set_column(k, &(map.adjoint() * (setup.theta_l(&e.adjoint()) * &xi)));
        }
    }
    let oracle = modular_oracle(&x, &y)?;
    let delta = map.adjoint() * rep.modular_operator()? * map;
    let j = map.adjoint() * rep.modular_conjugation()?.u * map;
    Ok((oracle, delta, j))
}

/// Maximum over matrix entries of |a − b|, used for oracle comparisons.
pub fn max_entry_distance(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Two-point values of the left representation at (z1, z2):
/// [(Ω|φ_l φ_l Ω), (Ω|a_l a*_l Ω), (Ω|a*_l a_l Ω), (Ω|a*_l a*_l Ω), (Ω|a_l a_l Ω)].
pub fn left_two_point(rep: &DoubledRep, z1: &CVec, z2: &CVec) -> Result<[C64; 5]> {
    let omega = rep.space.vacuum();
    let ev = |a: CMat, b: CMat| inner(&omega, &(a * (b * &omega)));
    Ok([
        ev(rep.left_field(z1)?, rep.left_field(z2)?),
        ev(rep.left_annihilate(z1)?, rep.left_create(z2)?),
        ev(rep.left_create(z1)?, rep.left_annihilate(z2)?),
        ev(rep.left_create(z1)?, rep.left_create(z2)?),
        ev(rep.left_annihilate(z1)?, rep.left_annihilate(z2)?),
    ])
}

/// The closed forms of the same five values.
pub fn left_two_point_closed(params: &ThermalParams, z1: &CVec, z2: &CVec) -> [C64; 5] {
    let dens = params.density();
    let d = params.d();
    let ip = inner(z1, z2);
    let dz = inner(z1, &(&dens * z2));
    match params.statistics {
        Statistics::Bose => [
            ip * 0.5 + c(dz.re, 0.0),
            inner(z1, &((identity(d) + &dens) * z2)),
            inner(z2, &(&dens * z1)),
            ZERO,
            ZERO,
        ],
        Statistics::Fermi => [
            ip - c(0.0, 2.0 * dz.im),
            inner(z1, &((identity(d) - &dens) * z2)),
            inner(z2, &(&dens * z1)),
            ZERO,
            ZERO,
        ],
    }
}
