//! Pauli-Fierz systems: a small system K coupled linearly to bosons on Z.
//!
//! A coupling q ∈ B(K, K⊗Z) is a (dim K · d) × dim K matrix with rows indexed
//! by k·d + j, so that q = Σ_j B_j⊗|e_j) with (B_j)_{kl} = q[(k·d + j, l)].
//! Operators on K⊗Γ and K⊗K̄⊗Γ use the Kronecker order of the factors.

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Statistics};
use crate::linalg::{
    c, eigvalsh, herm_apply, identity, kron, mul_sparse_left, mul_sparse_right, op_norm, require_shape,
    require_square, sqrt_psd, CMat, CVec,
};
use crate::thermal::{Antiunitary, DoubledRep, ThermalParams};
use crate::tol;

/// Clustering tolerance for reference spectra.
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliFierzModel {
    pub k: CMat,
    pub h: CMat,
    pub v: CMat,
    pub gamma: Option<ThermalParams>,
    /// Single-sided boson cutoff. Doubled spaces use twice it.
    pub cutoff: usize,
}

impl PauliFierzModel {
    pub fn new(k: CMat, h: CMat, v: CMat, gamma: Option<ThermalParams>, cutoff: usize) -> Result<Self> {
        let dim_k = require_square(&k)?;
        let d = require_square(&h)?;
        if dim_k == 0 || d == 0 {
            return Err(Error::InvalidArgument("empty system or boson space".into()));
        }
        require_shape(&v, dim_k * d, dim_k)?;
        for (name, m) in [("K", &k), ("h", &h)] {
            let defect = (m - m.adjoint()).norm();
            if defect > tol::ALGEBRAIC * m.norm().max(1.0) {
                return Err(Error::InvalidArgument(format!("{name} is not Hermitian (defect {defect:e})")));
            }
        }
        let (hv, _) = crate::linalg::eigh(&h)?;
        if hv[0] <= 0.0 {
            return Err(Error::InvalidArgument(format!("h must be positive, smallest eigenvalue {}", hv[0])));
        }
        if let Some(g) = &gamma {
            if g.statistics != Statistics::Bose {
                return Err(Error::StatisticsMismatch("Pauli-Fierz density must be bosonic".into()));
            }
            require_shape(&g.gamma, d, d)?;
            let defect = (&h * &g.gamma - &g.gamma * &h).norm();
            if defect > tol::ALGEBRAIC * (1.0 + h.norm() * g.gamma.norm()) {
                return Err(Error::CommutationViolation(defect));
            }
        }
        Ok(PauliFierzModel { k, h, v, gamma, cutoff })
    }

    /// K = σ₃, h = (1), v = λ σ₁⊗|1), γ = (g) when given.
    pub fn spin_boson(coupling: f64, gamma: Option<f64>, cutoff: usize) -> Result<Self> {
        let k = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let h = identity(1);
        let v = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(coupling, 0.0), c(coupling, 0.0), c(0.0, 0.0)]);
        let gamma = match gamma {
            Some(g) => Some(ThermalParams::new(Statistics::Bose, CMat::from_element(1, 1, c(g, 0.0)))?),
            None => None,
        };
        Self::new(k, h, v, gamma, cutoff)
    }

    pub fn dim_k(&self) -> usize {
        self.k.nrows()
    }

    pub fn d(&self) -> usize {
        self.h.nrows()
    }

    pub fn params(&self) -> Result<&ThermalParams> {
        self.gamma.as_ref().ok_or(Error::MissingGamma)
    }

    pub fn boson_space(&self) -> Result<FockSpace> {
        FockSpace::bose(self.d(), self.cutoff)
    }

    pub fn doubled(&self) -> Result<DoubledRep> {
        DoubledRep::new(self.params()?.clone(), self.cutoff)
    }

    pub fn with_v(&self, v: CMat) -> Result<Self> {
        Self::new(self.k.clone(), self.h.clone(), v, self.gamma.clone(), self.cutoff)
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        PauliFierzModel { cutoff, ..self.clone() }
    }

    pub fn hypothesis_norms(&self) -> Result<HypothesisNorms> {
        let n = self.dim_k();
        let h_inv_sqrt = herm_apply(&self.h, |x| c(x.powf(-0.5), 0.0))?;
        let h_inv_sqrt_v = op_norm(&leg_apply(&h_inv_sqrt, &self.v, n));
        let (rho_v, inter_v) = match &self.gamma {
            Some(g) => {
                let root = one_plus_rho_root(g)?;
                let plus_h = identity(self.d()) + &self.h;
                (
                    Some(op_norm(&leg_apply(&root, &self.v, n))),
                    Some(op_norm(&leg_apply(&(plus_h * &root), &self.v, n))),
                )
            }
            None => (None, None),
        };
        Ok(HypothesisNorms {
            h_inv_sqrt_v,
            one_plus_rho_sqrt_v: rho_v,
            one_plus_h_one_plus_rho_sqrt_v: inter_v,
        })
    }
}

/// Operator norms of h^{−1/2}v, (1+ρ)^{1/2}v and (1+h)(1+ρ)^{1/2}v.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisNorms {
    pub h_inv_sqrt_v: f64,
    pub one_plus_rho_sqrt_v: Option<f64>,
    pub one_plus_h_one_plus_rho_sqrt_v: Option<f64>,
}

fn one_plus_rho_root(g: &ThermalParams) -> Result<CMat> {
    herm_apply(&g.gamma, |x| c((1.0 / (1.0 - x)).sqrt(), 0.0))
}

/// (1_K ⊗ m) q.
pub fn leg_apply(m: &CMat, q: &CMat, dim_k: usize) -> CMat {
    kron(&identity(dim_k), m) * q
}

/// The blocks B_j of q = Σ_j B_j⊗|e_j).
pub fn coupling_blocks(q: &CMat, dim_k: usize) -> Result<Vec<CMat>> {
    if dim_k == 0 || q.ncols() != dim_k || q.nrows() % dim_k != 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("(dim_K·d) x {dim_k}"),
            got: format!("{}x{}", q.nrows(), q.ncols()),
        });
    }
    let d = q.nrows() / dim_k;
    Ok((0..d)
        .map(|j| CMat::from_fn(dim_k, dim_k, |k, l| q[(k * d + j, l)]))
        .collect())
}

/// Σ_j B_j⊗|e_j) as a (dim K · d) × dim K matrix.
pub fn coupling_from_blocks(blocks: &[CMat]) -> Result<CMat> {
    let d = blocks.len();
    let dim_k = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let mut q = CMat::zeros(dim_k * d, dim_k);
    for (j, b) in blocks.iter().enumerate() {
        require_shape(b, dim_k, dim_k)?;
        for k in 0..dim_k {
            for l in 0..dim_k {
                q[(k * d + j, l)] = b[(k, l)];
            }
        }
    }
    Ok(q)
}

/// a*(q) on K⊗Γ_s(W): Σ_j B_j ⊗ a*(e_j).
pub fn coupled_create(dim_k: usize, space: &FockSpace, q: &CMat) -> Result<CMat> {
    let blocks = coupling_blocks(q, dim_k)?;
    if blocks.len() != space.d() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", dim_k * space.d(), dim_k),
            got: format!("{}x{}", q.nrows(), q.ncols()),
        });
    }
    let n = dim_k * space.dim();
    let mut out = CMat::zeros(n, n);
    for (j, b) in blocks.iter().enumerate() {
        if b.iter().all(|x| *x == c(0.0, 0.0)) {
            continue;
        }
        out += kron(b, &space.mode_create(j));
    }
    Ok(out)
}

/// a(q) = a*(q)*.
pub fn coupled_annihilate(dim_k: usize, space: &FockSpace, q: &CMat) -> Result<CMat> {
    Ok(coupled_create(dim_k, space, q)?.adjoint())
}

/// a*(q) + a(q).
pub fn coupled_field(dim_k: usize, space: &FockSpace, q: &CMat) -> Result<CMat> {
    let a = coupled_create(dim_k, space, q)?;
    Ok(&a + a.adjoint())
}

/// v⋆ = Σ_j B_j*⊗|ē_j) ∈ B(K, K⊗Z̄), in the coordinates of Z̄.
pub fn v_star(v: &CMat, dim_k: usize) -> Result<CMat> {
    let blocks = coupling_blocks(v, dim_k)?;
    coupling_from_blocks(&blocks.iter().map(|b| b.adjoint()).collect::<Vec<_>>())
}

/// Stacks the Z and Z̄ legs of couplings into one coupling into K⊗(Z⊕Z̄).
pub fn concat_legs(q1: &CMat, q2: &CMat, dim_k: usize) -> Result<CMat> {
    let b1 = coupling_blocks(q1, dim_k)?;
    let b2 = coupling_blocks(q2, dim_k)?;
    coupling_from_blocks(&b1.into_iter().chain(b2).collect::<Vec<_>>())
}

/// B̄ ˇ⊗ A = (θ⁻¹⊗1)(B̄⊗A)(θ⊗1) on K⊗K̄⊗H, with A on K⊗H and θ: K⊗K̄ → K̄⊗K.
pub fn check_middle(bbar: &CMat, a: &CMat, dim_k: usize) -> Result<CMat> {
    let dim_kb = require_square(bbar)?;
    let n = require_square(a)?;
    if dim_k == 0 || n % dim_k != 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("multiple of {dim_k}"),
            got: format!("{n}"),
        });
    }
    let dim_h = n / dim_k;
    let m = kron(bbar, a);
    // Position in K̄⊗K⊗H of the basis vector (k, kb, x) of K⊗K̄⊗H.
    let theta = |idx: usize| {
        let x = idx % dim_h;
        let kb = (idx / dim_h) % dim_kb;
        let k = idx / (dim_h * dim_kb);
        (kb * dim_k + k) * dim_h + x
    };
    let total = dim_k * dim_kb * dim_h;
    let perm: Vec<usize> = (0..total).map(theta).collect();
    Ok(CMat::from_fn(total, total, |i, j| m[(perm[i], perm[j])]))
}

/// H_fr = K⊗1 + 1⊗dΓ(h) on K⊗Γ_s(Z).
pub fn free_hamiltonian(model: &PauliFierzModel) -> Result<CMat> {
    let space = model.boson_space()?;
    Ok(kron(&model.k, &space.identity()) + kron(&identity(model.dim_k()), &space.dgamma(&model.h)?))
}

/// H = H_fr + a*(v) + a(v).
pub fn hamiltonian(model: &PauliFierzModel) -> Result<CMat> {
    let space = model.boson_space()?;
    Ok(free_hamiltonian(model)? + coupled_field(model.dim_k(), &space, &model.v)?)
}

/// ((1+ρ)^{1/2}v, ρ̄^{1/2}v⋆) ∈ B(K, K⊗(Z⊕Z̄)).
pub fn left_coupling(model: &PauliFierzModel) -> Result<CMat> {
    let g = model.params()?;
    let n = model.dim_k();
    let rho_root = sqrt_psd(&g.density())?;
    concat_legs(
        &leg_apply(&one_plus_rho_root(g)?, &model.v, n),
        &leg_apply(&rho_root.conjugate(), &v_star(&model.v, n)?, n),
        n,
    )
}

/// (ρ^{1/2}v̄⋆, (1+ρ̄)^{1/2}v̄) ∈ B(K̄, K̄⊗(Z⊕Z̄)).
pub fn right_coupling(model: &PauliFierzModel) -> Result<CMat> {
    let g = model.params()?;
    let n = model.dim_k();
    let rho_root = sqrt_psd(&g.density())?;
    concat_legs(
        &leg_apply(&rho_root, &v_star(&model.v, n)?.conjugate(), n),
        &leg_apply(&one_plus_rho_root(g)?.conjugate(), &model.v.conjugate(), n),
        n,
    )
}

#[derive(Debug, Clone)]
pub struct SemiLiouvillean {
    pub free: CMat,
    pub interaction: CMat,
    pub full: CMat,
}

/// L^semi = K⊗1 + 1⊗dΓ(h⊕−h̄) + V_γ on K⊗Γ_s(Z⊕Z̄).
pub fn semi_liouvillean(model: &PauliFierzModel) -> Result<SemiLiouvillean> {
    let rep = model.doubled()?;
    let n = model.dim_k();
    let free = kron(&model.k, &rep.space.identity()) + kron(&identity(n), &rep.standard_liouvillean(&model.h)?);
    let interaction = coupled_field(n, &rep.space, &left_coupling(model)?)?;
    let full = &free + &interaction;
    Ok(SemiLiouvillean { free, interaction, full })
}

#[derive(Debug, Clone)]
pub struct StandardLiouvillean {
    pub free: CMat,
    /// π(V_γ) = 1_K̄ ˇ⊗ V_γ.
    pub left: CMat,
    /// Jπ(V_γ)J.
    pub right: CMat,
    pub full: CMat,
}

/// J = J_K ⊗ Γ(ε) on K⊗K̄⊗Γ_s(Z⊕Z̄), J_K(Ψ₁⊗Ψ̄₂) = Ψ₂⊗Ψ̄₁.
pub fn standard_conjugation(model: &PauliFierzModel) -> Result<Antiunitary> {
    let n = model.dim_k();
    let mut swap = CMat::zeros(n * n, n * n);
    for k in 0..n {
        for l in 0..n {
            swap[(l * n + k, k * n + l)] = c(1.0, 0.0);
        }
    }
    let j = model.doubled()?.modular_conjugation()?;
    Ok(Antiunitary { u: kron(&swap, &j.u) })
}

/// J A J for J = u∘conj with u sparse.
pub fn conjugate_sparse(j: &Antiunitary, a: &CMat) -> CMat {
    mul_sparse_right(&mul_sparse_left(&j.u, &a.conjugate()), &j.u.adjoint())
}

/// L_γ = L_fr + π(V_γ) − Jπ(V_γ)J on K⊗K̄⊗Γ_s(Z⊕Z̄).
pub fn standard_liouvillean(model: &PauliFierzModel) -> Result<StandardLiouvillean> {
    let rep = model.doubled()?;
    let n = model.dim_k();
    let dim_g = rep.space.dim();
    let ik = identity(n);
    let free = kron(&kron(&model.k, &ik), &identity(dim_g)) - kron(&kron(&ik, &model.k.conjugate()), &identity(dim_g))
        + kron(&identity(n * n), &rep.standard_liouvillean(&model.h)?);
    let v_gamma = coupled_field(n, &rep.space, &left_coupling(model)?)?;
    let left = check_middle(&ik, &v_gamma, n)?;
    let right = conjugate_sparse(&standard_conjugation(model)?, &left);
    let full = &free + &left - &right;
    Ok(StandardLiouvillean { free, left, right, full })
}

/// The closed form 1_K ⊗ (a*(ρ^{1/2}v̄⋆, (1+ρ̄)^{1/2}v̄) + h.c.) of Jπ(V_γ)J.
pub fn right_interaction_closed(model: &PauliFierzModel) -> Result<CMat> {
    let rep = model.doubled()?;
    let n = model.dim_k();
    Ok(kron(&identity(n), &coupled_field(n, &rep.space, &right_coupling(model)?)?))
}

#[derive(Debug, Clone)]
pub struct LiouvilleanBundle {
    pub semi: SemiLiouvillean,
    pub standard: StandardLiouvillean,
}

pub fn liouvillean_bundle(model: &PauliFierzModel) -> Result<LiouvilleanBundle> {
    Ok(LiouvilleanBundle {
        semi: semi_liouvillean(model)?,
        standard: standard_liouvillean(model)?,
    })
}

/// Indices of K⊗K̄⊗Γ (or K⊗Γ with `system_dim` = dim K) whose boson number is ≤ n.
pub fn system_sector_upto(space: &FockSpace, system_dim: usize, n: usize) -> Vec<usize> {
    let inner = space.sector_upto(n);
    (0..system_dim)
        .flat_map(|s| inner.iter().map(move |&i| s * space.dim() + i))
        .collect()
}

/// ‖[π(V_γ), Jπ(V_γ)J]‖ on vectors whose boson number is below the cutoff.
pub fn left_right_commutator_defect(model: &PauliFierzModel, l: &StandardLiouvillean) -> Result<f64> {
    let rep = model.doubled()?;
    let n = model.dim_k();
    let cols = system_sector_upto(&rep.space, n * n, rep.exact_sector());
    let comm = mul_sparse_left(&l.left, &l.right) - mul_sparse_left(&l.right, &l.left);
    Ok(cols
        .iter()
        .map(|&j| comm.column(j).norm_squared())
        .sum::<f64>()
        .sqrt())
}

/// Groups sorted values whose neighbours differ by at most `tol`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for x in sorted {
        match out.last_mut() {
            Some((sum, m, last)) if x - *last <= tol => {
                *sum += x;
                *m += 1;
                *last = x;
            }
            _ => out.push((x, 1, x)),
        }
    }
    out.into_iter().map(|(s, m, _)| (s / m as f64, m)).collect()
}

fn matchable(reference: &[f64], spectrum: &[f64], delta: f64) -> bool {
    let mut j = 0;
    for &r in reference {
        while j < spectrum.len() && spectrum[j] < r - delta {
            j += 1;
        }
        if j == spectrum.len() || spectrum[j] > r + delta {
            return false;
        }
        j += 1;
    }
    true
}

/// Smallest δ admitting an injective assignment of `reference` into
/// `spectrum` moving every value by at most δ. Both are sorted here.
pub fn bottleneck_match(reference: &[f64], spectrum: &[f64]) -> f64 {
    if reference.is_empty() {
        return 0.0;
    }
    if reference.len() > spectrum.len() {
        return f64::INFINITY;
    }
    let mut r = reference.to_vec();
    let mut s = spectrum.to_vec();
    r.sort_by(f64::total_cmp);
    s.sort_by(f64::total_cmp);
    if matchable(&r, &s, 0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = (r[r.len() - 1] - s[0]).abs().max((s[s.len() - 1] - r[0]).abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if matchable(&r, &s, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Outcome of the confined spectral comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfinedPfReport {
    pub cutoff: usize,
    /// Energy window above the ground state from which reference values are taken.
    pub window: f64,
    pub semi_deviation: f64,
    pub standard_deviation: f64,
    pub semi_reference: usize,
    pub standard_reference: usize,
    pub semi_clusters: usize,
    pub standard_clusters: usize,
    /// 1 − ‖P_{≤2n} Ω_γ‖, the part of Ω_γ lost to truncation.
    pub omega_tail: f64,
    pub hypothesis: HypothesisNorms,
}

impl ConfinedPfReport {
    pub fn max_deviation(&self) -> f64 {
        self.semi_deviation.max(self.standard_deviation)
    }
}

/// Reference window in units of the lowest boson energy.
pub const WINDOW_QUANTA: f64 = 2.5;

/// Fixed energy window for the spectral comparison. States high in the
/// truncated space have unconverged dressing tails, so the window does not
/// grow with the cutoff.
pub fn default_window(model: &PauliFierzModel) -> Result<f64> {
    let (hv, _) = crate::linalg::eigh(&model.h)?;
    Ok(WINDOW_QUANTA * hv[0])
}

pub fn confined_pf_check(model: &PauliFierzModel) -> Result<ConfinedPfReport> {
    confined_pf_check_window(model, default_window(model)?)
}

/// Compares sp(L^semi) with {E_i − F_j} and sp(L_γ) with {E_i − E_j}, using
/// the E_i within `window` of the ground energy of H and the F_j ≤ `window`.
pub fn confined_pf_check_window(model: &PauliFierzModel, window: f64) -> Result<ConfinedPfReport> {
    let rep = model.doubled()?;
    let e = eigvalsh(&hamiltonian(model)?)?;
    let e0 = e[0];
    let low_e: Vec<f64> = e.iter().copied().filter(|&x| x <= e0 + window).collect();
    let f = eigvalsh(&model.boson_space()?.dgamma(&model.h.conjugate())?)?;
    let low_f: Vec<f64> = f.iter().copied().filter(|&x| x <= window).collect();

    let semi_ref: Vec<f64> = low_e.iter().flat_map(|a| low_f.iter().map(move |b| a - b)).collect();
    let std_ref: Vec<f64> = low_e.iter().flat_map(|a| low_e.iter().map(move |b| a - b)).collect();

    let semi = eigvalsh(&semi_liouvillean(model)?.full)?;
    let standard = eigvalsh(&standard_liouvillean(model)?.full)?;

    Ok(ConfinedPfReport {
        cutoff: model.cutoff,
        window,
        semi_deviation: bottleneck_match(&semi_ref, &semi),
        standard_deviation: bottleneck_match(&std_ref, &standard),
        semi_reference: semi_ref.len(),
        standard_reference: std_ref.len(),
        semi_clusters: cluster(&semi_ref, CLUSTER_TOL).len(),
        standard_clusters: cluster(&std_ref, CLUSTER_TOL).len(),
        omega_tail: rep.omega_gamma()?.norm_defect(),
        hypothesis: model.hypothesis_norms()?,
    })
}

/// vec(e^{−βK/2}) ⊗ Ω_γ normalized, the free KMS vector for γ = e^{−βh}.
pub fn free_kms_vector(model: &PauliFierzModel, beta: f64) -> Result<CVec> {
    let rep = model.doubled()?;
    let n = model.dim_k();
    let b = herm_apply(&model.k, |x| c((-0.5 * beta * x).exp(), 0.0))?;
    let vec_b = CVec::from_fn(n * n, |i, _| b[(i / n, i % n)]);
    let v = kron(&CMat::from_column_slice(n * n, 1, vec_b.as_slice()), &CMat::from_column_slice(
        rep.space.dim(),
        1,
        rep.omega_gamma()?.vector.as_slice(),
    ));
    let v = CVec::from_column_slice(v.as_slice());
    let norm = v.norm();
    Ok(v / c(norm, 0.0))
}
