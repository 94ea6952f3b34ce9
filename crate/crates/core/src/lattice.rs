//! Real subspaces of C^d, their lattice operations and Halmos decomposition,
//! numerical commutants, and the fermionic duality M(V)′ = Λ M(iV^perp) Λ.
//!
//! Real subspaces live in R^{2d} through z ↦ (Re z, Im z); Re(z1|z2) is the
//! Euclidean product there.

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Statistics};
use crate::linalg::{
    c, complex_orthonormalize, eigh, eigh_real, real_i, real_orthonormalize, real_range_and_kernel,
    real_to_complex, CMat, CVec, RMat, RVec, ONE, ZERO,
};
use crate::reps::field;
use crate::tol;
use rand::Rng;

/// Largest Fock dimension accepted by the commutant solver.
pub const COMMUTANT_GUARD: usize = 128;

#[derive(Debug, Clone)]
pub struct RealSubspace {
    d: usize,
    /// Orthonormal columns in R^{2d}.
    basis: RMat,
    gray_zone: bool,
}

impl RealSubspace {
    /// Real span of the columns of `vectors` (2d rows).
    pub fn new(d: usize, vectors: &RMat) -> Result<Self> {
        if vectors.nrows() != 2 * d {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", 2 * d),
                got: vectors.nrows().to_string(),
            });
        }
        let (basis, _, gray_zone) = real_orthonormalize(vectors, tol::RANK_REL)?;
        Ok(RealSubspace { d, basis, gray_zone })
    }

    /// Real span of complex vectors.
    pub fn from_complex(d: usize, vectors: &[CVec]) -> Result<Self> {
        let mut m = RMat::zeros(2 * d, vectors.len());
        for (k, v) in vectors.iter().enumerate() {
            crate::linalg::require_len(v, d)?;
            m.set_column(k, &crate::linalg::complex_to_real(v));
        }
        Self::new(d, &m)
    }

    /// Complex span of complex vectors, as a real subspace.
    pub fn complex_span(d: usize, vectors: &[CVec]) -> Result<Self> {
        let mut all: Vec<CVec> = vectors.to_vec();
        all.extend(vectors.iter().map(|v| v * c(0.0, 1.0)));
        Self::from_complex(d, &all)
    }

    pub fn zero(d: usize) -> Self {
        RealSubspace {
            d,
            basis: RMat::zeros(2 * d, 0),
            gray_zone: false,
        }
    }

    pub fn whole(d: usize) -> Self {
        RealSubspace {
            d,
            basis: RMat::identity(2 * d, 2 * d),
            gray_zone: false,
        }
    }

    /// Span of `k` Gaussian vectors.
    pub fn random(rng: &mut impl Rng, d: usize, k: usize) -> Result<Self> {
        Self::new(d, &crate::random::real_matrix(rng, 2 * d, k))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &RMat {
        &self.basis
    }

    /// Basis vectors as elements of C^d.
    pub fn complex_basis(&self) -> Vec<CVec> {
        (0..self.dim())
            .map(|k| real_to_complex(&self.basis.column(k).into_owned()))
            .collect()
    }

    /// A singular value fell into the ambiguous band while building this subspace.
    pub fn gray_zone(&self) -> bool {
        self.gray_zone
    }

    pub fn projector(&self) -> RMat {
        &self.basis * self.basis.transpose()
    }

    /// Real orthogonal complement with respect to Re(·|·).
    pub fn perp(&self) -> Result<Self> {
        if self.dim() == 0 {
            return Ok(Self::whole(self.d));
        }
        let (_, kernel, info) = real_range_and_kernel(&self.basis.transpose(), tol::RANK_REL)?;
        Ok(RealSubspace {
            d: self.d,
            basis: kernel,
            gray_zone: self.gray_zone || info.gray_zone,
        })
    }

    /// iV.
    pub fn times_i(&self) -> Self {
        RealSubspace {
            d: self.d,
            basis: real_i(self.d) * &self.basis,
            gray_zone: self.gray_zone,
        }
    }

    /// iV^perp = {z : Im(v|z) = 0 for v ∈ V}.
    pub fn symplectic_complement(&self) -> Result<Self> {
        Ok(self.perp()?.times_i())
    }

    /// ‖(1 − p_self) B_other‖: zero iff other ⊂ self.
    pub fn containment_defect(&self, other: &Self) -> f64 {
        let proj = &self.basis * (self.basis.transpose() * &other.basis);
        (&other.basis - proj).norm()
    }

    /// Zero iff equal subspaces; infinite on a dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.containment_defect(other).max(other.containment_defect(self))
    }

    pub fn is_complex(&self, tol: f64) -> bool {
        self.distance(&self.times_i()) <= tol
    }
}

fn check_family(vs: &[RealSubspace]) -> Result<usize> {
    let first = vs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty subspace family".into()))?;
    if let Some(bad) = vs.iter().find(|v| v.d != first.d) {
        return Err(Error::ShapeMismatch {
            expected: format!("C^{}", first.d),
            got: format!("C^{}", bad.d),
        });
    }
    Ok(first.d)
}

/// Closed span of a family.
pub fn join(vs: &[RealSubspace]) -> Result<RealSubspace> {
    let d = check_family(vs)?;
    let cols: usize = vs.iter().map(RealSubspace::dim).sum();
    let mut m = RMat::zeros(2 * d, cols);
    let mut k = 0;
    for v in vs {
        m.view_mut((0, k), (2 * d, v.dim())).copy_from(&v.basis);
        k += v.dim();
    }
    let mut out = RealSubspace::new(d, &m)?;
    out.gray_zone |= vs.iter().any(|v| v.gray_zone);
    Ok(out)
}

/// Intersection of a family, as the complement of the join of complements.
pub fn meet(vs: &[RealSubspace]) -> Result<RealSubspace> {
    check_family(vs)?;
    let perps = vs.iter().map(RealSubspace::perp).collect::<Result<Vec<_>>>()?;
    join(&perps)?.perp()
}

/// The decomposition W = W₊ ⊕ W₀ ⊕ W₁ ⊕ W₋ and V = W₊ ⊕ V₀ ⊕ V₁ ⊕ {0}.
#[derive(Debug, Clone)]
pub struct GeneralPositionSplit {
    pub w_plus: RealSubspace,
    pub w0: RealSubspace,
    pub w1: RealSubspace,
    pub w_minus: RealSubspace,
    pub v0: RealSubspace,
    pub v1: RealSubspace,
    /// Smallest singular values of p−q and p+q−1 restricted to W₀ (0 if W₀ = {0}).
    pub w0_kernel_margins: (f64, f64),
    /// Some rank decision was ambiguous.
    pub gray_zone: bool,
}

impl GeneralPositionSplit {
    /// Both kernel conditions hold for V₀ inside W₀.
    pub fn v0_in_general_position(&self) -> bool {
        self.w0.dim() == 0 || (self.w0_kernel_margins.0 > tol::GRAY_HIGH && self.w0_kernel_margins.1 > tol::GRAY_HIGH)
    }
}

fn smallest_singular(a: &RMat) -> f64 {
    if a.is_empty() {
        return f64::INFINITY;
    }
    a.clone().singular_values().min()
}

fn in_gray_band(a: &RMat) -> bool {
    if a.is_empty() {
        return false;
    }
    a.clone()
        .singular_values()
        .iter()
        .any(|&s| s > tol::GRAY_LOW && s < tol::GRAY_HIGH)
}

pub fn general_position_split(v: &RealSubspace) -> Result<GeneralPositionSplit> {
    let d = v.d;
    let iv = v.times_i();
    let vp = v.perp()?;
    let ivp = vp.times_i();
    let ivperp_of_i = iv.perp()?;
    let w_plus = meet(&[v.clone(), iv.clone()])?;
    let w_minus = meet(&[vp.clone(), ivperp_of_i.clone()])?;
    let w1 = join(&[meet(&[v.clone(), ivp.clone()])?, meet(&[iv.clone(), vp.clone()])?])?;
    let w0 = join(&[w_plus.clone(), w_minus.clone(), w1.clone()])?.perp()?;
    let v0 = meet(&[v.clone(), w0.clone()])?;
    let v1 = meet(&[v.clone(), w1.clone()])?;

    let p = v.projector();
    let q = iv.projector();
    let one = RMat::identity(2 * d, 2 * d);
    let gray_zone = v.gray_zone
        || in_gray_band(&(&p - &q))
        || in_gray_band(&(&p + &q - &one))
        || [&w_plus, &w_minus, &w1, &w0, &v0, &v1].iter().any(|s| s.gray_zone);

    let margins = if w0.dim() == 0 {
        (0.0, 0.0)
    } else {
        let b = &w0.basis;
        let p0 = v0.projector();
        let q0 = v0.times_i().projector();
        let k = b.ncols();
        let n0 = b.transpose() * (&p0 - &q0) * b;
        let m0 = b.transpose() * (&p0 + &q0) * b - RMat::identity(k, k);
        (smallest_singular(&n0), smallest_singular(&m0))
    };
    Ok(GeneralPositionSplit {
        w_plus,
        w0,
        w1,
        w_minus,
        v0,
        v1,
        w0_kernel_margins: margins,
        gray_zone,
    })
}

/// Z, ε and χ with V = {(1−χ)^{1/2}z + εχ^{1/2}z : z ∈ Z}.
#[derive(Debug, Clone)]
pub struct HalmosAngles {
    pub z: RealSubspace,
    /// The antilinear involution, as an orthogonal matrix on R^{2d}.
    pub epsilon: RMat,
    /// The polar part of m = p+q−1; Z = Ker(w−1).
    pub w: RMat,
    /// χ = ½ 1_Z (1−m), zero on εZ.
    pub chi: RMat,
    /// ρ = χ(1−2χ)⁻¹ on Z.
    pub rho: RMat,
    /// Eigenvalues of χ on Z, one per complex dimension, ascending.
    pub chi_values: Vec<f64>,
    /// Columns (1−χ)^{1/2}u + εχ^{1/2}u over an orthonormal real basis u of Z.
    pub isometry: RMat,
    /// Columns χ^{1/2}u + ε(1−χ)^{1/2}u.
    pub complement_isometry: RMat,
}

impl HalmosAngles {
    /// ‖isometryᵀ isometry − 1‖.
    pub fn isometry_defect(&self) -> f64 {
        let k = self.isometry.ncols();
        (self.isometry.transpose() * &self.isometry - RMat::identity(k, k)).norm()
    }
}

pub fn halmos_angles(v: &RealSubspace) -> Result<HalmosAngles> {
    let d = v.d;
    let p = v.projector();
    let q = v.times_i().projector();
    let one = RMat::identity(2 * d, 2 * d);
    let m = &p + &q - &one;
    let n = &p - &q;
    let (n_min, m_min) = (smallest_singular(&n), smallest_singular(&m));
    if n_min <= tol::GRAY_HIGH || m_min <= tol::GRAY_HIGH {
        return Err(Error::GeneralPositionViolated(format!(
            "smallest singular values: p−q {n_min:e}, p+q−1 {m_min:e}"
        )));
    }
    let (n_vals, n_vecs) = eigh_real(&n)?;
    let mut epsilon = RMat::zeros(2 * d, 2 * d);
    for (k, &l) in n_vals.iter().enumerate() {
        let u = n_vecs.column(k);
        epsilon += u * u.transpose() * l.signum();
    }
    let (m_vals, m_vecs) = eigh_real(&m)?;
    let mut w = RMat::zeros(2 * d, 2 * d);
    let mut chi = RMat::zeros(2 * d, 2 * d);
    let mut rho = RMat::zeros(2 * d, 2 * d);
    let mut z_cols = Vec::new();
    let mut values = Vec::new();
    let mut iso = Vec::new();
    let mut co_iso = Vec::new();
    for (k, &l) in m_vals.iter().enumerate() {
        let u: RVec = m_vecs.column(k).into_owned();
        w += &u * u.transpose() * l.signum();
        if l > 0.0 {
            let x = 0.5 * (1.0 - l);
            chi += &u * u.transpose() * x;
            rho += &u * u.transpose() * (x / l);
            values.push(x);
            let eu = &epsilon * &u;
            iso.push(&u * (1.0 - x).sqrt() + &eu * x.sqrt());
            co_iso.push(&u * x.sqrt() + &eu * (1.0 - x).sqrt());
            z_cols.push(u);
        }
    }
    values.sort_by(f64::total_cmp);
    let chi_values = values.iter().step_by(2).cloned().collect();
    Ok(HalmosAngles {
        z: RealSubspace::new(d, &RMat::from_columns(&z_cols))?,
        epsilon,
        w,
        chi,
        rho,
        chi_values,
        isometry: RMat::from_columns(&iso),
        complement_isometry: RMat::from_columns(&co_iso),
    })
}

/// Flattened (column-major) matrices as columns.
fn stack(mats: &[CMat]) -> CMat {
    let n = mats.first().map_or(0, |m| m.len());
    let mut out = CMat::zeros(n, mats.len());
    for (k, m) in mats.iter().enumerate() {
        out.set_column(k, &CVec::from_column_slice(m.as_slice()));
    }
    out
}

fn unstack(v: &CVec, dim: usize) -> CMat {
    CMat::from_column_slice(dim, dim, v.as_slice())
}

/// Hilbert-Schmidt orthonormal basis of the span of `mats`.
pub fn span_basis(mats: &[CMat]) -> Result<Vec<CMat>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let dim = first.nrows();
    let (q, _) = complex_orthonormalize(&stack(mats), tol::RANK_REL)?;
    Ok((0..q.ncols()).map(|k| unstack(&q.column(k).into_owned(), dim)).collect())
}

/// Largest distance of an element of `b` from span(`a`); `a` HS-orthonormal.
pub fn containment_defect(a: &[CMat], b: &[CMat]) -> f64 {
    b.iter()
        .map(|x| {
            let mut r = x.clone();
            for y in a {
                let coeff = y.dotc(x);
                r -= y * coeff;
            }
            r.norm() / x.norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// HS-orthonormal basis of span(a) ∩ span(b), both given orthonormal.
pub fn span_intersection(a: &[CMat], b: &[CMat]) -> Result<Vec<CMat>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let dim = a[0].nrows();
    let sa = stack(a);
    let sb = stack(b);
    let overlap = sa.adjoint() * &sb;
    let svd = overlap.svd(true, false);
    let u = svd.u.expect("requested u");
    let mut out = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > 1.0 - tol::SPECTRAL {
            out.push(unstack(&(&sa * u.column(k)), dim));
        }
    }
    Ok(out)
}

/// Result of a commutant solve.
#[derive(Debug, Clone)]
pub struct Commutant {
    /// HS-orthonormal basis.
    pub basis: Vec<CMat>,
    /// Some eigenvalue of the constraint Gram matrix fell in the ambiguous band.
    pub gray_zone: bool,
}

/// {X : [A, X] = [A*, X] = 0 for every generator A}.
///
/// Works in the eigenbasis of the first Hermitian generator, where the
/// commutant is block diagonal, and solves the remaining constraints there.
pub fn commutant(generators: &[CMat]) -> Result<Commutant> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidArgument("commutant needs the space dimension; pass the identity".into()));
    };
    let dim = crate::linalg::require_square(first)?;
    if dim > COMMUTANT_GUARD {
        return Err(Error::DimensionGuard(dim, COMMUTANT_GUARD));
    }
    let mut herm = Vec::new();
    for a in generators {
        if a.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch {
                expected: format!("{dim}x{dim}"),
                got: format!("{:?}", a.shape()),
            });
        }
        for h in [a + a.adjoint(), (a - a.adjoint()) * c(0.0, 1.0)] {
            if h.norm() > tol::ALGEBRAIC {
                herm.push(h);
            }
        }
    }
    let scale = herm.iter().map(|h| h.norm()).fold(1.0, f64::max);
    let (vals, u) = if let Some(h) = herm.first() {
        eigh(h)?
    } else {
        (vec![0.0; dim], CMat::identity(dim, dim))
    };
    // Cluster (ascending) eigenvalues of the first generator.
    let mut cluster = vec![0usize; dim];
    for k in 1..dim {
        cluster[k] = cluster[k - 1] + usize::from(vals[k] - vals[k - 1] > tol::SPECTRAL * scale);
    }
    let units: Vec<(usize, usize)> = (0..dim)
        .flat_map(|a| (0..dim).map(move |b| (a, b)))
        .filter(|&(a, b)| cluster[a] == cluster[b])
        .collect();
    let nu = units.len();
    let mut gram = CMat::zeros(nu, nu);
    for h in herm.iter().skip(1) {
        let f = u.adjoint() * h * &u;
        let f2 = &f * &f;
        for (i, &(a, b)) in units.iter().enumerate() {
            for (j, &(cc, dd)) in units.iter().enumerate() {
                let mut g = -(f[(a, cc)] * f[(dd, b)]) * 2.0;
                if b == dd {
                    g += f2[(a, cc)];
                }
                if a == cc {
                    g += f2[(dd, b)];
                }
                gram[(i, j)] += g;
            }
        }
    }
    let (gvals, gvecs) = eigh(&gram)?;
    let gscale = gvals.last().cloned().unwrap_or(0.0).max(scale * scale);
    let threshold = tol::RANK_REL * gscale;
    let gray_zone = gvals
        .iter()
        .any(|&g| g > threshold && g < tol::GRAY_HIGH.sqrt() * gscale);
    let mut basis = Vec::new();
    for (k, &g) in gvals.iter().enumerate() {
        if g > threshold {
            continue;
        }
        let mut cm = CMat::zeros(dim, dim);
        for (i, &(a, b)) in units.iter().enumerate() {
            cm[(a, b)] = gvecs[(i, k)];
        }
        basis.push(&u * cm * u.adjoint());
    }
    Ok(Commutant { basis, gray_zone })
}

/// HS-orthonormal basis of M(V) = {φ(v) : v ∈ V}'' on Γ_a(C^d).
pub fn field_algebra(space: &FockSpace, v: &RealSubspace) -> Result<Vec<CMat>> {
    if space.statistics() != Statistics::Fermi {
        return Err(Error::StatisticsMismatch("field algebras are built on fermionic spaces".into()));
    }
    if space.d() != v.d() {
        return Err(Error::ShapeMismatch {
            expected: format!("C^{}", space.d()),
            got: format!("C^{}", v.d()),
        });
    }
    let fields = v
        .complex_basis()
        .iter()
        .map(|w| field(space, w))
        .collect::<Result<Vec<_>>>()?;
    let k = fields.len();
    let mut monomials = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let mut m = space.identity();
        for (i, f) in fields.iter().enumerate() {
            if mask & (1 << i) != 0 {
                m *= f;
            }
        }
        monomials.push(m);
    }
    span_basis(&monomials)
}

/// Λ X Λ for every X.
pub fn lambda_conjugate(space: &FockSpace, mats: &[CMat]) -> Vec<CMat> {
    let l = space.lambda_op();
    mats.iter().map(|x| &l * x * &l).collect()
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub dim_v: usize,
    pub dim_commutant: usize,
    pub dim_dual: usize,
    /// Largest distance of a commutant basis element from Λ M(iV^perp) Λ.
    pub commutant_in_dual: f64,
    /// Largest distance of a basis element of Λ M(iV^perp) Λ from M(V)′.
    pub dual_in_commutant: f64,
    /// dim M(V) ∩ M(V)′.
    pub center_dim: usize,
    pub gray_zone: bool,
}

impl DualityReport {
    pub fn defect(&self) -> f64 {
        if self.dim_commutant != self.dim_dual {
            return f64::INFINITY;
        }
        self.commutant_in_dual.max(self.dual_in_commutant)
    }
}

/// Compares M(V)′ with Λ M(iV^perp) Λ on Γ_a(C^d).
pub fn fermionic_duality_check(v: &RealSubspace) -> Result<DualityReport> {
    let space = FockSpace::fermi(v.d())?;
    if space.dim() > COMMUTANT_GUARD {
        return Err(Error::DimensionGuard(space.dim(), COMMUTANT_GUARD));
    }
    let algebra = field_algebra(&space, v)?;
    let comm = commutant(&algebra)?;
    let dual = lambda_conjugate(&space, &field_algebra(&space, &v.symplectic_complement()?)?);
    let center = span_intersection(&algebra, &comm.basis)?;
    Ok(DualityReport {
        dim_v: v.dim(),
        dim_commutant: comm.basis.len(),
        dim_dual: dual.len(),
        commutant_in_dual: containment_defect(&dual, &comm.basis),
        dual_in_commutant: containment_defect(&comm.basis, &dual),
        center_dim: center.len(),
        gray_zone: comm.gray_zone || v.gray_zone(),
    })
}

/// The scalar algebra C·1 as an HS-orthonormal basis.
pub fn scalars(dim: usize) -> Vec<CMat> {
    vec![CMat::identity(dim, dim) * c(1.0 / (dim as f64).sqrt(), 0.0)]
}

/// All matrix units, an HS-orthonormal basis of B(C^dim).
pub fn matrix_units(dim: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for i in 0..dim {
            let mut m = CMat::from_element(dim, dim, ZERO);
            m[(i, j)] = ONE;
            out.push(m);
        }
    }
    out
}
