//! Bogolubov transformations and their Fock implementers.
//!
//! A real-linear map r on the field labels is stored through its complex
//! blocks: r z = p z + q z̄. On real coordinates y = (Re z, Im z) this is the
//! 2d x 2d matrix [[pr+qr, qi−pi], [pi+qi, pr−qr]]. The implementer U_r
//! satisfies U φ(y) U* = φ(ry), equivalently U a*(z) U* = a*(pz) + a(q z̄).

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Statistics};
use crate::linalg::{
    c, exp_series, expm, identity, inner_product_real, inverse, max_abs, require_square, CMat, CVec,
    RMat, C64, ONE,
};
use crate::reps::{field, multi_annihilate, multi_create};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Symplectic,
    Orthogonal,
}

impl BlockKind {
    pub fn for_statistics(s: Statistics) -> Self {
        match s {
            Statistics::Bose => BlockKind::Symplectic,
            Statistics::Fermi => BlockKind::Orthogonal,
        }
    }

    pub fn statistics(self) -> Statistics {
        match self {
            BlockKind::Symplectic => Statistics::Bose,
            BlockKind::Orthogonal => Statistics::Fermi,
        }
    }

    /// −1 for symplectic, +1 for orthogonal: the sign in p*p ∓ q#q̄ = 1.
    fn eps(self) -> f64 {
        match self {
            BlockKind::Symplectic => -1.0,
            BlockKind::Orthogonal => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogolubovBlocks {
    pub p: CMat,
    pub q: CMat,
    pub kind: BlockKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    /// Residuals of p*p ∓ q#q̄ = 1, p#q̄ ∓ q*p = 0, pp* ∓ qq* = 1, pq# ∓ qp# = 0.
    pub residuals: [f64; 4],
    /// Smallest eigenvalue of pp* (≥ 1 for symplectic maps).
    pub min_eig_pp: f64,
}

impl BlockReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdPair {
    pub c: CMat,
    pub d: CMat,
    /// Disagreement of the two defining expressions for c and for d.
    pub formula_defect: f64,
    /// Departure of c and d from the required (anti)symmetry.
    pub symmetry_defect: f64,
    /// Distance of the factorization [[1,d],[0,1]] diag((p*)^{-1}, p̄) [[1,0],[c̄,1]] from r.
    pub reconstruction_defect: f64,
}

impl BogolubovBlocks {
    pub fn new(p: CMat, q: CMat, kind: BlockKind) -> Result<Self> {
        let d = require_square(&p)?;
        if q.shape() != (d, d) {
            return Err(Error::ShapeMismatch {
                expected: format!("{d}x{d}"),
                got: format!("{}x{}", q.nrows(), q.ncols()),
            });
        }
        Ok(BogolubovBlocks { p, q, kind })
    }

    pub fn identity(d: usize, kind: BlockKind) -> Self {
        BogolubovBlocks {
            p: identity(d),
            q: CMat::zeros(d, d),
            kind,
        }
    }

    pub fn d(&self) -> usize {
        self.p.nrows()
    }

    pub fn from_real(r: &RMat, kind: BlockKind) -> Result<Self> {
        let n = r.nrows();
        if n != r.ncols() || n % 2 != 0 {
            return Err(Error::ShapeMismatch {
                expected: "even square matrix".into(),
                got: format!("{}x{}", n, r.ncols()),
            });
        }
        let d = n / 2;
        let b = |i: usize, j: usize| r.view((i * d, j * d), (d, d)).into_owned();
        let (r11, r12, r21, r22) = (b(0, 0), b(0, 1), b(1, 0), b(1, 1));
        let p = CMat::from_fn(d, d, |i, j| {
            c(r11[(i, j)] + r22[(i, j)], r21[(i, j)] - r12[(i, j)]) * 0.5
        });
        let q = CMat::from_fn(d, d, |i, j| {
            c(r11[(i, j)] - r22[(i, j)], r21[(i, j)] + r12[(i, j)]) * 0.5
        });
        Ok(BogolubovBlocks { p, q, kind })
    }

    pub fn to_real(&self) -> RMat {
        let d = self.d();
        let mut r = RMat::zeros(2 * d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                let (p, q) = (self.p[(i, j)], self.q[(i, j)]);
                r[(i, j)] = p.re + q.re;
                r[(i, j + d)] = q.im - p.im;
                r[(i + d, j)] = p.im + q.im;
                r[(i + d, j + d)] = p.re - q.re;
            }
        }
        r
    }

    /// r z = p z + q z̄.
    pub fn apply(&self, z: &CVec) -> CVec {
        &self.p * z + &self.q * z.conjugate()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &BogolubovBlocks) -> BogolubovBlocks {
        BogolubovBlocks {
            p: &self.p * &other.p + &self.q * other.q.conjugate(),
            q: &self.p * &other.q + &self.q * other.p.conjugate(),
            kind: self.kind,
        }
    }

    pub fn inverse(&self) -> Result<BogolubovBlocks> {
        let real = self.to_real();
        let inv = real
            .try_inverse()
            .ok_or_else(|| Error::Numerical("Bogolubov map is not invertible".into()))?;
        Self::from_real(&inv, self.kind)
    }

    pub fn validate(&self) -> BlockReport {
        let e = self.kind.eps();
        let (p, q) = (&self.p, &self.q);
        let d = self.d();
        let qbar = q.conjugate();
        let r1 = p.adjoint() * p + q.transpose() * &qbar * c(e, 0.0) - identity(d);
        let r2 = p.transpose() * &qbar + q.adjoint() * p * c(e, 0.0);
        let r3 = p * p.adjoint() + q * q.adjoint() * c(e, 0.0) - identity(d);
        let r4 = p * q.transpose() + q * p.transpose() * c(e, 0.0);
        let pp = p * p.adjoint();
        let min_eig_pp = crate::linalg::eigh(&pp).map(|(v, _)| v[0]).unwrap_or(f64::NAN);
        BlockReport {
            residuals: [r1.norm(), r2.norm(), r3.norm(), r4.norm()],
            min_eig_pp,
        }
    }

    /// Smallest singular value of p; zero exactly when r is j-degenerate.
    pub fn p_min_singular(&self) -> f64 {
        self.p.singular_values().min()
    }

    pub fn to_cd(&self) -> Result<CdPair> {
        let smin = self.p_min_singular();
        if self.kind == BlockKind::Orthogonal && smin < tol::DEGENERATE_P {
            return Err(Error::FermiDegenerate(smin));
        }
        let p = &self.p;
        let q = &self.q;
        let pinv = inverse(p)?;
        let pt_inv = inverse(&p.transpose())?;
        let pstar_inv = inverse(&p.adjoint())?;
        let pbar_inv = inverse(&p.conjugate())?;
        let sign = -self.kind.eps();
        let c1 = &pinv * q;
        let c2 = q.transpose() * &pt_inv * c(sign, 0.0);
        let d1 = q * &pbar_inv;
        let d2 = &pstar_inv * q.transpose() * c(sign, 0.0);
        let formula_defect = (&c1 - &c2).norm().max((&d1 - &d2).norm());
        let symmetry_defect = (&c1 - c1.transpose() * c(sign, 0.0))
            .norm()
            .max((&d1 - d1.transpose() * c(sign, 0.0)).norm());
        // Project onto the exact symmetry class; the defect is reported above.
        let c_ker = (&c1 + c1.transpose() * c(sign, 0.0)) * c(0.5, 0.0);
        let d_ker = (&d1 + d1.transpose() * c(sign, 0.0)) * c(0.5, 0.0);
        let pbar = p.conjugate();
        let cbar = c_ker.conjugate();
        let top_left = &pstar_inv + &d_ker * &pbar * &cbar;
        let reconstruction_defect = (top_left - p).norm()
            + (&d_ker * &pbar - q).norm()
            + (&pbar * &cbar - q.conjugate()).norm();
        Ok(CdPair {
            c: c_ker,
            d: d_ker,
            formula_defect,
            symmetry_defect,
            reconstruction_defect,
        })
    }

    /// exp of the generator [[a, b], [b̄, ā]]: a anti-Hermitian and b symmetric
    /// give a symplectic map, a anti-Hermitian and b antisymmetric an orthogonal one.
    pub fn from_generator(a: &CMat, b: &CMat, kind: BlockKind) -> Result<Self> {
        let d = require_square(a)?;
        let mut g = CMat::zeros(2 * d, 2 * d);
        g.view_mut((0, 0), (d, d)).copy_from(a);
        g.view_mut((0, d), (d, d)).copy_from(b);
        g.view_mut((d, 0), (d, d)).copy_from(&b.conjugate());
        g.view_mut((d, d), (d, d)).copy_from(&a.conjugate());
        let e = expm(&g)?;
        Ok(BogolubovBlocks {
            p: e.view((0, 0), (d, d)).into_owned(),
            q: e.view((0, d), (d, d)).into_owned(),
            kind,
        })
    }

    /// Symplectic one-mode squeeze p = cosh t, q = sinh t.
    pub fn squeeze(t: f64) -> Self {
        BogolubovBlocks {
            p: CMat::from_element(1, 1, c(t.cosh(), 0.0)),
            q: CMat::from_element(1, 1, c(t.sinh(), 0.0)),
            kind: BlockKind::Symplectic,
        }
    }
}

/// The positive symplectic map with p = (1−cc*)^{−1/2}, q = (1−cc*)^{−1/2} c.
pub fn positive_symplectic_from_c(c_ker: &CMat) -> Result<BogolubovBlocks> {
    let d = require_square(c_ker)?;
    if max_abs(&(c_ker - c_ker.transpose())) > tol::KERNEL_SYMMETRY * max_abs(c_ker).max(1.0) {
        return Err(Error::SymmetryViolation(max_abs(&(c_ker - c_ker.transpose()))));
    }
    let n = crate::linalg::op_norm(c_ker);
    if n >= 1.0 {
        return Err(Error::NormTooLarge(n));
    }
    let p = crate::linalg::inv_sqrt_pd(&(identity(d) - c_ker * c_ker.adjoint()))?;
    let q = &p * c_ker;
    Ok(BogolubovBlocks {
        p,
        q,
        kind: BlockKind::Symplectic,
    })
}

/// The j-self-adjoint orthogonal map with p = (1+cc*)^{−1/2}, q = −(1+cc*)^{−1/2} c,
/// whose implementer is the squeezer R_c.
pub fn positive_orthogonal_from_c(c_ker: &CMat) -> Result<BogolubovBlocks> {
    let d = require_square(c_ker)?;
    if max_abs(&(c_ker + c_ker.transpose())) > tol::KERNEL_SYMMETRY * max_abs(c_ker).max(1.0) {
        return Err(Error::SymmetryViolation(max_abs(&(c_ker + c_ker.transpose()))));
    }
    let p = crate::linalg::inv_sqrt_pd(&(identity(d) + c_ker * c_ker.adjoint()))?;
    let q = -(&p * c_ker);
    Ok(BogolubovBlocks {
        p,
        q,
        kind: BlockKind::Orthogonal,
    })
}

fn check_space(space: &FockSpace, blocks: &BogolubovBlocks) -> Result<()> {
    if BlockKind::for_statistics(space.statistics()) != blocks.kind {
        return Err(Error::StatisticsMismatch(format!(
            "{:?} blocks on a {} space",
            blocks.kind,
            space.statistics().name()
        )));
    }
    if space.d() != blocks.d() {
        return Err(Error::ShapeMismatch {
            expected: format!("blocks of size {}", space.d()),
            got: blocks.d().to_string(),
        });
    }
    Ok(())
}

/// e^{∓½a*(d)} Γ((p*)^{-1}) e^{±½a(c)} without the scalar prefactor.
fn implementer_core(space: &FockSpace, blocks: &BogolubovBlocks) -> Result<(CMat, CdPair)> {
    check_space(space, blocks)?;
    let cd = blocks.to_cd()?;
    let s = match blocks.kind {
        BlockKind::Symplectic => -1.0,
        BlockKind::Orthogonal => 1.0,
    };
    let raise = multi_create(space, &cd.d)? * c(0.5 * s, 0.0);
    let lower = multi_annihilate(space, &cd.c)? * c(-0.5 * s, 0.0);
    let g = space.gamma(&inverse(&blocks.p.adjoint())?)?;
    Ok((exp_series(&raise)? * g * exp_series(&lower)?, cd))
}

/// The implementer with (Ω|UΩ) > 0.
pub fn shale_implementer(space: &FockSpace, blocks: &BogolubovBlocks) -> Result<CMat> {
    let (core, _) = implementer_core(space, blocks)?;
    let det = (&blocks.p * blocks.p.adjoint()).determinant().norm();
    let exponent = match blocks.kind {
        BlockKind::Symplectic => -0.25,
        BlockKind::Orthogonal => 0.25,
    };
    Ok(core * c(det.powf(exponent), 0.0))
}

/// The pair ±(det p*)^{∓1/2} (..) with the principal square root.
pub fn metaplectic_pair(space: &FockSpace, blocks: &BogolubovBlocks) -> Result<(CMat, CMat)> {
    let (core, _) = implementer_core(space, blocks)?;
    let det = blocks.p.adjoint().determinant();
    let root = det.sqrt();
    let factor = match blocks.kind {
        BlockKind::Symplectic => ONE / root,
        BlockKind::Orthogonal => root,
    };
    let u = core * factor;
    let minus = -&u;
    Ok((u, minus))
}

/// ‖U a*(z) − (a*(pz) + a(q z̄)) U‖ and the same for φ, on the block of
/// sectors strictly below the cutoff (all sectors for fermions).
pub fn intertwining_residual(space: &FockSpace, blocks: &BogolubovBlocks, u: &CMat, z: &CVec) -> Result<f64> {
    check_space(space, blocks)?;
    let top = match space.statistics() {
        Statistics::Bose => space.n_max().saturating_sub(1),
        Statistics::Fermi => space.n_max(),
    };
    let lhs = u * space.create(z)?;
    let rhs = (space.create(&(&blocks.p * z))? + space.annihilate(&(&blocks.q * z.conjugate()))?) * u;
    let creators = space.block_norm(&(lhs - rhs), top, top);
    let lhs = u * field(space, z)?;
    let rhs = field(space, &blocks.apply(z))? * u;
    let fields = space.block_norm(&(lhs - rhs), top, top);
    Ok(creators.max(fields))
}

/// Mean particle number of U_rΩ, which is ‖q‖²_HS.
pub fn expected_excitation(blocks: &BogolubovBlocks) -> f64 {
    blocks.q.norm_squared()
}

/// A message when a bosonic cutoff is below twice the expected excitation.
pub fn truncation_warning(space: &FockSpace, blocks: &BogolubovBlocks) -> Option<String> {
    let n = expected_excitation(blocks);
    (space.statistics() == Statistics::Bose && (space.n_max() as f64) < 2.0 * n)
        .then(|| format!("cutoff {} is below twice the expected excitation {n:.3}", space.n_max()))
}

/// Distance of `a` from the nearer of ±`b`.
pub fn sign_ambiguous_distance(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm().min((a + b).norm())
}

/// Phase λ minimizing ‖a − λ b‖ together with the residual.
pub fn best_phase(a: &CMat, b: &CMat) -> (C64, f64) {
    let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() == 0.0 { ONE } else { overlap / overlap.norm() };
    (phase, (a - b * phase).norm())
}

/// Implementer of a j-degenerate orthogonal map, built by composing quarter
/// turns U0 = (1 + φ(y_b)φ(y_a))/√2 in coordinate planes until the remaining
/// map is j-nondegenerate.
#[derive(Debug, Clone)]
pub struct DegenerateImplementer {
    pub unitary: CMat,
    /// Coordinate planes (a, b) of R^{2d} used, in order of application.
    pub planes: Vec<(usize, usize)>,
    /// Smallest singular value of p for the remaining nondegenerate part.
    pub remaining_p_min: f64,
}

fn real_basis_vector(d: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(d);
    if k < d {
        v[k] = ONE;
    } else {
        v[k - d] = c(0.0, 1.0);
    }
    v
}

/// The orthogonal map r0 with U φ(y) U* = φ(r0 y), read off by traces.
pub fn conjugation_action(space: &FockSpace, u: &CMat) -> Result<BogolubovBlocks> {
    if space.statistics() != Statistics::Fermi {
        return Err(Error::StatisticsMismatch("conjugation action is read off fermionic fields".into()));
    }
    let d = space.d();
    let fields: Vec<CMat> = (0..2 * d)
        .map(|k| field(space, &real_basis_vector(d, k)))
        .collect::<Result<_>>()?;
    let dim = space.dim() as f64;
    let mut r = RMat::zeros(2 * d, 2 * d);
    for k in 0..2 * d {
        let conj = u * &fields[k] * u.adjoint();
        for l in 0..2 * d {
            r[(l, k)] = inner_product_real(&fields[l], &conj) / dim;
        }
    }
    BogolubovBlocks::from_real(&r, BlockKind::Orthogonal)
}

pub fn quarter_turn(space: &FockSpace, a: usize, b: usize) -> Result<CMat> {
    let d = space.d();
    let fa = field(space, &real_basis_vector(d, a))?;
    let fb = field(space, &real_basis_vector(d, b))?;
    Ok((space.identity() + fb * fa) / c(std::f64::consts::SQRT_2, 0.0))
}

pub fn degenerate_implementer(space: &FockSpace, blocks: &BogolubovBlocks) -> Result<DegenerateImplementer> {
    check_space(space, blocks)?;
    let d = space.d();
    let mut remaining = blocks.clone();
    let mut prefix = space.identity();
    let mut planes = Vec::new();
    for _ in 0..=2 * d {
        if remaining.p_min_singular() >= tol::NONDEGENERATE_TARGET {
            let u = shale_implementer(space, &remaining)? * &prefix;
            return Ok(DegenerateImplementer {
                unitary: u,
                planes,
                remaining_p_min: remaining.p_min_singular(),
            });
        }
        // Greedy choice of the plane that best conditions the remainder.
        let mut best: Option<(f64, usize, usize, CMat, BogolubovBlocks)> = None;
        for a in 0..2 * d {
            for b in a + 1..2 * d {
                let u0 = quarter_turn(space, a, b)?;
                let r0 = conjugation_action(space, &u0)?;
                let rest = remaining.compose(&r0.inverse()?);
                let score = rest.p_min_singular();
                if best.as_ref().is_none_or(|(s, ..)| score > *s + 1e-12) {
                    best = Some((score, a, b, u0, rest));
                }
            }
        }
        let (_, a, b, u0, rest) = best.expect("at least one coordinate plane");
        prefix = u0 * prefix;
        planes.push((a, b));
        remaining = rest;
    }
    Err(Error::FermiDegenerate(remaining.p_min_singular()))
}
