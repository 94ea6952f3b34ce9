//! Fock representations of the CCR and CAR.
//!
//! Fields are φ(w) = a*(w) + a(w) for w in the one-particle space, so
//! [φ(w1), φ(w2)] = 2i Im(w1|w2) for bosons and [φ(w1), φ(w2)]_+ = 2 Re(w1|w2)
//! for fermions. `field_identified` is the bosonic φ/√2 variant.

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Statistics};
use crate::linalg::{
    c, exp_series, exp_series_apply, expm_herm, fredholm_det, identity, inner, kron, mul_sparse_left, op_norm,
    require_len, require_square, sqrt_psd, CMat, CVec, I, ONE, ZERO,
};
use crate::tol;

/// A one-particle vector of the doubled space Z ⊕ Z̄, kept as its two legs.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledVector {
    pub z1: CVec,
    pub z2bar: CVec,
}

impl DoubledVector {
    pub fn new(z1: CVec, z2bar: CVec) -> Self {
        DoubledVector { z1, z2bar }
    }

    /// The real element (z, z̄).
    pub fn real(z: &CVec) -> Self {
        DoubledVector {
            z1: z.clone(),
            z2bar: z.conjugate(),
        }
    }

    /// Concatenated coordinates in C^{2d}.
    pub fn concat(&self) -> CVec {
        let d1 = self.z1.len();
        CVec::from_fn(d1 + self.z2bar.len(), |k, _| {
            if k < d1 {
                self.z1[k]
            } else {
                self.z2bar[k - d1]
            }
        })
    }
}

/// Symplectic form of the bosonic fields: y1 ω y2 = 2 Im(w1|w2).
pub fn bose_omega(w1: &CVec, w2: &CVec) -> f64 {
    2.0 * inner(w1, w2).im
}

/// Scalar product of the fermionic fields: y1 α y2 = Re(w1|w2).
pub fn fermi_alpha(w1: &CVec, w2: &CVec) -> f64 {
    inner(w1, w2).re
}

pub fn field(space: &FockSpace, w: &CVec) -> Result<CMat> {
    let a = space.create(w)?;
    Ok(&a + a.adjoint())
}

/// The bosonic field in the normalization φ(w) = (a*(w) + a(w))/√2.
pub fn field_identified(space: &FockSpace, w: &CVec) -> Result<CMat> {
    Ok(field(space, w)? / c(std::f64::consts::SQRT_2, 0.0))
}

/// W(w) = exp(iφ(w)).
pub fn weyl(space: &FockSpace, w: &CVec) -> Result<CMat> {
    if space.statistics() != Statistics::Bose {
        return Err(Error::StatisticsMismatch("Weyl operators need a bosonic space".into()));
    }
    expm_herm(&field(space, w)?, I)
}

/// Defect of W(w1)W(w2) = exp(-(i/2) y1ωy2) W(w1+w2), measured on the block
/// with both rows and columns in sectors <= `sector`.
pub fn weyl_defect(space: &FockSpace, w1: &CVec, w2: &CVec, sector: usize) -> Result<f64> {
    let lhs = weyl(space, w1)? * weyl(space, w2)?;
    let phase = (c(0.0, -0.5) * bose_omega(w1, w2)).exp();
    let rhs = weyl(space, &(w1 + w2))? * phase;
    Ok(space.block_norm(&(lhs - rhs), sector, sector))
}

fn check_kernel_symmetry(statistics: Statistics, c_ker: &CMat) -> Result<usize> {
    let d = require_square(c_ker)?;
    let sym = match statistics {
        Statistics::Bose => c_ker - c_ker.transpose(),
        Statistics::Fermi => c_ker + c_ker.transpose(),
    };
    let defect = crate::linalg::max_abs(&sym);
    let scale = crate::linalg::max_abs(c_ker).max(1.0);
    if defect > tol::KERNEL_SYMMETRY * scale {
        return Err(Error::SymmetryViolation(defect));
    }
    Ok(d)
}

/// a*(c) = Σ c_ij a*_i a*_j for a symmetric (Bose) or antisymmetric (Fermi) kernel.
pub fn multi_create(space: &FockSpace, c_ker: &CMat) -> Result<CMat> {
    let d = check_kernel_symmetry(space.statistics(), c_ker)?;
    if d != space.d() {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", space.d()),
            got: format!("{d}x{d}"),
        });
    }
    let creators: Vec<CMat> = (0..d).map(|i| space.mode_create(i)).collect();
    let mut m = CMat::zeros(space.dim(), space.dim());
    for i in 0..d {
        for j in 0..d {
            if c_ker[(i, j)] != ZERO {
                m += crate::linalg::mul_sparse_left(&creators[i], &creators[j]) * c_ker[(i, j)];
            }
        }
    }
    Ok(m)
}

pub fn multi_annihilate(space: &FockSpace, c_ker: &CMat) -> Result<CMat> {
    Ok(multi_create(space, c_ker)?.adjoint())
}

fn gaussian_norm(statistics: Statistics, c_ker: &CMat) -> Result<f64> {
    let cc = c_ker * c_ker.adjoint();
    match statistics {
        Statistics::Bose => {
            let n = op_norm(c_ker);
            if n >= 1.0 {
                return Err(Error::NormTooLarge(n));
            }
            Ok(fredholm_det(&(-cc))?.re.powf(0.25))
        }
        Statistics::Fermi => Ok(fredholm_det(&cc)?.re.powf(-0.25)),
    }
}

#[derive(Debug, Clone)]
pub struct GaussianVector {
    /// Closed-form normalized vector.
    pub vector: CVec,
    /// Normalization constant from the determinant formula.
    pub closed_norm: f64,
    /// 1/‖exp(½a*(c))Ω‖ computed on the (truncated) space.
    pub series_norm: f64,
}

impl GaussianVector {
    /// Disagreement of the two normalizations; exact for fermions, the
    /// truncation tail for bosons.
    pub fn norm_defect(&self) -> f64 {
        (self.vector.norm() - 1.0).abs()
    }
}

/// Ω_c = N exp(½ a*(c)) Ω.
pub fn gaussian_vector(space: &FockSpace, c_ker: &CMat) -> Result<GaussianVector> {
    let raise = multi_create(space, c_ker)? * c(0.5, 0.0);
    let closed_norm = gaussian_norm(space.statistics(), c_ker)?;
    let unnormalized = exp_series_apply(&raise, &space.vacuum())?;
    let series_norm = 1.0 / unnormalized.norm();
    Ok(GaussianVector {
        vector: unnormalized * c(closed_norm, 0.0),
        closed_norm,
        series_norm,
    })
}

/// (a(z) ∓ a*(c z̄)) Ω_c for bosons (−) and fermions (+).
pub fn gaussian_kernel_residual(space: &FockSpace, c_ker: &CMat, omega_c: &CVec, z: &CVec) -> Result<CVec> {
    require_len(z, space.d())?;
    let a = space.annihilate(z)?;
    let cz = c_ker * z.conjugate();
    let b = space.create(&cz)?;
    let op = match space.statistics() {
        Statistics::Bose => a - b,
        Statistics::Fermi => a + b,
    };
    Ok(op * omega_c)
}

/// The unitary R_c with R_c Ω_c = Ω:
/// det(1∓cc*)^{±1/4} exp(−½a*(c)) Γ((1∓cc*)^{1/2}) exp(½a(c)),
/// upper signs bosonic, lower fermionic.
pub fn squeezer(space: &FockSpace, c_ker: &CMat) -> Result<CMat> {
    let d = space.d();
    let cc = c_ker * c_ker.adjoint();
    let inner_op = match space.statistics() {
        Statistics::Bose => identity(d) - cc,
        Statistics::Fermi => identity(d) + cc,
    };
    let norm = gaussian_norm(space.statistics(), c_ker)?;
    let raise = multi_create(space, c_ker)? * c(-0.5, 0.0);
    let lower = multi_annihilate(space, c_ker)? * c(0.5, 0.0);
    let g = space.gamma(&sqrt_psd(&inner_op)?)?;
    let right = crate::linalg::mul_sparse_left(&g, &exp_series(&lower)?);
    Ok(crate::linalg::mul_sparse_left(&exp_series(&raise)?, &right) * c(norm, 0.0))
}

/// R_c v without forming R_c.
pub fn squeezer_apply(space: &FockSpace, c_ker: &CMat, v: &CVec) -> Result<CVec> {
    let d = space.d();
    let cc = c_ker * c_ker.adjoint();
    let inner_op = match space.statistics() {
        Statistics::Bose => identity(d) - cc,
        Statistics::Fermi => identity(d) + cc,
    };
    let norm = gaussian_norm(space.statistics(), c_ker)?;
    let raise = multi_create(space, c_ker)? * c(-0.5, 0.0);
    let lowered = exp_series_apply(&(raise.adjoint() * c(-1.0, 0.0)), v)?;
    let g = space.gamma(&sqrt_psd(&inner_op)?)?;
    Ok(exp_series_apply(&raise, &(g * lowered))? * c(norm, 0.0))
}

/// The pair (P, Q) with R_c a*(z) R_c* = a*(Pz) + a(Q z̄).
pub fn squeezer_conjugation_blocks(statistics: Statistics, c_ker: &CMat) -> Result<(CMat, CMat)> {
    let d = require_square(c_ker)?;
    let cc = c_ker * c_ker.adjoint();
    match statistics {
        Statistics::Bose => {
            let p = crate::linalg::inv_sqrt_pd(&(identity(d) - cc))?;
            let q = &p * c_ker;
            Ok((p, q))
        }
        Statistics::Fermi => {
            let p = crate::linalg::inv_sqrt_pd(&(identity(d) + cc))?;
            let q = -(&p * c_ker);
            Ok((p, q))
        }
    }
}

/// Pauli matrices σ1, σ2, σ3.
pub fn pauli() -> [CMat; 3] {
    let s1 = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let s2 = CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
    let s3 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    [s1, s2, s3]
}

/// The 2n Jordan-Wigner fields on (C²)^{⊗n}, site 1 being the leftmost
/// tensor factor. With `with_parity` the operator I_n = σ3 ⊗ .. ⊗ σ3 is
/// appended.
pub fn jordan_wigner(n: usize, with_parity: bool) -> Vec<CMat> {
    let [s1, s2, s3] = pauli();
    let one = identity(2);
    let site_op = |site: usize, local: &CMat| -> CMat {
        let mut m = identity(1);
        for k in 0..n {
            let factor = if k < site {
                &s3
            } else if k == site {
                local
            } else {
                &one
            };
            m = kron(&m, factor);
        }
        m
    };
    let mut out = Vec::with_capacity(2 * n + 1);
    for site in 0..n {
        out.push(site_op(site, &s1));
        out.push(site_op(site, &s2));
    }
    if with_parity {
        let mut p = identity(1);
        for _ in 0..n {
            p = kron(&p, &s3);
        }
        out.push(p);
    }
    out
}

/// Q = i^{n(n−1)/2} φ(y1) .. φ(yn) for an α-orthonormal family.
pub fn q_operator(space: &FockSpace, basis: &[CVec]) -> Result<CMat> {
    if space.statistics() != Statistics::Fermi {
        return Err(Error::StatisticsMismatch("Q is defined on fermionic spaces".into()));
    }
    let mut worst: f64 = 0.0;
    for (i, yi) in basis.iter().enumerate() {
        require_len(yi, space.d())?;
        for (j, yj) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((fermi_alpha(yi, yj) - target).abs());
        }
    }
    if worst > tol::ALGEBRAIC {
        return Err(Error::NonOrthonormalBasis(worst));
    }
    let n = basis.len();
    let mut q = space.identity();
    for y in basis {
        q *= field(space, y)?;
    }
    let phase = match (n * n.saturating_sub(1) / 2) % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    };
    Ok(q * phase)
}

/// The oriented basis (e1, −ie1, e2, −ie2, ..) for which Q is the parity.
pub fn canonical_oriented_basis(d: usize) -> Vec<CVec> {
    let mut out = Vec::with_capacity(2 * d);
    for k in 0..d {
        let mut e = CVec::zeros(d);
        e[k] = ONE;
        out.push(e.clone());
        out.push(e * (-I));
    }
    out
}

/// ‖[φ(y1), φ(y2)]_+ − 2 y1αy2‖ (Frobenius).
pub fn car_defect(space: &FockSpace, w1: &CVec, w2: &CVec) -> Result<f64> {
    let f1 = field(space, w1)?;
    let f2 = field(space, w2)?;
    let anti = mul_sparse_left(&f1, &f2) + mul_sparse_left(&f2, &f1);
    let expected = space.identity() * c(2.0 * fermi_alpha(w1, w2), 0.0);
    Ok((anti - expected).norm())
}

/// [a(w1), a*(w2)] − (w1|w2) on the block below the top sector.
pub fn ccr_defect(space: &FockSpace, w1: &CVec, w2: &CVec) -> Result<f64> {
    let a = space.annihilate(w1)?;
    let b = space.create(w2)?;
    let comm = mul_sparse_left(&a, &b) - mul_sparse_left(&b, &a);
    let expected = space.identity() * inner(w1, w2);
    let top = space.n_max().saturating_sub(1);
    Ok(space.block_norm(&(comm - expected), top, top))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_product() {
        let [s1, s2, s3] = pauli();
        assert!(((&s1 * &s2) - &s3 * I).norm() == 0.0);
        assert!(((&s2 * &s1) + &s3 * I).norm() == 0.0);
    }

    #[test]
    fn jw_two_sites_third_field() {
        let [s1, _, s3] = pauli();
        let jw = jordan_wigner(2, false);
        assert_eq!(jw.len(), 4);
        assert_eq!(jw[2], kron(&s3, &s1));
    }

    #[test]
    fn field_of_zero_vanishes() {
        let s = FockSpace::bose(2, 3).unwrap();
        assert_eq!(field(&s, &CVec::zeros(2)).unwrap().norm(), 0.0);
    }
}
