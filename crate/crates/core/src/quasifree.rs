//! Wick pairing sums, quasi-freeness tests of concrete vectors, and the
//! reduction of a covariance (η or α, ω) to a one-particle density.
//!
//! Conventions: for bosons ⟨φ(y1)φ(y2)⟩ = y1ηy2 + (i/2) y1ωy2, and for fermions
//! ⟨φ(y1)φ(y2)⟩ = y1αy2 + (i/2) y1ωy2.

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Statistics};
use crate::linalg::{c, eigh, eigh_real, enumerate_pairings, inner, CMat, CVec, RMat, RVec, C64, ZERO};
use crate::reps::field;
use crate::tol;

/// Σ_σ (sgn σ) Π T(σ(2j−1), σ(2j)) over pairings of the indices of `t`.
/// Only entries above the diagonal are read. Odd sizes give 0.
pub fn wick_npoint(t: &CMat, statistics: Statistics) -> C64 {
    let n = t.nrows();
    if n % 2 == 1 {
        return ZERO;
    }
    enumerate_pairings(n / 2)
        .iter()
        .map(|p| {
            let sign = match statistics {
                Statistics::Bose => 1.0,
                Statistics::Fermi => p.sign as f64,
            };
            p.pairs().map(|(i, j)| t[(i.min(j), i.max(j))]).product::<C64>() * sign
        })
        .sum()
}

/// Pairwise two-point values T(i, j) = ⟨φ(y_i)φ(y_j)⟩ from the complex
/// bilinear form of the two-point function in real coordinates.
pub fn two_point_table(form: &CMat, ys: &[RVec]) -> CMat {
    let n = ys.len();
    CMat::from_fn(n, n, |i, j| {
        let yi = ys[i].map(|x| c(x, 0.0));
        let yj = ys[j].map(|x| c(x, 0.0));
        (yi.transpose() * form * yj)[(0, 0)]
    })
}

#[derive(Debug, Clone)]
pub struct QuasiFreeReport {
    pub max_order: usize,
    /// Largest |measured − Wick| per order n = 1..=max_order.
    pub defects: Vec<f64>,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares ⟨Ψ|φ(w_{i1})⋯φ(w_{in})Ψ⟩ for all index words of length ≤ `max_order`
/// over the family with the Wick sum built from the measured two-point values.
pub fn verify_quasifree(
    space: &FockSpace,
    vector: &CVec,
    family: &[CVec],
    max_order: usize,
    tolerance: f64,
) -> Result<QuasiFreeReport> {
    let fields: Vec<CMat> = family.iter().map(|w| field(space, w)).collect::<Result<_>>()?;
    let k = fields.len();
    let mut two = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            two[(i, j)] = inner(vector, &(&fields[i] * (&fields[j] * vector)));
        }
    }
    let mut defects = vec![0.0; max_order];
    for n in 1..=max_order {
        let mut word = vec![0usize; n];
        loop {
            let mut v = vector.clone();
            for &i in word.iter().rev() {
                v = &fields[i] * v;
            }
            let measured = inner(vector, &v);
            let t = CMat::from_fn(n, n, |a, b| two[(word[a], word[b])]);
            let expected = wick_npoint(&t, space.statistics());
            defects[n - 1] = f64::max(defects[n - 1], (measured - expected).norm());
            // Next word in lexicographic order.
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                word[pos] += 1;
                if word[pos] < k {
                    break;
                }
                word[pos] = 0;
            }
            if word.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    let max_defect = defects.iter().cloned().fold(0.0, f64::max);
    Ok(QuasiFreeReport {
        max_order,
        defects,
        max_defect,
        tolerance,
        passed: max_defect <= tolerance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceData {
    pub statistics: Statistics,
    /// η (Bose) or α (Fermi).
    pub symmetric_form: RMat,
    pub omega: RMat,
}

impl CovarianceData {
    /// Validates symmetry, positivity and the bound |y1ωy2| ≤ 2|y1Sy1|^{1/2}|y2Sy2|^{1/2},
    /// the latter as positivity of the Hermitian matrix S + (i/2)ω.
    pub fn new(statistics: Statistics, symmetric_form: RMat, omega: RMat) -> Result<Self> {
        let n = symmetric_form.nrows();
        if symmetric_form.ncols() != n || omega.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n} forms"),
                got: format!("{:?} and {:?}", symmetric_form.shape(), omega.shape()),
            });
        }
        let scale = symmetric_form.amax().max(omega.amax()).max(1.0);
        let asym = (&symmetric_form - symmetric_form.transpose()).amax();
        if asym > tol::ALGEBRAIC * scale {
            return Err(Error::SymmetryViolation(asym));
        }
        let sym = (&omega + omega.transpose()).amax();
        if sym > tol::ALGEBRAIC * scale {
            return Err(Error::SymmetryViolation(sym));
        }
        let (ev, _) = eigh_real(&symmetric_form)?;
        if ev[0] < -tol::SPECTRAL * scale {
            return Err(Error::NonPositiveForm);
        }
        let gram = CMat::from_fn(n, n, |i, j| c(symmetric_form[(i, j)], 0.5 * omega[(i, j)]));
        let (gev, _) = eigh(&gram)?;
        if gev[0] < -tol::SPECTRAL * scale {
            return Err(Error::CauchySchwarzViolation(-gev[0]));
        }
        Ok(CovarianceData {
            statistics,
            symmetric_form,
            omega,
        })
    }

    /// The two-point form S + (i/2)ω.
    pub fn two_point_form(&self) -> CMat {
        let n = self.symmetric_form.nrows();
        CMat::from_fn(n, n, |i, j| c(self.symmetric_form[(i, j)], 0.5 * self.omega[(i, j)]))
    }
}

#[derive(Debug, Clone)]
pub struct ReducedRepData {
    pub statistics: Statistics,
    pub complex_dim: usize,
    /// Complex structure on the real space, j² = −1; −j acts as the imaginary unit.
    pub j: RMat,
    /// Complex coordinates z = chart · y.
    pub chart: CMat,
    /// ρ (Bose) or χ (Fermi) in the chart coordinates.
    pub density: CMat,
    /// Singular values of μ, one per complex dimension.
    pub mu_abs: Vec<f64>,
}

impl ReducedRepData {
    pub fn coordinates(&self, y: &RVec) -> CVec {
        &self.chart * y.map(|x| c(x, 0.0))
    }

    /// Two-point function of the reconstructed representation:
    /// Bose ½(z1|z2) + Re(z1|ρz2), Fermi (z1|z2) − 2i Im(z1|χz2).
    pub fn two_point(&self, y1: &RVec, y2: &RVec) -> C64 {
        let z1 = self.coordinates(y1);
        let z2 = self.coordinates(y2);
        let dz = inner(&z1, &(&self.density * &z2));
        match self.statistics {
            Statistics::Bose => inner(&z1, &z2) * 0.5 + c(dz.re, 0.0),
            Statistics::Fermi => inner(&z1, &z2) - c(0.0, 2.0 * dz.im),
        }
    }

    /// Largest entry of the difference between the reconstructed and the input two-point form.
    pub fn residual(&self, cov: &CovarianceData) -> f64 {
        let n = cov.symmetric_form.nrows();
        let form = cov.two_point_form();
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                let ei = RVec::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
                let ek = RVec::from_fn(n, |r, _| if r == k { 1.0 } else { 0.0 });
                worst = worst.max((self.two_point(&ei, &ek) - form[(i, k)]).norm());
            }
        }
        worst
    }
}

/// Orthonormal real pairs (a, b) with μ̃a = s b, μ̃b = −s a for an antisymmetric
/// real matrix μ̃, ordered by decreasing s; kernel vectors are returned separately.
fn antisymmetric_normal_form(m: &RMat) -> Result<(Vec<(f64, RVec, RVec)>, Vec<RVec>)> {
    let n = m.nrows();
    let herm = CMat::from_fn(n, n, |i, j| c(0.0, m[(i, j)]));
    let (ev, vecs) = eigh(&herm)?;
    let top = ev.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    let cut = tol::RANK_REL * top.max(1.0);
    let mut blocks = Vec::new();
    // Eigenvalues come sorted ascending; the positive half, largest first.
    for k in (0..n).rev() {
        if ev[k] <= cut {
            break;
        }
        let w = vecs.column(k);
        let a = RVec::from_fn(n, |i, _| std::f64::consts::SQRT_2 * w[i].re);
        let b = RVec::from_fn(n, |i, _| std::f64::consts::SQRT_2 * w[i].im);
        blocks.push((ev[k], a, b));
    }
    // Kernel: orthonormal complement of the block vectors.
    let mut span: Vec<RVec> = blocks.iter().flat_map(|(_, a, b)| [a.clone(), b.clone()]).collect();
    let mut kernel = Vec::new();
    for i in 0..n {
        let mut v = RVec::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
        for _ in 0..2 {
            for u in &span {
                v -= u * u.dot(&v);
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= norm;
            span.push(v.clone());
            kernel.push(v);
        }
    }
    Ok((blocks, kernel))
}

fn sym_sqrt_and_inverse(s: &RMat) -> Result<(RMat, RMat)> {
    let (ev, v) = eigh_real(s)?;
    if ev[0] <= tol::SPECTRAL * ev[ev.len() - 1].max(1.0) {
        return Err(Error::NonPositiveForm);
    }
    let root = &v * RMat::from_diagonal(&RVec::from_iterator(ev.len(), ev.iter().map(|x| x.sqrt()))) * v.transpose();
    let inv = &v * RMat::from_diagonal(&RVec::from_iterator(ev.len(), ev.iter().map(|x| 1.0 / x.sqrt()))) * v.transpose();
    Ok((root, inv))
}

struct Assembled {
    j: RMat,
    chart: CMat,
    mu_abs: Vec<f64>,
}

/// Builds j and the chart from pairs (s, a, b) in form-orthonormal coordinates
/// x = S^{1/2} y. Each pair gives one complex coordinate with basis vector
/// a/√g and i·(a/√g) = −b/√g, where g is the chart weight of the pair.
fn assemble(pairs: &[(f64, RVec, RVec)], root: &RMat, inv_root: &RMat, weight: impl Fn(f64) -> f64) -> Assembled {
    let n = root.nrows();
    let m = pairs.len();
    let mut jt = RMat::zeros(n, n);
    let mut chart = CMat::zeros(m, n);
    let mut mu_abs = Vec::with_capacity(m);
    for (k, (s, a, b)) in pairs.iter().enumerate() {
        jt += b * a.transpose() - a * b.transpose();
        // z_k = g^{1/2}(a·x) − i g^{1/2}(b·x) for x = S^{1/2}y.
        let g = weight(*s).sqrt();
        let ra = root.transpose() * a * g;
        let rb = root.transpose() * b * g;
        for i in 0..n {
            chart[(k, i)] = c(ra[i], -rb[i]);
        }
        mu_abs.push(*s);
    }
    Assembled {
        j: inv_root * jt * root,
        chart,
        mu_abs,
    }
}

/// η, ω ↦ (j, ρ) with ω = 2ημ, μ = |μ|j and ρ = ½(|μ|⁻¹ − 1).
pub fn reduce_bose(cov: &CovarianceData) -> Result<ReducedRepData> {
    if cov.statistics != Statistics::Bose {
        return Err(Error::StatisticsMismatch("reduce_bose needs a bosonic covariance".into()));
    }
    let n = cov.symmetric_form.nrows();
    if n % 2 == 1 || cov.omega.amax() == 0.0 {
        return Err(Error::DegenerateOmega);
    }
    let (root, inv_root) = sym_sqrt_and_inverse(&cov.symmetric_form)?;
    let mu = &inv_root * &cov.omega * &inv_root * 0.5;
    let (pairs, kernel) = antisymmetric_normal_form(&mu)?;
    if !kernel.is_empty() {
        return Err(Error::DegenerateOmega);
    }
    let pairs: Vec<_> = pairs.into_iter().map(|(s, a, b)| (s.min(1.0), a, b)).collect();
    let asm = assemble(&pairs, &root, &inv_root, |s| 2.0 * s);
    let density = CMat::from_diagonal(&CVec::from_iterator(
        pairs.len(),
        asm.mu_abs.iter().map(|s| c(0.5 * (1.0 / s - 1.0), 0.0)),
    ));
    Ok(ReducedRepData {
        statistics: Statistics::Bose,
        complex_dim: pairs.len(),
        j: asm.j,
        chart: asm.chart,
        density,
        mu_abs: asm.mu_abs,
    })
}

/// α, ω ↦ (j, χ) with ω = 2αμ, μ = |μ|j on (Ker μ)^⊥, j extended over
/// Ker μ by pairing kernel vectors, and χ = ½(1 − |μ|).
pub fn reduce_fermi(cov: &CovarianceData) -> Result<ReducedRepData> {
    if cov.statistics != Statistics::Fermi {
        return Err(Error::StatisticsMismatch("reduce_fermi needs a fermionic covariance".into()));
    }
    let (root, inv_root) = sym_sqrt_and_inverse(&cov.symmetric_form)?;
    let mu = &inv_root * &cov.omega * &inv_root * 0.5;
    let (mut pairs, kernel) = antisymmetric_normal_form(&mu)?;
    if kernel.len() % 2 == 1 {
        return Err(Error::OddKernel(kernel.len()));
    }
    for pair in pairs.iter_mut() {
        pair.0 = pair.0.min(1.0);
    }
    for k in kernel.chunks(2) {
        pairs.push((0.0, k[0].clone(), k[1].clone()));
    }
    let asm = assemble(&pairs, &root, &inv_root, |_| 1.0);
    let density = CMat::from_diagonal(&CVec::from_iterator(
        pairs.len(),
        asm.mu_abs.iter().map(|s| c(0.5 * (1.0 - s), 0.0)),
    ));
    Ok(ReducedRepData {
        statistics: Statistics::Fermi,
        complex_dim: pairs.len(),
        j: asm.j,
        chart: asm.chart,
        density,
        mu_abs: asm.mu_abs,
    })
}

/// Covariance of the left thermal representation with density ρ (Bose) or χ (Fermi),
/// in the real coordinates y = (Re z, Im z).
pub fn covariance_from_density(statistics: Statistics, density: &CMat) -> Result<CovarianceData> {
    let d = crate::linalg::require_square(density)?;
    let n = 2 * d;
    let basis = |k: usize| {
        let mut z = CVec::zeros(d);
        if k < d {
            z[k] = c(1.0, 0.0);
        } else {
            z[k - d] = c(0.0, 1.0);
        }
        z
    };
    let mut s = RMat::zeros(n, n);
    let mut w = RMat::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let (z1, z2) = (basis(i), basis(k));
            let dz = inner(&z1, &(density * &z2));
            let value = match statistics {
                Statistics::Bose => inner(&z1, &z2) * 0.5 + c(dz.re, 0.0),
                Statistics::Fermi => inner(&z1, &z2) - c(0.0, 2.0 * dz.im),
            };
            s[(i, k)] = value.re;
            w[(i, k)] = 2.0 * value.im;
        }
    }
    CovarianceData::new(statistics, s, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_wick() {
        let t = CMat::from_row_slice(2, 2, &[ZERO, c(0.3, 0.1), ZERO, ZERO]);
        assert_eq!(wick_npoint(&t, Statistics::Fermi), c(0.3, 0.1));
        assert_eq!(wick_npoint(&CMat::zeros(3, 3), Statistics::Bose), ZERO);
    }
}
