//! Occupation-number Fock spaces over C^d.
//!
//! Basis states are graded by particle number and, inside a sector, ordered
//! lexicographically by the sorted list of occupied modes. For fermions the
//! state with occupied modes i1 < .. < ik is a*_{i1} .. a*_{ik} Ω. Bosonic
//! states are the normalized ones, Π (a*_i)^{n_i} / sqrt(n_i!) Ω, and the
//! space is truncated by total particle number.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, is_diagonal, require_len, require_square, CMat, CVec, C64, ONE, ZERO};

pub const MAX_DIM: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    /// +1 for bosons, -1 for fermions.
    pub fn sign(self) -> f64 {
        match self {
            Statistics::Bose => 1.0,
            Statistics::Fermi => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

/// One ladder step: target basis index, sign and squared modulus of the
/// matrix element. Keeping the weight as an integer makes a*_i a_i exact.
type Step = Option<(usize, f64, u32)>;

#[derive(Debug, Clone)]
pub struct FockSpace {
    statistics: Statistics,
    d: usize,
    n_max: usize,
    basis: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
    totals: Vec<usize>,
    // create[i][s] is a*_i applied to basis state s.
    create: Vec<Vec<Step>>,
    annihilate: Vec<Vec<Step>>,
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

impl FockSpace {
    pub fn fermi(d: usize) -> Result<Self> {
        Self::new(Statistics::Fermi, d, d)
    }

    pub fn bose(d: usize, n_max: usize) -> Result<Self> {
        Self::new(Statistics::Bose, d, n_max)
    }

    /// Build the space. For fermions `n_max` is ignored and set to `d`.
    pub fn new(statistics: Statistics, d: usize, n_max: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("one-particle dimension must be at least 1".into()));
        }
        let n_max = match statistics {
            Statistics::Fermi => d,
            Statistics::Bose => n_max,
        };
        let dim = match statistics {
            Statistics::Fermi => {
                if d >= 64 {
                    u128::MAX
                } else {
                    1u128 << d
                }
            }
            Statistics::Bose => binomial((n_max + d) as u128, d as u128),
        };
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        let mut basis = Vec::with_capacity(dim as usize);
        for n in 0..=n_max {
            let mut modes = Vec::with_capacity(n);
            enumerate_sector(statistics, d, n, 0, &mut modes, &mut basis);
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, occ)| (occ.clone(), k))
            .collect::<HashMap<_, _>>();
        let totals = basis
            .iter()
            .map(|occ| occ.iter().map(|&x| x as usize).sum())
            .collect::<Vec<usize>>();
        let mut space = FockSpace {
            statistics,
            d,
            n_max,
            basis,
            index,
            totals,
            create: vec![],
            annihilate: vec![],
        };
        space.build_tables();
        Ok(space)
    }

    fn build_tables(&mut self) {
        let dim = self.dim();
        let mut create = vec![vec![None; dim]; self.d];
        let mut annihilate = vec![vec![None; dim]; self.d];
        for (s, occ) in self.basis.iter().enumerate() {
            for i in 0..self.d {
                let ni = occ[i];
                let sign = match self.statistics {
                    Statistics::Bose => 1.0,
                    Statistics::Fermi => {
                        let before: u16 = occ[..i].iter().sum();
                        if before % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                };
                let can_raise = match self.statistics {
                    Statistics::Bose => self.totals[s] < self.n_max,
                    Statistics::Fermi => ni == 0,
                };
                if can_raise {
                    let mut up = occ.clone();
                    up[i] += 1;
                    let t = self.index[&up];
                    let weight = match self.statistics {
                        Statistics::Bose => (ni + 1) as u32,
                        Statistics::Fermi => 1,
                    };
                    create[i][s] = Some((t, sign, weight));
                }
                if ni > 0 {
                    let mut down = occ.clone();
                    down[i] -= 1;
                    let t = self.index[&down];
                    let weight = match self.statistics {
                        Statistics::Bose => ni as u32,
                        Statistics::Fermi => 1,
                    };
                    annihilate[i][s] = Some((t, sign, weight));
                }
            }
        }
        self.create = create;
        self.annihilate = annihilate;
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u16>] {
        &self.basis
    }

    pub fn occupation(&self, s: usize) -> &[u16] {
        &self.basis[s]
    }

    pub fn index_of(&self, occupation: &[u16]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Total particle number of basis state `s`.
    pub fn total(&self, s: usize) -> usize {
        self.totals[s]
    }

    pub fn same_shape(&self, other: &FockSpace) -> bool {
        self.statistics == other.statistics && self.d == other.d && self.n_max == other.n_max
    }

    pub fn vacuum(&self) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[0] = ONE;
        v
    }

    pub fn identity(&self) -> CMat {
        identity(self.dim())
    }

    pub fn basis_vector(&self, s: usize) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[s] = ONE;
        v
    }

    /// Indices of the basis states with at most `n` particles.
    pub fn sector_upto(&self, n: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&s| self.totals[s] <= n).collect()
    }

    /// Projection onto states with at most `n` particles.
    pub fn projector_upto(&self, n: usize) -> CMat {
        CMat::from_diagonal(&CVec::from_fn(self.dim(), |s, _| {
            if self.totals[s] <= n {
                ONE
            } else {
                ZERO
            }
        }))
    }

    /// Frobenius norm of the block of `m` with rows in sectors <= `rows_upto`
    /// and columns in sectors <= `cols_upto`.
    pub fn block_norm(&self, m: &CMat, rows_upto: usize, cols_upto: usize) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.dim() {
            if self.totals[j] > cols_upto {
                continue;
            }
            for i in 0..self.dim() {
                if self.totals[i] <= rows_upto {
                    sum += m[(i, j)].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// Norm of the part of `v` in sectors <= `upto`.
    pub fn vector_block_norm(&self, v: &CVec, upto: usize) -> f64 {
        v.iter()
            .enumerate()
            .filter(|(s, _)| self.totals[*s] <= upto)
            .map(|(_, x)| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn diagonal(&self, f: impl Fn(usize) -> f64) -> CMat {
        CMat::from_diagonal(&CVec::from_fn(self.dim(), |s, _| c(f(s), 0.0)))
    }

    /// The number operator N.
    pub fn number(&self) -> CMat {
        self.diagonal(|s| self.totals[s] as f64)
    }

    /// Parity I = (-1)^N.
    pub fn parity(&self) -> CMat {
        self.diagonal(|s| if self.totals[s] % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Λ = (-1)^{N(N-1)/2}.
    pub fn lambda_op(&self) -> CMat {
        self.diagonal(|s| {
            let n = self.totals[s];
            if (n * n.saturating_sub(1) / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// a*_i as a matrix.
    pub fn mode_create(&self, i: usize) -> CMat {
        let mut m = CMat::zeros(self.dim(), self.dim());
        for (s, step) in self.create[i].iter().enumerate() {
            if let Some((t, sign, weight)) = *step {
                m[(t, s)] = c(sign * (weight as f64).sqrt(), 0.0);
            }
        }
        m
    }

    pub fn mode_annihilate(&self, i: usize) -> CMat {
        self.mode_create(i).adjoint()
    }

    /// a*(w) = Σ w_i a*_i.
    pub fn create(&self, w: &CVec) -> Result<CMat> {
        require_len(w, self.d)?;
        let mut m = CMat::zeros(self.dim(), self.dim());
        for i in 0..self.d {
            if w[i] == ZERO {
                continue;
            }
            for (s, step) in self.create[i].iter().enumerate() {
                if let Some((t, sign, weight)) = *step {
                    m[(t, s)] += w[i] * (sign * (weight as f64).sqrt());
                }
            }
        }
        Ok(m)
    }

    /// a(w) = a*(w)*, antilinear in w.
    pub fn annihilate(&self, w: &CVec) -> Result<CMat> {
        Ok(self.create(w)?.adjoint())
    }

    /// a*(w) applied to a vector without forming the matrix.
    pub fn apply_create(&self, w: &CVec, v: &CVec) -> Result<CVec> {
        require_len(w, self.d)?;
        require_len(v, self.dim())?;
        let mut out = CVec::zeros(self.dim());
        for (s, &vs) in v.iter().enumerate() {
            if vs == ZERO {
                continue;
            }
            for i in 0..self.d {
                if let Some((t, sign, weight)) = self.create[i][s] {
                    out[t] += w[i] * (sign * (weight as f64).sqrt()) * vs;
                }
            }
        }
        Ok(out)
    }

    /// dΓ(h) = Σ h_ij a*_i a_j.
    pub fn dgamma(&self, h: &CMat) -> Result<CMat> {
        self.require_one_particle(h)?;
        let dim = self.dim();
        let mut m = CMat::zeros(dim, dim);
        for s in 0..dim {
            for j in 0..self.d {
                let Some((mid, sj, wj)) = self.annihilate[j][s] else {
                    continue;
                };
                for i in 0..self.d {
                    if h[(i, j)] == ZERO {
                        continue;
                    }
                    if let Some((t, si, wi)) = self.create[i][mid] {
                        let amp = si * sj * ((wi * wj) as f64).sqrt();
                        m[(t, s)] += h[(i, j)] * amp;
                    }
                }
            }
        }
        Ok(m)
    }

    /// Γ(p), the multiplicative second quantization.
    pub fn gamma(&self, p: &CMat) -> Result<CMat> {
        self.require_one_particle(p)?;
        let dim = self.dim();
        if is_diagonal(p) {
            return Ok(CMat::from_diagonal(&CVec::from_fn(dim, |s, _| {
                self.basis[s]
                    .iter()
                    .enumerate()
                    .fold(ONE, |acc, (i, &n)| acc * p[(i, i)].powu(n as u32))
            })));
        }
        let mut m = CMat::zeros(dim, dim);
        for s in 0..dim {
            let occ = &self.basis[s];
            let mut modes = Vec::new();
            let mut norm = 1.0;
            for (i, &ni) in occ.iter().enumerate() {
                for k in 0..ni {
                    modes.push(i);
                    norm *= (k + 1) as f64;
                }
            }
            let mut v = self.vacuum();
            for &i in modes.iter().rev() {
                v = self.apply_create(&p.column(i).into_owned(), &v)?;
            }
            m.set_column(s, &(v / c(norm.sqrt(), 0.0)));
        }
        Ok(m)
    }

    fn require_one_particle(&self, h: &CMat) -> Result<()> {
        let n = require_square(h)?;
        if n != self.d {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0}", self.d),
                got: format!("{n}x{n}"),
            });
        }
        Ok(())
    }
}

fn enumerate_sector(
    statistics: Statistics,
    d: usize,
    remaining: usize,
    start: usize,
    modes: &mut Vec<usize>,
    out: &mut Vec<Vec<u16>>,
) {
    if remaining == 0 {
        let mut occ = vec![0u16; d];
        for &i in modes.iter() {
            occ[i] += 1;
        }
        out.push(occ);
        return;
    }
    for i in start..d {
        modes.push(i);
        let next = match statistics {
            Statistics::Bose => i,
            Statistics::Fermi => i + 1,
        };
        enumerate_sector(statistics, d, remaining - 1, next, modes, out);
        modes.pop();
    }
}

/// The unitary Γ(Z1) ⊗ Γ(Z2) -> Γ(Z1 ⊕ Z2).
///
/// Columns are indexed by `s1 * dim2 + s2`, matching `kron`.
#[derive(Debug, Clone)]
pub struct ExpLaw {
    pub target: FockSpace,
    pub map: CMat,
}

impl ExpLaw {
    pub fn new(s1: &FockSpace, s2: &FockSpace) -> Result<Self> {
        if s1.statistics() != s2.statistics() {
            return Err(Error::StatisticsMismatch(format!(
                "{} and {}",
                s1.statistics().name(),
                s2.statistics().name()
            )));
        }
        let target = FockSpace::new(s1.statistics(), s1.d() + s2.d(), s1.n_max() + s2.n_max())?;
        Self::into_target(s1, s2, target)
    }

    pub fn into_target(s1: &FockSpace, s2: &FockSpace, target: FockSpace) -> Result<Self> {
        if s1.statistics() != s2.statistics() || target.statistics() != s1.statistics() {
            return Err(Error::StatisticsMismatch("exponential law needs equal statistics".into()));
        }
        if target.d() != s1.d() + s2.d() {
            return Err(Error::ShapeMismatch {
                expected: format!("target one-particle dimension {}", s1.d() + s2.d()),
                got: target.d().to_string(),
            });
        }
        if target.statistics() == Statistics::Bose && target.n_max() < s1.n_max() + s2.n_max() {
            return Err(Error::CutoffInsufficient {
                target: target.n_max(),
                required: s1.n_max() + s2.n_max(),
            });
        }
        let (d1, d2) = (s1.dim(), s2.dim());
        let mut map = CMat::zeros(target.dim(), d1 * d2);
        for a in 0..d1 {
            for b in 0..d2 {
                let mut occ = s1.occupation(a).to_vec();
                occ.extend_from_slice(s2.occupation(b));
                let t = target
                    .index_of(&occ)
                    .expect("concatenated occupation lies in the target space");
                map[(t, a * d2 + b)] = ONE;
            }
        }
        Ok(ExpLaw { target, map })
    }

    /// U (A ⊗ B) U*.
    pub fn lift(&self, a: &CMat, b: &CMat) -> CMat {
        let inner = crate::linalg::mul_sparse_left(&self.map, &a.kronecker(b));
        crate::linalg::mul_sparse_right(&inner, &self.map.adjoint())
    }
}

/// The scalar in front of a product of creators acting on a basis state:
/// used by tests as an independent oracle.
pub fn fermi_sign_before(occ: &[u16], i: usize) -> C64 {
    let before: u16 = occ[..i].iter().sum();
    if before % 2 == 0 {
        ONE
    } else {
        -ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(FockSpace::fermi(2).unwrap().dim(), 4);
        assert_eq!(FockSpace::bose(1, 5).unwrap().dim(), 6);
        assert_eq!(FockSpace::bose(2, 3).unwrap().dim(), 10);
        assert_eq!(FockSpace::fermi(5).unwrap().dim(), 32);
    }

    #[test]
    fn basis_order() {
        let f = FockSpace::fermi(2).unwrap();
        assert_eq!(f.basis(), &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = FockSpace::bose(2, 2).unwrap();
        assert_eq!(
            b.basis(),
            &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(FockSpace::fermi(21), Err(Error::DimensionOverflow(_))));
        assert!(matches!(FockSpace::bose(8, 40), Err(Error::DimensionOverflow(_))));
    }

    #[test]
    fn fermi_single_mode_creator() {
        let f = FockSpace::fermi(1).unwrap();
        let a = f.mode_create(0);
        assert_eq!(a[(1, 0)], ONE);
        assert_eq!(a[(0, 1)], ZERO);
    }

    #[test]
    fn lambda_values() {
        let b = FockSpace::bose(1, 4).unwrap();
        let l = b.lambda_op();
        let diag: Vec<f64> = (0..5).map(|k| l[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0, 1.0]);
    }
}
