//! Dense complex linear algebra on top of nalgebra.
//!
//! Matrices are `DMatrix<Complex64>`. Square roots, exponentials and polar
//! parts go through Hermitian eigendecompositions or the SVD, never through
//! iterative matrix functions.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type ComplexMatrix = CMat;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn require_square(a: &CMat) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub fn require_shape(a: &CMat, rows: usize, cols: usize) -> Result<()> {
    if a.nrows() != rows || a.ncols() != cols {
        return Err(Error::ShapeMismatch {
            expected: format!("{rows}x{cols}"),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    Ok(())
}

pub fn require_len(v: &CVec, len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::ShapeMismatch {
            expected: format!("vector of length {len}"),
            got: format!("length {}", v.len()),
        });
    }
    Ok(())
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// (a|b), antilinear in the first argument.
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.dotc(b)
}

pub fn to_complex(a: &RMat) -> CMat {
    a.map(|x| c(x, 0.0))
}

/// The transpose A# = (Ā)*. The two conjugations cancel, leaving the plain transpose.
pub fn transpose_sharp(a: &CMat) -> CMat {
    a.transpose()
}

pub fn is_symmetric(a: &CMat, tol: f64) -> Result<bool> {
    require_square(a)?;
    Ok(max_abs(&(a - a.transpose())) <= tol)
}

pub fn is_antisymmetric(a: &CMat, tol: f64) -> Result<bool> {
    require_square(a)?;
    Ok(max_abs(&(a + a.transpose())) <= tol)
}

pub fn is_diagonal(a: &CMat) -> bool {
    a.nrows() == a.ncols()
        && (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| i == j || a[(i, j)] == ZERO))
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    a.nrows() == a.ncols() && max_abs(&(a - a.adjoint())) <= tol
}

/// det(1 + a).
pub fn fredholm_det(a: &CMat) -> Result<C64> {
    let n = require_square(a)?;
    Ok((identity(n) + a).determinant())
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.norm()))
}

/// Re Tr(a* b).
pub fn inner_product_real(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frob(a: &CMat) -> f64 {
    a.norm()
}

pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = CMat::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok((vec![], CMat::zeros(0, 0)));
    }
    if a.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    let eig = SymmetricEigen::try_new(hermitian_part(a), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix in ascending order. Real input takes the
/// real symmetric path.
pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    require_square(a)?;
    if a.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    let h = hermitian_part(a);
    let mut values: Vec<f64> = if h.iter().all(|x| x.im == 0.0) {
        h.map(|x| x.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        h.symmetric_eigenvalues().iter().copied().collect()
    };
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("Hermitian eigensolver did not converge".into()));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn eigh_real(a: &RMat) -> Result<(Vec<f64>, RMat)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NonSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if n == 0 {
        return Ok((vec![], RMat::zeros(0, 0)));
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = RMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// f(A) for Hermitian A.
pub fn herm_apply(a: &CMat, f: impl Fn(f64) -> C64) -> Result<CMat> {
    let (vals, vecs) = eigh(a)?;
    let mut scaled = vecs.clone();
    for (k, &l) in vals.iter().enumerate() {
        let fl = f(l);
        for x in scaled.column_mut(k).iter_mut() {
            *x *= fl;
        }
    }
    Ok(scaled * vecs.adjoint())
}

pub fn sqrt_psd(a: &CMat) -> Result<CMat> {
    herm_apply(a, |l| c(l.max(0.0).sqrt(), 0.0))
}

pub fn inv_sqrt_pd(a: &CMat) -> Result<CMat> {
    let (vals, _) = eigh(a)?;
    if vals.first().is_some_and(|&l| l <= 0.0) {
        return Err(Error::Numerical("matrix is not positive definite".into()));
    }
    herm_apply(a, |l| c(1.0 / l.sqrt(), 0.0))
}

/// exp(z A) for Hermitian A and complex z.
pub fn expm_herm(a: &CMat, z: C64) -> Result<CMat> {
    herm_apply(a, |l| (z * l).exp())
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    require_square(a)?;
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular matrix".into()))
}

/// exp(A) for a general square matrix, by scaling and squaring a Taylor series.
pub fn expm(a: &CMat) -> Result<CMat> {
    let n = require_square(a)?;
    let norm = a.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / c(2f64.powi(squarings as i32), 0.0);
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=30 {
        term = (&scaled * term) / c(k as f64, 0.0);
        sum += &term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Column-wise nonzero pattern of a matrix, for products with the very
/// sparse ladder operators of a Fock space.
#[derive(Debug, Clone)]
pub struct SparseColumns {
    rows: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseColumns {
    pub fn new(a: &CMat) -> Self {
        let cols = (0..a.ncols())
            .map(|j| {
                a.column(j)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x != ZERO)
                    .map(|(i, x)| (i, *x))
                    .collect()
            })
            .collect();
        SparseColumns { rows: a.nrows(), cols }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// A·B.
    pub fn mul(&self, b: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows, b.ncols());
        for j in 0..b.ncols() {
            let mut col = out.column_mut(j);
            for (k, bk) in b.column(j).iter().enumerate() {
                if *bk == ZERO {
                    continue;
                }
                for &(i, a) in &self.cols[k] {
                    col[i] += a * bk;
                }
            }
        }
        out
    }

    /// A·v.
    pub fn mul_vec(&self, v: &CVec) -> CVec {
        let mut out = CVec::zeros(self.rows);
        for (k, vk) in v.iter().enumerate() {
            if *vk == ZERO {
                continue;
            }
            for &(i, a) in &self.cols[k] {
                out[i] += a * vk;
            }
        }
        out
    }
}

/// A·B, exploiting sparsity of A when it pays.
pub fn mul_sparse_left(a: &CMat, b: &CMat) -> CMat {
    let sp = SparseColumns::new(a);
    if sp.nnz() * 8 < a.nrows() * a.ncols() {
        sp.mul(b)
    } else {
        a * b
    }
}

/// A·B, exploiting sparsity of B when it pays.
pub fn mul_sparse_right(a: &CMat, b: &CMat) -> CMat {
    mul_sparse_left(&b.adjoint(), &a.adjoint()).adjoint()
}

/// exp(A) by its power series. Intended for nilpotent A (raising or lowering
/// operators on a graded space), where the series terminates exactly.
pub fn exp_series(a: &CMat) -> Result<CMat> {
    let n = require_square(a)?;
    let sp = SparseColumns::new(a);
    let sparse = sp.nnz() * 8 < n * n;
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=(4 * n + 60) {
        let next = if sparse { sp.mul(&term) } else { a * &term };
        term = next / c(k as f64, 0.0);
        let size = max_abs(&term);
        sum += &term;
        if size == 0.0 || size < 1e-18 * max_abs(&sum) {
            return Ok(sum);
        }
    }
    Err(Error::Numerical("exponential series did not converge".into()))
}

/// exp(A) v by the power series, for nilpotent A.
pub fn exp_series_apply(a: &CMat, v: &CVec) -> Result<CVec> {
    let sp = SparseColumns::new(a);
    let mut sum = v.clone();
    let mut term = v.clone();
    for k in 1..=(4 * v.len() + 60) {
        term = sp.mul_vec(&term) / c(k as f64, 0.0);
        let size = term.camax();
        sum += &term;
        if size == 0.0 || size < 1e-18 * sum.camax() {
            return Ok(sum);
        }
    }
    Err(Error::Numerical("exponential series did not converge".into()))
}

/// Polar decomposition A = U|A|.
#[derive(Debug, Clone)]
pub struct Polar {
    /// Partial isometry with initial space (Ker A)^perp.
    pub isometry: CMat,
    /// |A| = (A*A)^{1/2}.
    pub positive: CMat,
    pub rank: usize,
}

pub fn polar_decompose(a: &CMat) -> Result<Polar> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(Polar {
            isometry: CMat::zeros(0, 0),
            positive: CMat::zeros(0, 0),
            rank: 0,
        });
    }
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    let sigma = &svd.singular_values;
    let smax = sigma.max();
    let threshold = tol::KERNEL_REL * smax;
    let mut isometry = CMat::zeros(n, n);
    let mut positive = CMat::zeros(n, n);
    let mut rank = 0;
    for k in 0..n {
        let vk = v_t.row(k).adjoint();
        let outer_v = &vk * vk.adjoint();
        positive += outer_v * c(sigma[k], 0.0);
        if sigma[k] > threshold {
            rank += 1;
            isometry += u.column(k) * vk.adjoint();
        }
    }
    Ok(Polar {
        isometry,
        positive: hermitian_part(&positive),
        rank,
    })
}

#[derive(Debug, Clone)]
pub struct RealPolar {
    pub isometry: RMat,
    pub positive: RMat,
    pub rank: usize,
}

pub fn polar_decompose_real(a: &RMat) -> Result<RealPolar> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NonSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    let sigma = &svd.singular_values;
    let threshold = tol::KERNEL_REL * sigma.max();
    let mut isometry = RMat::zeros(n, n);
    let mut positive = RMat::zeros(n, n);
    let mut rank = 0;
    for k in 0..n {
        let vk = v_t.row(k).transpose();
        positive += &vk * vk.transpose() * sigma[k];
        if sigma[k] > threshold {
            rank += 1;
            isometry += u.column(k) * vk.transpose();
        }
    }
    Ok(RealPolar {
        isometry,
        positive: (&positive + positive.transpose()) * 0.5,
        rank,
    })
}

/// Rank decision with the ambiguous band reported rather than hidden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Some singular value fell strictly inside the gray band.
    pub gray_zone: bool,
}

fn classify(sigma: &[f64], rel: f64) -> RankInfo {
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return RankInfo {
            rank: 0,
            gray_zone: false,
        };
    }
    let rank = sigma.iter().filter(|&&s| s > rel * smax).count();
    let gray_zone = sigma
        .iter()
        .any(|&s| s > tol::GRAY_LOW * smax && s < tol::GRAY_HIGH * smax);
    RankInfo { rank, gray_zone }
}

/// Orthonormal bases of the column space and of the null space of a real matrix.
pub fn real_range_and_kernel(a: &RMat, rel: f64) -> Result<(RMat, RMat, RankInfo)> {
    let (m, n) = a.shape();
    let size = m.max(n);
    if size == 0 {
        return Ok((
            RMat::zeros(m, 0),
            RMat::zeros(n, 0),
            RankInfo {
                rank: 0,
                gray_zone: false,
            },
        ));
    }
    // Pad to square so the thin SVD returns complete bases.
    let mut padded = RMat::zeros(size, size);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let info = classify(&sigma, rel);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..size).filter(|&k| smax > 0.0 && sigma[k] > rel * smax).collect();
    let drop: Vec<usize> = (0..size).filter(|k| !keep.contains(k)).collect();
    let mut range = RMat::zeros(m, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        range.set_column(j, &u.column(k).rows(0, m));
    }
    let mut kernel = RMat::zeros(n, 0);
    let mut cols = Vec::new();
    for &k in &drop {
        let v = v_t.row(k).transpose();
        cols.push(v.rows(0, n).into_owned());
    }
    if !cols.is_empty() {
        // Padding can leak components; re-orthonormalize inside R^n.
        let stacked = RMat::from_columns(&cols);
        let (q, _, _) = real_orthonormalize(&stacked, rel)?;
        kernel = q;
    }
    Ok((range, kernel, info))
}

/// Orthonormal basis of the column span of a real matrix.
pub fn real_orthonormalize(a: &RMat, rel: f64) -> Result<(RMat, usize, bool)> {
    let (m, n) = a.shape();
    if n == 0 || m == 0 {
        return Ok((RMat::zeros(m, 0), 0, false));
    }
    let svd = if m >= n {
        a.clone().try_svd(true, false, f64::EPSILON, 0)
    } else {
        let mut padded = RMat::zeros(m, m.max(n));
        padded.view_mut((0, 0), (m, n)).copy_from(a);
        let mut sq = RMat::zeros(m.max(n), m.max(n));
        sq.view_mut((0, 0), (m, n)).copy_from(a);
        sq.try_svd(true, false, f64::EPSILON, 0)
    }
    .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.expect("requested u");
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let info = classify(&sigma, rel);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sigma.len()).filter(|&k| smax > 0.0 && sigma[k] > rel * smax).collect();
    let mut q = RMat::zeros(m, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        q.set_column(j, &u.column(k).rows(0, m));
    }
    Ok((q, info.rank, info.gray_zone))
}

/// Orthonormal basis (columns) of the null space of a complex matrix, with
/// rank threshold `rel` relative to the largest singular value.
pub fn complex_kernel(a: &CMat, rel: f64) -> Result<(CMat, RankInfo)> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok((CMat::zeros(0, 0), RankInfo { rank: 0, gray_zone: false }));
    }
    // Reduce tall systems to an n x n triangular factor first.
    let r = if m > n {
        a.clone().qr().r()
    } else {
        let mut padded = CMat::zeros(n, n);
        padded.view_mut((0, 0), (m, n)).copy_from(a);
        padded
    };
    let mut sq = CMat::zeros(n, n);
    let rr = r.nrows().min(n);
    sq.view_mut((0, 0), (rr, n)).copy_from(&r.rows(0, rr));
    let svd = sq
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let v_t = svd.v_t.expect("requested v_t");
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let info = classify(&sigma, rel);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let drop: Vec<usize> = (0..n).filter(|&k| !(smax > 0.0 && sigma[k] > rel * smax)).collect();
    let mut kernel = CMat::zeros(n, drop.len());
    for (j, &k) in drop.iter().enumerate() {
        kernel.set_column(j, &v_t.row(k).adjoint());
    }
    Ok((kernel, info))
}

/// Orthonormal basis of the column span of a complex matrix.
pub fn complex_orthonormalize(a: &CMat, rel: f64) -> Result<(CMat, RankInfo)> {
    let (m, n) = a.shape();
    if n == 0 || m == 0 {
        return Ok((CMat::zeros(m, 0), RankInfo { rank: 0, gray_zone: false }));
    }
    let size = m.max(n);
    let mut sq = CMat::zeros(size, size);
    sq.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = sq
        .try_svd(true, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.expect("requested u");
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let info = classify(&sigma, rel);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..size).filter(|&k| smax > 0.0 && sigma[k] > rel * smax).collect();
    let mut q = CMat::zeros(m, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        q.set_column(j, &u.column(k).rows(0, m));
    }
    Ok((q, info))
}

/// Eigenvalues of a Hermitian matrix. The matrix is split into the connected
/// components of its sparsity graph first, and real components go through the
/// real symmetric solver.
pub fn hermitian_spectrum(a: &CMat) -> Result<Vec<f64>> {
    let n = require_square(a)?;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && a[(i, j)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut spectrum = Vec::with_capacity(n);
    for idx in groups.values() {
        let m = idx.len();
        let sub = CMat::from_fn(m, m, |i, j| a[(idx[i], idx[j])]);
        if sub.iter().all(|x| x.im == 0.0) {
            let re = sub.map(|x| x.re);
            let (vals, _) = eigh_real(&re)?;
            spectrum.extend(vals);
        } else {
            let (vals, _) = eigh(&sub)?;
            spectrum.extend(vals);
        }
    }
    spectrum.sort_by(f64::total_cmp);
    Ok(spectrum)
}

/// Complex vector w as real coordinates (Re w, Im w).
pub fn complex_to_real(w: &CVec) -> RVec {
    let d = w.len();
    RVec::from_fn(2 * d, |k, _| if k < d { w[k].re } else { w[k - d].im })
}

pub fn real_to_complex(x: &RVec) -> CVec {
    let d = x.len() / 2;
    CVec::from_fn(d, |k, _| c(x[k], x[k + d]))
}

/// Multiplication by i on C^d written on R^{2d}.
pub fn real_i(d: usize) -> RMat {
    let mut j = RMat::zeros(2 * d, 2 * d);
    for k in 0..d {
        j[(k, k + d)] = -1.0;
        j[(k + d, k)] = 1.0;
    }
    j
}

/// A pairing of {0, .., 2m-1}: `map[2j]` is paired with `map[2j+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub m: usize,
    pub map: Vec<usize>,
    /// Sign of `map` as a permutation.
    pub sign: i8,
}

impl Pairing {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.chunks(2).map(|p| (p[0], p[1]))
    }

    pub fn is_valid(&self) -> bool {
        if self.map.len() != 2 * self.m {
            return false;
        }
        let mut seen = vec![false; 2 * self.m];
        for &x in &self.map {
            if x >= 2 * self.m || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        let firsts_increase = self.map.chunks(2).zip(self.map.chunks(2).skip(1)).all(|(a, b)| a[0] < b[0]);
        firsts_increase && self.map.chunks(2).all(|p| p[0] < p[1])
    }
}

pub fn permutation_sign(p: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All (2m-1)!! pairings. m = 0 gives the single empty pairing.
pub fn enumerate_pairings(m: usize) -> Vec<Pairing> {
    fn rec(rest: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rest.remove(0);
        for k in 0..rest.len() {
            let partner = rest.remove(k);
            acc.push(first);
            acc.push(partner);
            rec(rest, acc, out);
            acc.truncate(acc.len() - 2);
            rest.insert(k, partner);
        }
        rest.insert(0, first);
    }
    let mut out = Vec::new();
    rec(&mut (0..2 * m).collect(), &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|map| Pairing {
            m,
            sign: permutation_sign(&map),
            map,
        })
        .collect()
}

pub fn double_factorial(n: i64) -> u64 {
    if n <= 0 {
        1
    } else {
        (n as u64) * double_factorial(n - 2)
    }
}
