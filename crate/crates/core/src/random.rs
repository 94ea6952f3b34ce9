//! Seeded random matrices for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMat, CVec, RMat, C64};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(r: &mut impl Rng) -> f64 {
    r.sample(StandardNormal)
}

pub fn complex_normal(r: &mut impl Rng) -> C64 {
    c(normal(r), normal(r)) / std::f64::consts::SQRT_2
}

pub fn complex_vector(r: &mut impl Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| complex_normal(r))
}

pub fn unit_vector(r: &mut impl Rng, n: usize) -> CVec {
    let v = complex_vector(r, n);
    let norm = v.norm();
    v / c(norm, 0.0)
}

pub fn complex_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(r))
}

pub fn real_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> RMat {
    RMat::from_fn(rows, cols, |_, _| normal(r))
}

pub fn hermitian(r: &mut impl Rng, n: usize) -> CMat {
    let a = complex_matrix(r, n, n);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

pub fn symmetric(r: &mut impl Rng, n: usize) -> CMat {
    let a = complex_matrix(r, n, n);
    (&a + a.transpose()) * c(0.5, 0.0)
}

pub fn antisymmetric(r: &mut impl Rng, n: usize) -> CMat {
    let a = complex_matrix(r, n, n);
    (&a - a.transpose()) * c(0.5, 0.0)
}

/// Rescale so that the operator norm equals `norm`.
pub fn with_norm(a: CMat, norm: f64) -> CMat {
    let current = crate::linalg::op_norm(&a);
    if current == 0.0 {
        return a;
    }
    a * c(norm / current, 0.0)
}

/// Haar unitary via QR with the phase fix.
pub fn unitary(r: &mut impl Rng, n: usize) -> CMat {
    let qr = complex_matrix(r, n, n).qr();
    let (mut q, rr) = qr.unpack();
    for k in 0..n {
        let d = rr[(k, k)];
        let phase = if d.norm() == 0.0 { c(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Haar orthogonal matrix.
pub fn orthogonal(r: &mut impl Rng, n: usize) -> RMat {
    let qr = real_matrix(r, n, n).qr();
    let (mut q, rr) = qr.unpack();
    for k in 0..n {
        if rr[(k, k)] < 0.0 {
            for i in 0..n {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    q
}

/// Haar element of SO(n).
pub fn special_orthogonal(r: &mut impl Rng, n: usize) -> RMat {
    let mut q = orthogonal(r, n);
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// Hermitian matrix with spectrum drawn uniformly from [lo, hi].
pub fn hermitian_with_spectrum(r: &mut impl Rng, n: usize, lo: f64, hi: f64) -> CMat {
    let u = unitary(r, n);
    let d = CMat::from_diagonal(&CVec::from_fn(n, |_, _| c(r.random_range(lo..=hi), 0.0)));
    let m = &u * d * u.adjoint();
    (&m + m.adjoint()) * c(0.5, 0.0)
}
