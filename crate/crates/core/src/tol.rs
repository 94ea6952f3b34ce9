//! Default tolerances. Every routine that compares against one of these also
//! takes an explicit override where it matters.

/// Identities that hold exactly in finite dimension.
pub const ALGEBRAIC: f64 = 1e-10;
/// Results that pass through an eigensolver.
pub const SPECTRAL: f64 = 1e-8;
/// Singular values below this fraction of the largest count as zero (polar parts).
pub const KERNEL_REL: f64 = 1e-12;
/// Rank threshold for real-subspace computations.
pub const RANK_REL: f64 = 1e-10;
/// Singular values strictly between these (relative) bounds are ambiguous.
pub const GRAY_LOW: f64 = 1e-12;
pub const GRAY_HIGH: f64 = 1e-8;
/// Symmetry check on two-particle kernels.
pub const KERNEL_SYMMETRY: f64 = 1e-12;
/// Smallest singular value of p below which an orthogonal map counts as j-degenerate.
pub const DEGENERATE_P: f64 = 1e-8;
/// Conditioning the degenerate path aims for before applying the Shale formula.
pub const NONDEGENERATE_TARGET: f64 = 0.2;
