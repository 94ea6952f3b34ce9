//! Second quantization on finite Fock spaces.
//!
//! Bosonic spaces are truncated by total particle number, fermionic ones are
//! exact. On top of the Fock machinery sit Bogolubov implementers, quasi-free
//! covariance reduction, the doubled thermal representations with their
//! modular data, real-subspace lattices with numerical commutants, and
//! Pauli-Fierz Liouvilleans.

pub mod bogolubov;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod pauli_fierz;
pub mod quasifree;
pub mod random;
pub mod reps;
pub mod thermal;
pub mod tol;

pub use error::{Error, Result};
pub use fock::{FockSpace, Statistics};
pub use linalg::{CMat, CVec, ComplexMatrix, RMat, C64};
