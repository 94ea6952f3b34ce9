use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("Fock space dimension {0} exceeds the guard of 1e6")]
    DimensionOverflow(u128),
    #[error("statistics mismatch: {0}")]
    StatisticsMismatch(String),
    #[error("target cutoff {target} is below the required {required}")]
    CutoffInsufficient { target: usize, required: usize },
    #[error("kernel symmetry violated by {0:e}")]
    SymmetryViolation(f64),
    #[error("bosonic kernel has norm {0} >= 1")]
    NormTooLarge(f64),
    #[error("p block has a kernel (smallest singular value {0:e})")]
    FermiDegenerate(f64),
    #[error("basis is not orthonormal (defect {0:e})")]
    NonOrthonormalBasis(f64),
    #[error("antisymmetric form is degenerate")]
    DegenerateOmega,
    #[error("symmetric form is not positive definite")]
    NonPositiveForm,
    #[error("covariance violates the Cauchy-Schwarz bound by {0:e}")]
    CauchySchwarzViolation(f64),
    #[error("kernel of the antisymmetric part has odd dimension {0}")]
    OddKernel(usize),
    #[error("spectral condition violated: {0}")]
    KernelViolation(String),
    #[error("operators do not commute (defect {0:e})")]
    CommutationViolation(f64),
    #[error("subspace is not in general position: {0}")]
    GeneralPositionViolated(String),
    #[error("dimension {0} exceeds the guard {1}")]
    DimensionGuard(usize, usize),
    #[error("model has no density parameter")]
    MissingGamma,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}
