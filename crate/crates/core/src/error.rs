use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("entry buffer has {found} values, expected {expected}")]
    EntryCount { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("columns are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the zero matrix is not admissible (A must be nonzero and n >= 2)")]
    ZeroMatrix,

    #[error("matrix of order {n} is not admissible (A must be nonzero and n >= 2)")]
    TooSmall { n: usize },

    #[error("matrix is not half-radial (relative gap |‖A‖ - 2r(A)|/‖A‖ = {gap:.3e})")]
    NotHalfRadial { gap: f64 },

    #[error("vector is not in the maximum right singular subspace (residual {residual:.3e})")]
    NotInVmax { residual: f64 },

    #[error("polynomial has no coefficients")]
    EmptyPolynomial,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("‖A^{k}‖ / r(A)^{k} = {ratio:.12} is not 2 within tolerance")]
    NotExtremal { k: usize, ratio: f64 },

    #[error("Crabb chain did not materialize; measured norm profile {profile:?}")]
    CrabbStructure { profile: Vec<f64> },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}
