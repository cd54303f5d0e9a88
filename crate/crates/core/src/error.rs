//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure conditions surfaced by the numerical kernels and the
/// group-level operations built on top of them.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A square matrix was required.
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    /// Commutator residual of the input exceeded the normality tolerance.
    #[error("matrix is not normal: commutator residual {residual:.3e}")]
    NotNormal { residual: f64 },

    /// Eigenvalue iteration exhausted its iteration budget.
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    /// Symmetric part of the input exceeded the skewness tolerance.
    #[error("matrix is not skew-symmetric: residual {residual:.3e} > tol {tol:.3e}")]
    NotSkew { residual: f64, tol: f64 },

    /// Operation defined only for a specific dimension.
    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    /// Two operands must share a dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Rotation angle fell inside the guard band around pi where the
    /// requested operation is not well defined.
    #[error("rotation angle within {guard:.3e} of pi")]
    AnglePi { guard: f64 },

    /// Invalid dimension or scale for a sampler.
    #[error("bad dimension: {msg}")]
    BadDimension { msg: String },

    /// Orthogonality residual exceeded tolerance.
    #[error("matrix is not orthogonal: residual {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    /// Orthogonal matrix with determinant -1 where a rotation was required.
    #[error("determinant is negative: {det:.6e}")]
    NegativeDeterminant { det: f64 },

    /// Scalar-symbol argument outside the principal angle range.
    #[error("angle {t:.6e} outside (-pi, pi]")]
    OutOfDomain { t: f64 },

    /// Degenerate range supplied to a grid-based scan.
    #[error("degenerate range: {msg}")]
    DegenerateRange { msg: String },

    /// Malformed norm or form specification.
    #[error("invalid specification: {msg}")]
    SpecInvalid { msg: String },

    /// Sweep requested with too few samples.
    #[error("insufficient samples: need at least {need}, got {got}")]
    InsufficientSamples { need: usize, got: usize },

    /// Text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Non-finite entry encountered in a matrix.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}
