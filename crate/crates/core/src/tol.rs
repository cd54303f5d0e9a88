//! Central tolerance record.
//!
//! Every numerical threshold used by the kernels lives here so that a
//! tolerance is defined exactly once.  Functions consult [`DEFAULT`]
//! unless their signature takes an explicit override.

/// Numerical tolerances, mostly relative to a problem-size scale noted
/// on each field.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Normality gate for the eigensolver, relative to the squared
    /// Frobenius norm of the input.
    pub normality: f64,
    /// Eigenvalue clustering width, relative to `1 + ||M||_F`.
    pub eigen_cluster: f64,
    /// Skew-symmetry residual, relative to `1 + ||M||_F`.
    pub skew: f64,
    /// Youla reconstruction residual, relative to `1 + ||X||_F`.
    pub youla_residual: f64,
    /// Orthogonality residual of a rotation, scaled by the dimension.
    pub orthogonality: f64,
    /// Allowed deviation of a rotation determinant from +1.
    pub determinant: f64,
    /// Width of the band around angle pi inside which an eigenvalue is
    /// routed through the `log(-1) = i pi` convention.
    pub angle_pi_detect: f64,
    /// Angles below this are treated as zero when building a logarithm.
    pub angle_zero: f64,
    /// Guard band around pi for operations that refuse near-pi input.
    pub angle_pi_guard: f64,
    /// Membership slack used when sampling bisection-set members.
    pub membership_slack: f64,
}

/// Default tolerances for double precision at desk scale (n <= 16).
pub const DEFAULT: Tolerances = Tolerances {
    normality: 1e-8,
    eigen_cluster: 1e-9,
    skew: 1e-10,
    youla_residual: 1e-9,
    orthogonality: 1e-10,
    determinant: 1e-8,
    angle_pi_detect: 1e-9,
    angle_zero: 1e-12,
    angle_pi_guard: 1e-6,
    membership_slack: 1e-6,
};

impl Default for Tolerances {
    fn default() -> Self {
        DEFAULT
    }
}
