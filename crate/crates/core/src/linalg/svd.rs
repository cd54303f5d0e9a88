//! Singular values through the Gram matrix.

use super::{eig_normal, ComplexMatrix};
use crate::error::Result;

/// Singular values of `m` in descending order.
///
/// Computed as the square roots of the eigenvalues of the smaller of
/// `m* m` and `m m*`, which are Hermitian and therefore normal.  The
/// result has `min(rows, cols)` entries.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.require_finite()?;
    let gram = if m.rows() <= m.cols() {
        m.mul(&m.adjoint())
    } else {
        m.adjoint().mul(m)
    };
    let e = eig_normal(&gram)?;
    let mut sv: Vec<f64> = e
        .values
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}
