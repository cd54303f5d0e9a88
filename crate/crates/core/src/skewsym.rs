//! Skew-symmetric matrices: validation, Youla block form, the
//! dimension-four tilde involution, and Baker-Campbell-Hausdorff
//! composition by series and by the numeric route.

use crate::error::{Error, Result};
use crate::linalg::{
    self, complete_orthonormal, ComplexMatrix, RealMatrix,
};
use crate::rotation;
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A validated skew-symmetric matrix.  The stored body is exactly
/// skew: construction symmetrizes the input to `(M - M^T) / 2` after
/// checking the residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    body: RealMatrix,
}

impl SkewMatrix {
    /// Validate with the default skewness tolerance.
    pub fn new(m: RealMatrix) -> Result<Self> {
        Self::with_tolerance(m, tol::DEFAULT.skew)
    }

    /// Validate with an explicit tolerance.
    pub fn with_tolerance(m: RealMatrix, tol: f64) -> Result<Self> {
        Ok(Self { body: assert_skew(&m, tol)? })
    }

    /// Zero matrix of order `n`.
    pub fn zero(n: usize) -> Self {
        Self { body: RealMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.body.rows()
    }

    pub fn body(&self) -> &RealMatrix {
        &self.body
    }

    pub fn into_body(self) -> RealMatrix {
        self.body
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.body.frobenius_norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { body: self.body.scale(s) }
    }

    pub fn complexify(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(&self.body)
    }
}

/// Check skewness and return the exactly skew body `(M - M^T) / 2`.
///
/// Errors with `NotSkew` when `||M + M^T||_F > tol * (1 + ||M||_F)`.
pub fn assert_skew(m: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    let n = m.require_square()?;
    m.require_finite()?;
    let residual = m.add(&m.transpose()).frobenius_norm();
    let bound = tol * (1.0 + m.frobenius_norm());
    if residual > bound {
        return Err(Error::NotSkew { residual, tol });
    }
    let mut body = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            body[(i, j)] = 0.5 * (m[(i, j)] - m[(j, i)]);
        }
    }
    Ok(body)
}

/// Youla form of a skew matrix: `x = q sigma q^T` with `q` orthogonal
/// and `sigma` the block diagonal of planar blocks `[[0, l], [-l, 0]]`
/// followed by zeros.
#[derive(Debug, Clone)]
pub struct YoulaForm {
    /// Orthogonal change of basis.
    pub q: RealMatrix,
    /// Block parameters in descending order, padded with zeros to
    /// `floor(n / 2)` entries.
    pub lambdas: Vec<f64>,
}

impl YoulaForm {
    /// The block-diagonal factor `sigma` of order `n`.
    pub fn block_diagonal(&self, n: usize) -> RealMatrix {
        let mut s = RealMatrix::zeros(n, n);
        for (k, l) in self.lambdas.iter().enumerate() {
            if 2 * k + 1 < n {
                s[(2 * k, 2 * k + 1)] = *l;
                s[(2 * k + 1, 2 * k)] = -*l;
            }
        }
        s
    }

    /// Reassemble `q sigma q^T`.
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.q.rows();
        let sigma = self.block_diagonal(n);
        self.q.mul(&sigma).mul(&self.q.transpose())
    }
}

/// Youla decomposition via the spectral route.
///
/// Eigenvalues of a real skew matrix are `+/- i l` pairs and zeros;
/// for each eigenvalue `i l` with `l > 0` and unit eigenvector `v`,
/// the columns `sqrt(2) Re v, sqrt(2) Im v` span a real invariant
/// plane carrying the block `[[0, l], [-l, 0]]`.  The plane columns
/// are re-orthonormalized and completed to a full orthogonal basis,
/// and each block sign is fixed so its upper entry is `+l`.
pub fn youla(x: &SkewMatrix) -> Result<YoulaForm> {
    let n = x.n();
    let eig = linalg::eig_normal(&x.complexify())?;
    let zero_width = tol::DEFAULT.eigen_cluster * (1.0 + x.frobenius_norm());

    let mut positive: Vec<(f64, usize)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, z)| z.im > zero_width)
        .map(|(j, z)| (z.im, j))
        .collect();
    positive.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    positive.truncate(n / 2);

    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(2 * positive.len());
    for (_, j) in &positive {
        let v = eig.vectors.column(*j);
        let sqrt2 = std::f64::consts::SQRT_2;
        cols.push(v.iter().map(|z| sqrt2 * z.re).collect());
        cols.push(v.iter().map(|z| sqrt2 * z.im).collect());
    }
    let mut q = complete_orthonormal(&cols, n)?;

    let mut lambdas: Vec<f64> = positive.iter().map(|(l, _)| *l).collect();
    lambdas.resize(n / 2, 0.0);

    // Fix each block orientation so the (2k, 2k+1) entry comes out +l.
    let b = q.transpose().mul(x.body()).mul(&q);
    for k in 0..positive.len() {
        if b[(2 * k, 2 * k + 1)] < 0.0 {
            let negated: Vec<f64> =
                q.column(2 * k + 1).iter().map(|v| -v).collect();
            q.set_column(2 * k + 1, &negated);
        }
    }
    Ok(YoulaForm { q, lambdas })
}

/// The dimension-four involution that swaps the two corner entries:
/// `(1, 4) <-> (2, 3)` and `(4, 1) <-> (3, 2)` in one-based indexing.
/// Preserves the eigenvalues of its argument.
pub fn tilde(x: &SkewMatrix) -> Result<SkewMatrix> {
    if x.n() != 4 {
        return Err(Error::WrongDimension { expected: 4, got: x.n() });
    }
    let mut b = x.body().clone();
    let a = b[(0, 3)];
    b[(0, 3)] = b[(1, 2)];
    b[(1, 2)] = a;
    let a = b[(3, 0)];
    b[(3, 0)] = b[(2, 1)];
    b[(2, 1)] = a;
    Ok(SkewMatrix { body: b })
}

/// Baker-Campbell-Hausdorff series truncated after the third-order
/// term:
/// `X + Y + (1/2)(XY - YX)
///  + (1/12)(X^2 Y + X Y^2 - 2 XYX + Y^2 X + Y X^2 - 2 YXY)`.
pub fn bch_series3(x: &SkewMatrix, y: &SkewMatrix) -> Result<SkewMatrix> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { left: x.n(), right: y.n() });
    }
    let (xb, yb) = (x.body(), y.body());
    let xy = xb.mul(yb);
    let yx = yb.mul(xb);
    let first = xb.add(yb);
    let second = xy.sub(&yx).scale(0.5);
    let third = xb
        .mul(&xy)
        .add(&xy.mul(yb))
        .sub(&xy.mul(xb).scale(2.0))
        .add(&yb.mul(&yx))
        .add(&yx.mul(xb))
        .sub(&yx.mul(yb).scale(2.0))
        .scale(1.0 / 12.0);
    let body = first.add(&second).add(&third);
    // Exact in exact arithmetic; symmetrize away the roundoff.
    SkewMatrix::new(body)
}

/// Baker-Campbell-Hausdorff by the numeric route:
/// `log(exp(X) exp(Y))`.
///
/// Errors with `AnglePi` when the product rotation has an angle within
/// the guard band of pi, where the logarithm branch is ambiguous.
pub fn bch_numeric(x: &SkewMatrix, y: &SkewMatrix) -> Result<SkewMatrix> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { left: x.n(), right: y.n() });
    }
    let guard = tol::DEFAULT.angle_pi_guard;
    let product = rotation::exp_skew(x).compose(&rotation::exp_skew(y))?;
    if rotation::max_rotation_angle(&product)? >= std::f64::consts::PI - guard {
        return Err(Error::AnglePi { guard });
    }
    rotation::log_so(&product)
}

/// Seeded random skew matrix: independent entries above the diagonal,
/// uniform on `[-scale, scale]`, filled row by row.
pub fn random_skew(n: usize, scale: f64, seed: u64) -> Result<SkewMatrix> {
    if n < 2 {
        return Err(Error::BadDimension {
            msg: format!("order must be at least 2, got {n}"),
        });
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::BadDimension {
            msg: format!("scale must be positive and finite, got {scale}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(-scale..=scale);
            body[(i, j)] = v;
            body[(j, i)] = -v;
        }
    }
    Ok(SkewMatrix { body })
}

/// Seeded random skew matrix rescaled, if necessary, so its spectral
/// norm (equivalently its largest rotation angle under the
/// exponential) does not exceed `cap`.
pub fn random_skew_spectral_capped(
    n: usize,
    scale: f64,
    cap: f64,
    seed: u64,
) -> Result<SkewMatrix> {
    let x = random_skew(n, scale, seed)?;
    let top = linalg::singular_values(&x.complexify())?[0];
    if top > cap {
        Ok(x.scale(cap / top))
    } else {
        Ok(x)
    }
}
