//! Rotations: validation, the exponential from skew matrices, the
//! principal logarithm with a canonical branch at angle pi, and Haar
//! sampling.
//!
//! Angle conventions.  A rotation decomposes into planar blocks with
//! angles in `[0, pi]`.  The logarithm places each plane's angle in
//! that range; for the eigenvalue -1 the two-dimensional `-1`
//! eigenspace has no preferred orientation, so the logarithm picks the
//! orientation of the first orthonormal basis the solver produces and
//! assigns the angle `+pi`.  Both orientations exponentiate back to
//! the same rotation.

use crate::error::{Error, Result};
use crate::linalg::{self, orthonormal_span, ComplexMatrix, RealMatrix};
use crate::skewsym::{self, SkewMatrix};
use crate::tol::{self, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// A validated element of the special orthogonal group.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    body: RealMatrix,
}

impl Rotation {
    /// Validate with default tolerances.
    pub fn new(m: RealMatrix) -> Result<Self> {
        Self::with_tolerances(m, &tol::DEFAULT)
    }

    /// Validate with explicit tolerances.
    pub fn with_tolerances(m: RealMatrix, t: &Tolerances) -> Result<Self> {
        assert_so(&m, t)?;
        Ok(Self { body: m })
    }

    /// Wrap a product of validated rotations; checked only in debug
    /// builds since the group is closed under multiplication.
    fn from_group_op(body: RealMatrix) -> Self {
        debug_assert!(assert_so(&body, &tol::DEFAULT).is_ok());
        Self { body }
    }

    pub fn identity(n: usize) -> Self {
        Self { body: RealMatrix::identity(n) }
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

    pub fn complexify(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(&self.body)
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self::from_group_op(self.body.mul(&other.body)))
    }

    /// Group inverse, which is the transpose.
    pub fn inverse(&self) -> Self {
        Self { body: self.body.transpose() }
    }

    /// `self^-1 * other`, the relative rotation.
    pub fn inverse_times(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self::from_group_op(self.body.transpose().mul(&other.body)))
    }

    /// Integer power, with negative exponents through the inverse.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.n());
        for _ in 0..k.unsigned_abs() {
            acc = Self::from_group_op(acc.body.mul(&base.body));
        }
        acc
    }
}

/// Check orthogonality and orientation of a candidate rotation.
///
/// Errors with `NotOrthogonal` when `||M^T M - I||_F` exceeds the
/// orthogonality tolerance scaled by the dimension, and with
/// `NegativeDeterminant` when the determinant strays from +1 by more
/// than the determinant tolerance.
pub fn assert_so(m: &RealMatrix, t: &Tolerances) -> Result<()> {
    let n = m.require_square()?;
    m.require_finite()?;
    let gram = m.transpose().mul(m);
    let residual = gram.sub(&RealMatrix::identity(n)).frobenius_norm();
    if residual > t.orthogonality * n as f64 {
        return Err(Error::NotOrthogonal { residual });
    }
    let d = linalg::det(m)?;
    if (d - 1.0).abs() > t.determinant {
        return Err(Error::NegativeDeterminant { det: d });
    }
    Ok(())
}

/// Exponential of a skew matrix, computed through its Youla form:
/// each planar block with parameter `l` maps to the rotation
/// `[[cos l, sin l], [-sin l, cos l]]` of its plane.  Total: every
/// skew matrix exponentiates; if the spectral route fails the series
/// with scaling and squaring takes over.
pub fn exp_skew(x: &SkewMatrix) -> Rotation {
    let n = x.n();
    match skewsym::youla(x) {
        Ok(y) => {
            let mut block = RealMatrix::identity(n);
            for (k, l) in y.lambdas.iter().enumerate() {
                if 2 * k + 1 < n {
                    let (s, c) = l.sin_cos();
                    block[(2 * k, 2 * k)] = c;
                    block[(2 * k, 2 * k + 1)] = s;
                    block[(2 * k + 1, 2 * k)] = -s;
                    block[(2 * k + 1, 2 * k + 1)] = c;
                }
            }
            let body = y.q.mul(&block).mul(&y.q.transpose());
            Rotation::from_group_op(body)
        }
        Err(_) => Rotation::from_group_op(exp_series(x.body())),
    }
}

/// Matrix exponential by scaled Taylor series; fallback path only.
fn exp_series(x: &RealMatrix) -> RealMatrix {
    let n = x.rows();
    let norm = x.frobenius_norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = x.scale(0.5f64.powi(squarings as i32));
    let mut sum = RealMatrix::identity(n);
    let mut term = RealMatrix::identity(n);
    for k in 1..=40 {
        term = term.mul(&scaled).scale(1.0 / k as f64);
        sum = sum.add(&term);
        if term.frobenius_norm() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// One-parameter subgroup `t -> exp(t X)`.
pub fn one_param(x: &SkewMatrix, t: f64) -> Rotation {
    exp_skew(&x.scale(t))
}

/// Principal logarithm of a rotation.
///
/// Plane angles land in `[0, pi]`; eigenvalues at -1 are grouped into
/// planes of the `-1` eigenspace and assigned the angle `+pi` with the
/// canonical orientation described at the module level.
pub fn log_so(a: &Rotation) -> Result<SkewMatrix> {
    let n = a.n();
    let eig = linalg::eig_normal(&a.complexify())?;
    let pi_band = tol::DEFAULT.angle_pi_detect;
    let zero_band = tol::DEFAULT.angle_zero;

    let mut planes: Vec<(f64, usize)> = Vec::new();
    let mut pi_cluster: Vec<(f64, usize)> = Vec::new();
    for (j, z) in eig.values.iter().enumerate() {
        let theta = z.arg();
        if theta.abs() <= zero_band {
            continue;
        }
        if theta.abs() >= PI - pi_band {
            pi_cluster.push((theta, j));
        } else if theta > 0.0 {
            planes.push((theta, j));
        }
    }

    // The -1 eigenspace has even dimension; an odd cluster means a
    // conjugate pair straddled the band edge, so rebalance it.
    if pi_cluster.len() % 2 == 1 {
        let straddler = planes
            .iter()
            .enumerate()
            .filter(|(_, (t, _))| *t >= PI - 2.0 * pi_band)
            .max_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
            .map(|(i, _)| i);
        if let Some(i) = straddler {
            pi_cluster.push(planes.remove(i));
        } else {
            let (i, _) = pi_cluster
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    a.1 .0.abs().partial_cmp(&b.1 .0.abs()).unwrap()
                })
                .unwrap();
            let (theta, j) = pi_cluster.remove(i);
            if theta > 0.0 {
                planes.push((theta, j));
            }
        }
    }

    planes.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let mut body = RealMatrix::zeros(n, n);
    let sqrt2 = std::f64::consts::SQRT_2;
    for (theta, j) in &planes {
        let v = eig.vectors.column(*j);
        let mut u: Vec<f64> = v.iter().map(|z| sqrt2 * z.re).collect();
        let mut w: Vec<f64> = v.iter().map(|z| sqrt2 * z.im).collect();
        orthonormalize_pair(&mut u, &mut w);
        add_area_form(&mut body, *theta, &u, &w);
    }

    if !pi_cluster.is_empty() {
        // Orthonormal real basis of the -1 eigenspace, from its
        // spectral projector.
        let m = pi_cluster.len();
        let mut projector = RealMatrix::zeros(n, n);
        for (_, j) in &pi_cluster {
            let v = eig.vectors.column(*j);
            for r in 0..n {
                for c in 0..n {
                    projector[(r, c)] += (v[r] * v[c].conj()).re;
                }
            }
        }
        let candidates: Vec<Vec<f64>> =
            (0..n).map(|c| projector.column(c)).collect();
        let basis = orthonormal_span(&candidates, m)?;
        for pair in basis.chunks_exact(2) {
            add_area_form(&mut body, PI, &pair[0], &pair[1]);
        }
    }

    SkewMatrix::new(body)
}

/// In-plane Gram-Schmidt of the plane pair; keeps orientation.
fn orthonormalize_pair(u: &mut [f64], w: &mut [f64]) {
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    debug_assert!(nu > 0.5);
    for x in u.iter_mut() {
        *x /= nu;
    }
    let d: f64 = u.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
    for (wi, ui) in w.iter_mut().zip(u.iter()) {
        *wi -= d * ui;
    }
    let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    debug_assert!(nw > 0.5);
    for x in w.iter_mut() {
        *x /= nw;
    }
}

/// Accumulate `theta * (u w^T - w u^T)`.
fn add_area_form(body: &mut RealMatrix, theta: f64, u: &[f64], w: &[f64]) {
    let n = u.len();
    for r in 0..n {
        for c in 0..n {
            body[(r, c)] += theta * (u[r] * w[c] - w[r] * u[c]);
        }
    }
}

/// Largest rotation angle of `a`, in `[0, pi]`.
pub fn max_rotation_angle(a: &Rotation) -> Result<f64> {
    let eig = linalg::eig_normal(&a.complexify())?;
    Ok(eig
        .values
        .iter()
        .map(|z| z.arg().abs())
        .fold(0.0f64, f64::max))
}

/// Haar-distributed rotation: QR of a Gaussian matrix with the
/// nonnegative-diagonal convention, with one column negated when the
/// orthogonal factor lands in the reflection component.
pub fn random_so(n: usize, seed: u64) -> Result<Rotation> {
    if n < 2 {
        return Err(Error::BadDimension {
            msg: format!("order must be at least 2, got {n}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = RealMatrix::from_fn(n, n, |_, _| rng.sample(rand_distr::StandardNormal));
    let mut q = linalg::qr(&g)?.q;
    if linalg::det(&q)? < 0.0 {
        let negated: Vec<f64> = q.column(n - 1).iter().map(|v| -v).collect();
        q.set_column(n - 1, &negated);
    }
    Rotation::new(q)
}
