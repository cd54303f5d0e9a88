//! Eigendecomposition of normal matrices.
//!
//! The solver reduces the input to Hessenberg form with complex
//! Householder reflections, then drives it to triangular form with an
//! explicitly shifted QR iteration (Wilkinson shifts, complex Givens
//! rotations), accumulating the unitary similarity.  For a normal
//! matrix the resulting triangular factor is diagonal, so the
//! accumulated unitary holds an orthonormal eigenbasis; this handles
//! clustered eigenvalues without any separate eigenvector solve.

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex64;

/// Eigenvalues with a matching orthonormal eigenbasis; column `j` of
/// `vectors` belongs to `values[j]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a normal matrix.
///
/// Errors with `NotNormal` if the commutator residual
/// `||M M* - M* M||_F` exceeds `1e-8 * ||M||_F^2`, and with
/// `NoConvergence` if the QR iteration exhausts its budget.
pub fn eig_normal(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = m.require_square()?;
    m.require_finite()?;

    let norm = m.frobenius_norm();
    let commutator = m.mul(&m.adjoint()).sub(&m.adjoint().mul(m));
    let residual = commutator.frobenius_norm();
    if residual > tol::DEFAULT.normality * norm * norm {
        return Err(Error::NotNormal { residual });
    }

    let mut h = m.clone();
    let mut u = ComplexMatrix::identity(n);
    if n > 1 {
        hessenberg(&mut h, &mut u);
        schur(&mut h, &mut u, norm)?;
    }

    let values = (0..n).map(|i| h[(i, i)]).collect();
    normalize_phases(&mut u);
    Ok(EigenDecomposition { values, vectors: u })
}

/// In-place Hessenberg reduction `h <- p* h p`, accumulating `u <- u p`.
fn hessenberg(h: &mut ComplexMatrix, u: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let mut norm_x = 0.0;
        for i in k + 1..n {
            norm_x += h[(i, k)].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::ONE };
        let alpha = -phase * norm_x;
        let mut v = vec![Complex64::ZERO; n - k - 1];
        v[0] = x0 - alpha;
        for i in k + 2..n {
            v[i - k - 1] = h[(i, k)];
        }
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // h <- (I - 2 v v*) h on rows k+1..n.
        for j in k..n {
            let mut s = Complex64::ZERO;
            for i in k + 1..n {
                s += v[i - k - 1].conj() * h[(i, j)];
            }
            for i in k + 1..n {
                let d = 2.0 * s * v[i - k - 1];
                h[(i, j)] -= d;
            }
        }
        // h <- h (I - 2 v v*); the reflector is Hermitian.
        for r in 0..n {
            let mut s = Complex64::ZERO;
            for i in k + 1..n {
                s += h[(r, i)] * v[i - k - 1];
            }
            for i in k + 1..n {
                let d = 2.0 * s * v[i - k - 1].conj();
                h[(r, i)] -= d;
            }
        }
        // u <- u (I - 2 v v*).
        for r in 0..n {
            let mut s = Complex64::ZERO;
            for i in k + 1..n {
                s += u[(r, i)] * v[i - k - 1];
            }
            for i in k + 1..n {
                let d = 2.0 * s * v[i - k - 1].conj();
                u[(r, i)] -= d;
            }
        }
    }
}

/// Shifted QR iteration on an upper Hessenberg matrix, accumulating
/// the similarity into `u`.  Drives `h` to upper triangular form.
fn schur(h: &mut ComplexMatrix, u: &mut ComplexMatrix, norm: f64) -> Result<()> {
    let n = h.rows();
    let eps = f64::EPSILON;
    let max_total = 60 * n + 60;
    let mut total = 0usize;
    let mut stagnant = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        // Scan for a negligible subdiagonal; the active block is l..=hi.
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s > 0.0 { s } else { norm.max(1.0) };
            if h[(l, l - 1)].norm() <= 4.0 * eps * s {
                h[(l, l - 1)] = Complex64::ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            stagnant = 0;
            continue;
        }

        total += 1;
        stagnant += 1;
        if total > max_total {
            return Err(Error::NoConvergence);
        }
        let shift = if stagnant.is_multiple_of(12) {
            // Exceptional shift, with an imaginary part so it can also
            // break stalls on rotation-like blocks.
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * Complex64::new(0.75, 0.4375)
        } else {
            wilkinson_shift(h, hi)
        };
        qr_step(h, u, l, hi, shift);
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to the corner entry.
///
/// The discriminant is formed as `((a - d) / 2)^2 + b c` rather than
/// `tr^2 - 4 det`; the latter cancels catastrophically on near-scalar
/// rotation blocks `[[x, s], [-s, x]]` and loses the `+/- i s` part of
/// the pair, which stalls the iteration (no real shift can split a
/// block from that commutative field).
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let p = 0.5 * (a - d);
    let disc = (p * p + b * c).sqrt();
    if (p + disc).norm() <= (p - disc).norm() {
        d + p + disc
    } else {
        d + p - disc
    }
}

/// One explicit-shift QR step on the window `l..=hi`.
fn qr_step(h: &mut ComplexMatrix, u: &mut ComplexMatrix, l: usize, hi: usize, shift: Complex64) {
    let n = h.rows();
    for i in l..=hi {
        h[(i, i)] -= shift;
    }
    // Row rotations triangularize the shifted window.
    let mut rotations = Vec::with_capacity(hi - l);
    for i in l..hi {
        let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
        for j in i..n {
            let a = h[(i, j)];
            let b = h[(i + 1, j)];
            h[(i, j)] = c * a + s * b;
            h[(i + 1, j)] = -s.conj() * a + c * b;
        }
        h[(i + 1, i)] = Complex64::ZERO;
        rotations.push((c, s));
    }
    // Right-multiply by the adjoints, restoring Hessenberg form.
    for (idx, i) in (l..hi).enumerate() {
        let (c, s) = rotations[idx];
        for r in 0..=i + 1 {
            let a = h[(r, i)];
            let b = h[(r, i + 1)];
            h[(r, i)] = c * a + s.conj() * b;
            h[(r, i + 1)] = -s * a + c * b;
        }
        for r in 0..n {
            let a = u[(r, i)];
            let b = u[(r, i + 1)];
            u[(r, i)] = c * a + s.conj() * b;
            u[(r, i + 1)] = -s * a + c * b;
        }
    }
    for i in l..=hi {
        h[(i, i)] += shift;
    }
}

/// Complex Givens rotation `g = [[c, s], [-conj(s), c]]` with real `c`
/// such that `g * (f, g)^T = (r, 0)^T`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::ZERO);
    }
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / d;
    let s = (f / fn_) * g.conj() / d;
    (c, s)
}

/// Rotate each column so its largest-modulus entry (first such index)
/// is real and positive.  Makes the eigenbasis deterministic up to the
/// ordering produced by the iteration.
fn normalize_phases(u: &mut ComplexMatrix) {
    let n = u.rows();
    for j in 0..n {
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for i in 0..n {
            let v = u[(i, j)].norm();
            if v > best_norm {
                best_norm = v;
                best = i;
            }
        }
        if best_norm > 0.0 {
            let phase = u[(best, j)] / best_norm;
            let correction = phase.conj();
            for i in 0..n {
                let v = u[(i, j)] * correction;
                u[(i, j)] = v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;

    fn complexify(m: &RealMatrix) -> ComplexMatrix {
        ComplexMatrix::from_real(m)
    }

    fn sorted_values(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            (a.im, a.re)
                .partial_cmp(&(b.im, b.re))
                .unwrap()
        });
        v
    }

    fn check_decomposition(m: &ComplexMatrix, e: &EigenDecomposition, tol: f64) {
        let n = m.rows();
        // Residual per pair.
        for j in 0..n {
            let v = e.vectors.column(j);
            let mut r = 0.0f64;
            for i in 0..n {
                let mut mv = Complex64::ZERO;
                for k in 0..n {
                    mv += m[(i, k)] * v[k];
                }
                r = r.max((mv - e.values[j] * v[i]).norm());
            }
            assert!(r <= tol, "residual {r:.3e} for eigenvalue {}", e.values[j]);
        }
        // Orthonormality of the basis.
        let vtv = e.vectors.adjoint().mul(&e.vectors);
        let dev = vtv.sub(&ComplexMatrix::identity(n)).max_abs();
        assert!(dev <= 1e-12, "basis orthonormality deviation {dev:.3e}");
    }

    #[test]
    fn diagonal_input_is_immediate() {
        let mut m = ComplexMatrix::zeros(3, 3);
        m[(0, 0)] = Complex64::new(2.0, 1.0);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        m[(2, 2)] = Complex64::new(0.0, 3.0);
        let e = eig_normal(&m).unwrap();
        let got = sorted_values(e.values.clone());
        let want = sorted_values(vec![m[(0, 0)], m[(1, 1)], m[(2, 2)]]);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-14);
        }
        check_decomposition(&m, &e, 1e-13);
    }

    #[test]
    fn planar_spin_has_unit_imaginary_pair() {
        let x = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let m = complexify(&x);
        let e = eig_normal(&m).unwrap();
        let got = sorted_values(e.values.clone());
        assert!((got[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((got[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        check_decomposition(&m, &e, 1e-12);
    }

    #[test]
    fn real_symmetric_diagonal() {
        let m = complexify(
            &RealMatrix::from_rows(&[vec![5.0, 0.0], vec![0.0, -2.0]]).unwrap(),
        );
        let e = eig_normal(&m).unwrap();
        let got = sorted_values(e.values.clone());
        assert!((got[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-13);
        assert!((got[1] - Complex64::new(5.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn planar_rotation_eigenvalues_on_unit_circle() {
        let t = std::f64::consts::PI / 3.0;
        let m = complexify(
            &RealMatrix::from_rows(&[
                vec![t.cos(), t.sin(), 0.0],
                vec![-t.sin(), t.cos(), 0.0],
                vec![0.0, 0.0, 1.0],
            ])
            .unwrap(),
        );
        let e = eig_normal(&m).unwrap();
        let got = sorted_values(e.values.clone());
        let want = sorted_values(vec![
            Complex64::from_polar(1.0, -t),
            Complex64::from_polar(1.0, t),
            Complex64::ONE,
        ]);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12);
        }
        check_decomposition(&m, &e, 1e-12);
    }

    #[test]
    fn constructed_normal_matrix_recovers_phases() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 8;
        let g = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let q = crate::linalg::qr(&g).unwrap().q;
        let phases: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mut d = ComplexMatrix::zeros(n, n);
        for (k, t) in phases.iter().enumerate() {
            d[(k, k)] = Complex64::from_polar(1.0, *t);
        }
        let qc = complexify(&q);
        let m = qc.mul(&d).mul(&qc.adjoint());
        let e = eig_normal(&m).unwrap();
        let got = sorted_values(e.values.clone());
        let want = sorted_values(
            phases.iter().map(|t| Complex64::from_polar(1.0, *t)).collect(),
        );
        for (gv, wv) in got.iter().zip(&want) {
            assert!((gv - wv).norm() < 1e-10, "{gv} vs {wv}");
        }
        check_decomposition(&m, &e, 1e-10 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn repeated_eigenvalues_keep_orthonormal_basis() {
        // Two identical spin blocks: eigenvalues +/-i each twice.
        let x = RealMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0, 0.0],
        ])
        .unwrap();
        let m = complexify(&x);
        let e = eig_normal(&m).unwrap();
        check_decomposition(&m, &e, 1e-12);
        let mut pos = 0;
        for v in &e.values {
            if v.im > 0.5 {
                pos += 1;
            }
        }
        assert_eq!(pos, 2);
    }

    #[test]
    fn non_normal_input_rejected() {
        let m = complexify(
            &RealMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap(),
        );
        match eig_normal(&m) {
            Err(crate::error::Error::NotNormal { residual }) => {
                assert!(residual > 1.0);
            }
            other => panic!("expected NotNormal, got {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_is_fine() {
        let e = eig_normal(&ComplexMatrix::zeros(3, 3)).unwrap();
        for v in &e.values {
            assert_eq!(*v, Complex64::ZERO);
        }
    }
}
