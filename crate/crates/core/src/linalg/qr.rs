//! Householder QR with a deterministic sign convention, plus an LU
//! determinant and Gram-Schmidt helpers used by the decompositions.

use super::RealMatrix;
use crate::error::{Error, Result};

/// Result of [`qr`]: `m = q * r` with `q` orthogonal and `r` upper
/// triangular with nonnegative diagonal.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: RealMatrix,
    pub r: RealMatrix,
}

/// QR factorization of a square matrix by Householder reflections.
///
/// The signs are normalized so that `diag(r) >= 0`, which makes the
/// factorization unique for full-rank input: the identity returns
/// `(I, I)` and any diagonal matrix with positive entries returns
/// itself as `r`.
pub fn qr(m: &RealMatrix) -> Result<QrFactors> {
    let n = m.require_square()?;
    m.require_finite()?;
    let mut r = m.clone();
    let mut q = RealMatrix::identity(n);

    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let mut norm = 0.0;
        for i in k..n {
            norm += r[(i, k)] * r[(i, k)];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n - k];
        v[0] = r[(k, k)] - alpha;
        for i in k + 1..n {
            v[i - k] = r[(i, k)];
        }
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in &mut v {
            *x /= vnorm;
        }
        // r <- (I - 2 v v^T) r on rows k..n.
        for j in k..n {
            let mut s = 0.0;
            for i in k..n {
                s += v[i - k] * r[(i, j)];
            }
            for i in k..n {
                r[(i, j)] -= 2.0 * s * v[i - k];
            }
        }
        // q <- q (I - 2 v v^T): accumulate reflections on the right.
        for row in 0..n {
            let mut s = 0.0;
            for i in k..n {
                s += q[(row, i)] * v[i - k];
            }
            for i in k..n {
                q[(row, i)] -= 2.0 * s * v[i - k];
            }
        }
    }

    // Force a nonnegative diagonal on r; clear the subdiagonal noise.
    for i in 0..n {
        if r[(i, i)] < 0.0 {
            for j in 0..n {
                r[(i, j)] = -r[(i, j)];
                q[(j, i)] = -q[(j, i)];
            }
        }
        for j in 0..i {
            r[(i, j)] = 0.0;
        }
    }
    Ok(QrFactors { q, r })
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &RealMatrix) -> Result<f64> {
    let n = m.require_square()?;
    m.require_finite()?;
    let mut a = m.clone();
    let mut sign = 1.0;
    let mut d = 1.0;
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[(i, k)].abs() > a[(p, k)].abs() {
                p = i;
            }
        }
        if a[(p, k)] == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            sign = -sign;
        }
        d *= a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in k..n {
                let v = f * a[(k, j)];
                a[(i, j)] -= v;
            }
        }
    }
    Ok(sign * d)
}

/// Modified Gram-Schmidt over `candidates`, keeping the first `want`
/// directions that survive projection.  Candidates that collapse below
/// the drop threshold are skipped, so over-complete spanning sets are
/// fine.  Errors with `NoConvergence` if fewer than `want` independent
/// directions are found.
pub fn orthonormal_span(candidates: &[Vec<f64>], want: usize) -> Result<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(want);
    for cand in candidates {
        if basis.len() == want {
            break;
        }
        let mut v = cand.clone();
        // Two projection passes keep the basis orthonormal to roundoff.
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for x in &mut v {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    if basis.len() < want {
        return Err(Error::NoConvergence);
    }
    Ok(basis)
}

/// Extend near-orthonormal columns to a full orthogonal matrix of
/// order `n`, keeping the given columns first (re-orthonormalized).
pub fn complete_orthonormal(cols: &[Vec<f64>], n: usize) -> Result<RealMatrix> {
    assert!(cols.len() <= n);
    for c in cols {
        assert_eq!(c.len(), n);
    }
    let mut candidates: Vec<Vec<f64>> = cols.to_vec();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        candidates.push(e);
    }
    let basis = orthonormal_span(&candidates, n)?;
    let mut q = RealMatrix::zeros(n, n);
    for (j, b) in basis.iter().enumerate() {
        q.set_column(j, b);
    }
    Ok(q)
}
