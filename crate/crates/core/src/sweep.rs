//! Order-independent sample sweeps.
//!
//! Verification reduces a deviation function over many independently
//! seeded samples with `max`, so the reduction is associative and the
//! parallel and sequential paths produce identical results.  The
//! `parallel` feature routes sweeps through rayon; without it they run
//! sequentially with the same per-index seeding.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maximum of `f(i)` over `0..count`, failing fast on the first error.
pub fn try_max_over<F>(count: usize, f: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..count)
            .into_par_iter()
            .map(&f)
            .try_reduce(|| 0.0f64, |a, b| Ok(a.max(b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        max_over_sequential(count, f)
    }
}

/// Elementwise maximum of the `width`-long vectors `f(i)` over
/// `0..count`.
pub fn try_max_vectors<F>(count: usize, width: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..count)
            .into_par_iter()
            .map(&f)
            .try_reduce(
                || vec![0.0f64; width],
                |a, b| {
                    Ok(a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect())
                },
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        max_vectors_sequential(count, width, f)
    }
}

/// Sequential counterpart of [`try_max_over`]; always available so the
/// two execution paths can be compared directly.
pub fn max_over_sequential<F>(count: usize, f: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64>,
{
    let mut acc = 0.0f64;
    for i in 0..count {
        acc = acc.max(f(i)?);
    }
    Ok(acc)
}

/// Sequential counterpart of [`try_max_vectors`].
pub fn max_vectors_sequential<F>(count: usize, width: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Result<Vec<f64>>,
{
    let mut acc = vec![0.0f64; width];
    for i in 0..count {
        let v = f(i)?;
        for (a, b) in acc.iter_mut().zip(&v) {
            *a = a.max(*b);
        }
    }
    Ok(acc)
}
