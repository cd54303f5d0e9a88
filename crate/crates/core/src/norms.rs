//! Unitarily invariant matrix norms, evaluated through singular
//! values: operator, Frobenius, Schatten-p, Ky Fan-k, and the
//! c-spectral family `sum c_i sigma_i`, each with an optional positive
//! multiplier.
//!
//! The text grammar accepted by [`NormSpec::from_str`] is
//! `[<m>*]<kind>` with kinds `op`, `fro`, `schatten:<p>`, `kyfan:<k>`
//! and `c:<v1,v2,...>`, for example `2*fro` or `c:2,1,0.5`.

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};
use crate::rotation::random_so;
use crate::seedmix::derive;
use std::fmt;
use std::str::FromStr;

/// The norm families.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// Largest singular value.
    Operator,
    /// Euclidean norm of the singular values.
    Frobenius,
    /// `(sum sigma_i^p)^(1/p)` with `p >= 1`.
    Schatten { p: f64 },
    /// Sum of the `k` largest singular values, `k >= 1`.
    KyFan { k: usize },
    /// `sum c_i sigma_i` with `c` nonincreasing, nonnegative, and
    /// `c_1 > 0`.  Entries beyond the length of `c` contribute zero.
    CSpectral { c: Vec<f64> },
}

/// A validated norm: a family member and a positive multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    kind: NormKind,
    multiplier: f64,
}

impl NormSpec {
    /// Validate a kind and multiplier.
    pub fn new(kind: NormKind, multiplier: f64) -> Result<Self> {
        if !multiplier.is_finite() || multiplier <= 0.0 {
            return Err(Error::SpecInvalid {
                msg: format!("multiplier must be positive and finite, got {multiplier}"),
            });
        }
        match &kind {
            NormKind::Schatten { p } => {
                if !p.is_finite() || *p < 1.0 {
                    return Err(Error::SpecInvalid {
                        msg: format!("Schatten exponent must be >= 1, got {p}"),
                    });
                }
            }
            NormKind::KyFan { k } => {
                if *k == 0 {
                    return Err(Error::SpecInvalid {
                        msg: "Ky Fan order must be at least 1".into(),
                    });
                }
            }
            NormKind::CSpectral { c } => {
                if c.is_empty() {
                    return Err(Error::SpecInvalid {
                        msg: "c-spectral weights must be nonempty".into(),
                    });
                }
                if c.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::SpecInvalid {
                        msg: "c-spectral weights must be finite and nonnegative".into(),
                    });
                }
                if c[0] <= 0.0 {
                    return Err(Error::SpecInvalid {
                        msg: "leading c-spectral weight must be positive".into(),
                    });
                }
                if c.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::SpecInvalid {
                        msg: "c-spectral weights must be nonincreasing".into(),
                    });
                }
            }
            NormKind::Operator | NormKind::Frobenius => {}
        }
        Ok(Self { kind, multiplier })
    }

    pub fn operator() -> Self {
        Self { kind: NormKind::Operator, multiplier: 1.0 }
    }

    pub fn frobenius() -> Self {
        Self { kind: NormKind::Frobenius, multiplier: 1.0 }
    }

    pub fn schatten(p: f64) -> Result<Self> {
        Self::new(NormKind::Schatten { p }, 1.0)
    }

    pub fn ky_fan(k: usize) -> Result<Self> {
        Self::new(NormKind::KyFan { k }, 1.0)
    }

    pub fn c_spectral(c: Vec<f64>) -> Result<Self> {
        Self::new(NormKind::CSpectral { c }, 1.0)
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    /// Decided symbolically from the family, not numerically: exactly
    /// the Frobenius norm and the Schatten norm with `p = 2`, under
    /// any positive multiplier.
    pub fn is_frobenius_multiple(&self) -> bool {
        match &self.kind {
            NormKind::Frobenius => true,
            NormKind::Schatten { p } => *p == 2.0,
            _ => false,
        }
    }
}

/// Evaluate the norm of a matrix.
pub fn evaluate(spec: &NormSpec, m: &ComplexMatrix) -> Result<f64> {
    let sv = singular_values(m)?;
    evaluate_from_singular_values(spec, &sv)
}

/// Evaluate the norm from a descending singular value profile.
///
/// Errors with `SpecInvalid` when a Ky Fan order or c-spectral weight
/// list exceeds the number of singular values.
pub fn evaluate_from_singular_values(spec: &NormSpec, sv: &[f64]) -> Result<f64> {
    let g = match &spec.kind {
        NormKind::Operator => sv.first().copied().unwrap_or(0.0),
        NormKind::Frobenius => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
        NormKind::Schatten { p } => {
            sv.iter().map(|s| s.powf(*p)).sum::<f64>().powf(1.0 / p)
        }
        NormKind::KyFan { k } => {
            if *k > sv.len() {
                return Err(Error::SpecInvalid {
                    msg: format!(
                        "Ky Fan order {k} exceeds the {} singular values",
                        sv.len()
                    ),
                });
            }
            sv[..*k].iter().sum()
        }
        NormKind::CSpectral { c } => {
            if c.len() > sv.len() {
                return Err(Error::SpecInvalid {
                    msg: format!(
                        "{} c-spectral weights exceed the {} singular values",
                        c.len(),
                        sv.len()
                    ),
                });
            }
            c.iter().zip(sv).map(|(ci, si)| ci * si).sum()
        }
    };
    Ok(spec.multiplier * g)
}

/// Largest observed change of the norm under seeded two-sided
/// orthogonal transforms, including reflections.  Small values attest
/// unitary invariance on the sampled orbit.
pub fn unitary_invariance_residual(
    spec: &NormSpec,
    m: &ComplexMatrix,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let base = evaluate(spec, m)?;
    let mut worst = 0.0f64;
    for t in 0..trials as u64 {
        let mut u = random_so(m.rows(), derive(seed, 3 * t))?.into_body();
        let mut v = random_so(m.cols(), derive(seed, 3 * t + 1))?.into_body();
        let bits = derive(seed, 3 * t + 2);
        if bits & 1 == 1 {
            let neg: Vec<f64> = u.column(0).iter().map(|x| -x).collect();
            u.set_column(0, &neg);
        }
        if bits & 2 == 2 {
            let neg: Vec<f64> = v.column(0).iter().map(|x| -x).collect();
            v.set_column(0, &neg);
        }
        let transformed = ComplexMatrix::from_real(&u)
            .mul(m)
            .mul(&ComplexMatrix::from_real(&v));
        let val = evaluate(spec, &transformed)?;
        worst = worst.max((val - base).abs());
    }
    Ok(worst)
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::SpecInvalid { msg };
        let (mult, body) = match s.split_once('*') {
            Some((m, rest)) => {
                let m: f64 = m.trim().parse().map_err(|_| {
                    bad(format!("invalid multiplier in norm '{s}'"))
                })?;
                (m, rest.trim())
            }
            None => (1.0, s.trim()),
        };
        let kind = if body == "op" {
            NormKind::Operator
        } else if body == "fro" {
            NormKind::Frobenius
        } else if let Some(p) = body.strip_prefix("schatten:") {
            let p: f64 = p
                .parse()
                .map_err(|_| bad(format!("invalid Schatten exponent in '{s}'")))?;
            NormKind::Schatten { p }
        } else if let Some(k) = body.strip_prefix("kyfan:") {
            let k: usize = k
                .parse()
                .map_err(|_| bad(format!("invalid Ky Fan order in '{s}'")))?;
            NormKind::KyFan { k }
        } else if let Some(c) = body.strip_prefix("c:") {
            let c: Vec<f64> = c
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| bad(format!("invalid c-spectral weight in '{s}'")))
                })
                .collect::<Result<_>>()?;
            NormKind::CSpectral { c }
        } else {
            return Err(bad(format!("unknown norm '{s}'")));
        };
        Self::new(kind, mult)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplier != 1.0 {
            write!(f, "{}*", self.multiplier)?;
        }
        match &self.kind {
            NormKind::Operator => write!(f, "op"),
            NormKind::Frobenius => write!(f, "fro"),
            NormKind::Schatten { p } => write!(f, "schatten:{p}"),
            NormKind::KyFan { k } => write!(f, "kyfan:{k}"),
            NormKind::CSpectral { c } => {
                write!(f, "c:")?;
                for (i, ci) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{ci}")?;
                }
                Ok(())
            }
        }
    }
}
