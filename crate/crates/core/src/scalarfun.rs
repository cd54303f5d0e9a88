//! Scalar symbols: functions from the unit circle into the complex
//! plane, written in the angle variable `t in (-pi, pi]`.
//!
//! A symbol enters a distance as `N(f(A^-1 B))`, so the useful ones
//! vanish exactly at the identity, behave conformally there, and stay
//! continuous away from the eigenvalue -1.  The two built-ins are
//! `z - 1` and the principal logarithm with `log(-1) = i pi`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

/// Rule type for custom symbols, in the angle variable.
pub type ScalarRule = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A scalar symbol on the unit circle.
#[derive(Clone)]
pub enum ScalarSymbol {
    /// `f(z) = z - 1`.
    ZMinusOne,
    /// `f(z) = log z`, principal branch, with `log(-1) = i pi`.
    PrincipalLog,
    /// User-supplied rule with a declared bound on `|f|` over the
    /// domain; the bound is carried for documentation and reporting,
    /// not enforced pointwise.
    Custom { name: String, rule: ScalarRule, bound: f64 },
}

impl ScalarSymbol {
    /// Custom symbol from a rule in the angle variable.
    pub fn custom(
        name: impl Into<String>,
        bound: f64,
        rule: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self::Custom { name: name.into(), rule: Arc::new(rule), bound }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::ZMinusOne => "zminus1",
            Self::PrincipalLog => "log",
            Self::Custom { name, .. } => name,
        }
    }
}

impl fmt::Debug for ScalarSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Custom { name, bound, .. } => {
                write!(f, "ScalarSymbol::Custom({name:?}, bound={bound})")
            }
            other => write!(f, "ScalarSymbol::{}", other.name()),
        }
    }
}

impl std::str::FromStr for ScalarSymbol {
    type Err = Error;

    /// The text grammar knows the two built-ins, `zminus1` and `log`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zminus1" => Ok(Self::ZMinusOne),
            "log" => Ok(Self::PrincipalLog),
            other => Err(Error::SpecInvalid {
                msg: format!("unknown symbol '{other}', expected zminus1 or log"),
            }),
        }
    }
}

/// Evaluate `f` at the circle point with angle `t`.
///
/// Errors with `OutOfDomain` unless `t` is finite and in `(-pi, pi]`.
/// The endpoint `t = pi` evaluates through each symbol's convention at
/// -1; for the principal logarithm that value is `i pi`.
pub fn eval(f: &ScalarSymbol, t: f64) -> Result<Complex64> {
    if !t.is_finite() || t <= -PI || t > PI {
        return Err(Error::OutOfDomain { t });
    }
    Ok(match f {
        ScalarSymbol::ZMinusOne => Complex64::new(t.cos() - 1.0, t.sin()),
        ScalarSymbol::PrincipalLog => Complex64::new(0.0, t),
        ScalarSymbol::Custom { rule, .. } => rule(t),
    })
}

/// Outcome of one numeric axiom check.
#[derive(Debug, Clone, Copy)]
pub struct AxiomCheck {
    pub pass: bool,
    /// The decisive measured quantity for the check; see each field of
    /// [`AxiomReport`] for its meaning.
    pub measured: f64,
}

/// Report of the five numeric axiom checks on a grid of circle points.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub grid: usize,
    /// `f` vanishes at the identity and nowhere else on the grid.
    /// Measured: the smallest `|f|` away from zero, or `|f(0)|` when
    /// the vanishing half fails.
    pub zero_only_at_identity: AxiomCheck,
    /// Difference quotients against `z - 1` near the identity agree to
    /// within ten percent.  Measured: the relative spread.
    pub conformal_at_identity: AxiomCheck,
    /// No jumps between adjacent grid points away from -1.  Measured:
    /// largest adjacent difference over the median difference.
    pub continuous_away_from_minus_one: AxiomCheck,
    /// Value at -1 matches the limit from the upper half circle.
    /// Measured: `|f(pi) - f(pi - 1e-8)|`.
    pub left_limit_at_minus_one_matches: AxiomCheck,
    /// Limit from the lower half circle stays away from zero.
    /// Measured: `|f(-pi + 1e-8)|`.
    pub right_limit_at_minus_one_nonzero: AxiomCheck,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.zero_only_at_identity.pass
            && self.conformal_at_identity.pass
            && self.continuous_away_from_minus_one.pass
            && self.left_limit_at_minus_one_matches.pass
            && self.right_limit_at_minus_one_nonzero.pass
    }
}

const ZERO_FLOOR: f64 = 1e-12;
const CONFORMAL_SPREAD: f64 = 0.10;
const JUMP_RATIO: f64 = 20.0;
const LIMIT_OFFSET: f64 = 1e-8;
const LIMIT_TOL: f64 = 1e-6;

/// Run the numeric axiom checks on a grid of `grid >= 16` points
/// `t_k = -pi + 2 pi k / grid`, `k = 1..=grid`.
pub fn check_axioms(f: &ScalarSymbol, grid: usize) -> Result<AxiomReport> {
    if grid < 16 {
        return Err(Error::DegenerateRange {
            msg: format!("grid must have at least 16 points, got {grid}"),
        });
    }
    let ts: Vec<f64> = (1..=grid)
        .map(|k| -PI + 2.0 * PI * (k as f64) / (grid as f64))
        .collect();
    let values: Vec<Complex64> =
        ts.iter().map(|t| eval(f, *t)).collect::<Result<_>>()?;

    // Vanishing at the identity, and only there.
    let at_zero = eval(f, 0.0)?.norm();
    let min_off = ts
        .iter()
        .zip(&values)
        .filter(|(t, _)| t.abs() > 1e-15)
        .map(|(_, v)| v.norm())
        .fold(f64::INFINITY, f64::min);
    let zero_only = if at_zero <= ZERO_FLOOR {
        AxiomCheck { pass: min_off > ZERO_FLOOR, measured: min_off }
    } else {
        AxiomCheck { pass: false, measured: at_zero }
    };

    // Conformality: quotients against z - 1 at four small angles.
    let f0 = eval(f, 0.0)?;
    let mut quotients = Vec::with_capacity(4);
    let mut finite = true;
    for t in [1e-3f64, -1e-3, 1e-4, -1e-4] {
        let denom = Complex64::new(t.cos() - 1.0, t.sin());
        let q = (eval(f, t)? - f0) / denom;
        if !q.re.is_finite() || !q.im.is_finite() || q.norm() <= ZERO_FLOOR {
            finite = false;
        }
        quotients.push(q);
    }
    let conformal = if finite {
        let mean = quotients.iter().sum::<Complex64>() / 4.0;
        let spread = quotients
            .iter()
            .map(|q| (q - mean).norm())
            .fold(0.0f64, f64::max)
            / mean.norm().max(ZERO_FLOOR);
        AxiomCheck { pass: spread <= CONFORMAL_SPREAD, measured: spread }
    } else {
        AxiomCheck { pass: false, measured: f64::INFINITY }
    };

    // Continuity: adjacent differences, excluding the step into pi.
    let diffs: Vec<f64> = values
        .windows(2)
        .take(grid.saturating_sub(2))
        .map(|w| (w[1] - w[0]).norm())
        .collect();
    let mut sorted = diffs.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let max_diff = sorted.last().copied().unwrap_or(0.0);
    let ratio = max_diff / median.max(ZERO_FLOOR);
    let continuous = if max_diff <= ZERO_FLOOR {
        AxiomCheck { pass: true, measured: 0.0 }
    } else {
        AxiomCheck { pass: ratio <= JUMP_RATIO, measured: ratio }
    };

    // Behavior at -1: one-sided limits.
    let left_gap = (eval(f, PI)? - eval(f, PI - LIMIT_OFFSET)?).norm();
    let left = AxiomCheck { pass: left_gap <= LIMIT_TOL, measured: left_gap };
    let right_mag = eval(f, -PI + LIMIT_OFFSET)?.norm();
    let right = AxiomCheck { pass: right_mag >= LIMIT_TOL, measured: right_mag };

    Ok(AxiomReport {
        grid,
        zero_only_at_identity: zero_only,
        conformal_at_identity: conformal,
        continuous_away_from_minus_one: continuous,
        left_limit_at_minus_one_matches: left,
        right_limit_at_minus_one_nonzero: right,
    })
}

/// Smallest ratio `|f(z^2)| / |f(z)|` over a signed grid of 10^4
/// angles with `0 < |t| <= t_max`.
///
/// Errors with `DegenerateRange` unless `t_max` lies in `(0, pi/2]`
/// (so that the doubled angle stays in the domain) or if `|f|`
/// vanishes over the whole grid.
pub fn doubling_constant(f: &ScalarSymbol, t_max: f64) -> Result<f64> {
    if !t_max.is_finite() || t_max <= 0.0 || t_max > FRAC_PI_2 {
        return Err(Error::DegenerateRange {
            msg: format!("t_max must lie in (0, pi/2], got {t_max}"),
        });
    }
    let half = 5000usize;
    let mut best = f64::INFINITY;
    for k in 1..=half {
        let t = t_max * (k as f64) / (half as f64);
        for t in [t, -t] {
            let base = eval(f, t)?.norm();
            if base < ZERO_FLOOR {
                continue;
            }
            // Squaring the circle point doubles the angle modulo 2 pi;
            // exactly -pi is the point -1, whose canonical angle is pi.
            let doubled_angle = if 2.0 * t <= -PI { PI } else { 2.0 * t };
            let doubled = eval(f, doubled_angle)?.norm();
            best = best.min(doubled / base);
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::DegenerateRange {
            msg: "symbol vanishes over the whole grid".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values_and_convention_at_minus_one() {
        let z = eval(&ScalarSymbol::ZMinusOne, PI).unwrap();
        assert!((z - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        let l = eval(&ScalarSymbol::PrincipalLog, PI).unwrap();
        assert!((l - Complex64::new(0.0, PI)).norm() < 1e-15);
        let l2 = eval(&ScalarSymbol::PrincipalLog, -1.0).unwrap();
        assert!((l2 - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn domain_is_half_open() {
        assert!(eval(&ScalarSymbol::PrincipalLog, PI).is_ok());
        assert!(matches!(
            eval(&ScalarSymbol::PrincipalLog, -PI),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            eval(&ScalarSymbol::ZMinusOne, 3.2),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            eval(&ScalarSymbol::ZMinusOne, f64::NAN),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn builtins_pass_all_axioms_at_several_grids() {
        for f in [ScalarSymbol::ZMinusOne, ScalarSymbol::PrincipalLog] {
            for grid in [16usize, 64, 257, 1024] {
                let report = check_axioms(&f, grid).unwrap();
                assert!(
                    report.all_pass(),
                    "{} failed at grid {grid}: {report:?}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn grid_floor_is_enforced() {
        assert!(matches!(
            check_axioms(&ScalarSymbol::ZMinusOne, 15),
            Err(Error::DegenerateRange { .. })
        ));
    }

    #[test]
    fn quadratic_vanishing_fails_conformality_only() {
        let f = ScalarSymbol::custom("tsquared", PI * PI, |t| {
            Complex64::new(t * t, 0.0)
        });
        let report = check_axioms(&f, 64).unwrap();
        assert!(!report.conformal_at_identity.pass);
        assert!(report.zero_only_at_identity.pass);
        assert!(report.continuous_away_from_minus_one.pass);
        assert!(report.left_limit_at_minus_one_matches.pass);
        assert!(report.right_limit_at_minus_one_nonzero.pass);
    }

    #[test]
    fn nonvanishing_at_identity_is_flagged() {
        let f = ScalarSymbol::custom("unit", 1.0, |t| Complex64::from_polar(1.0, t));
        let report = check_axioms(&f, 64).unwrap();
        assert!(!report.zero_only_at_identity.pass);
        assert!((report.zero_only_at_identity.measured - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interior_jump_is_flagged() {
        let f = ScalarSymbol::custom("step", PI + 1.0, |t| {
            let base = Complex64::new(0.0, t);
            if t >= 0.5 {
                base + Complex64::ONE
            } else {
                base
            }
        });
        let report = check_axioms(&f, 256).unwrap();
        assert!(!report.continuous_away_from_minus_one.pass);
    }

    #[test]
    fn vanishing_left_limit_at_minus_one_is_flagged() {
        // Continuous but drops to zero at -1 from both sides.
        let f = ScalarSymbol::custom("pinch", PI, |t| {
            Complex64::new(PI - t.abs(), 0.0)
        });
        let report = check_axioms(&f, 64).unwrap();
        assert!(!report.right_limit_at_minus_one_nonzero.pass);
        assert!(report.left_limit_at_minus_one_matches.pass);
    }

    #[test]
    fn doubling_constants_match_closed_forms() {
        let two = doubling_constant(&ScalarSymbol::PrincipalLog, FRAC_PI_2).unwrap();
        assert!((two - 2.0).abs() <= 1e-9);
        let r2 = doubling_constant(&ScalarSymbol::ZMinusOne, FRAC_PI_2).unwrap();
        assert!((r2 - std::f64::consts::SQRT_2).abs() <= 1e-9);
        let r3 = doubling_constant(&ScalarSymbol::ZMinusOne, PI / 3.0).unwrap();
        assert!((r3 - 3.0f64.sqrt()).abs() <= 1e-9);
    }

    #[test]
    fn doubling_range_is_validated() {
        for bad in [0.0, -1.0, 2.0, f64::NAN] {
            assert!(matches!(
                doubling_constant(&ScalarSymbol::ZMinusOne, bad),
                Err(Error::DegenerateRange { .. })
            ));
        }
    }
}
