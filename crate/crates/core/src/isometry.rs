//! Candidate isometries of a distance on the rotation group and the
//! sweeps that measure how well they preserve it.
//!
//! Four form families are covered, each with an orthogonal conjugator
//! `Q` and an offset rotation `P0` applied on the left:
//!
//! * tag `a`: `A -> P0 Q A Q^T`, conjugation;
//! * tag `b`: `A -> P0 Q A^-1 Q^T`, inverted conjugation;
//! * tag `c`: `A -> P0 Q exp(tilde(log A)) Q^T`, dimension four only;
//! * tag `d`: as `c` with the negated involution.
//!
//! Tags `c` and `d` pass through the logarithm, so they refuse inputs
//! with a rotation angle inside the guard band around pi where the
//! branch is ambiguous.

use crate::distance::{dist, DistanceSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix};
use crate::rotation::{exp_skew, log_so, max_rotation_angle, random_so, Rotation};
use crate::scalarfun::doubling_constant;
use crate::seedmix::derive;
use crate::skewsym::{bch_numeric, random_skew, tilde, SkewMatrix};
use crate::sweep;
use crate::textmat;
use crate::tol;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Angle cap, as a fraction of pi, for guarded sampling that feeds the
/// logarithm-based forms.
const SAMPLING_ANGLE_CAP: f64 = 0.9;
/// Attempt budget for rejection sampling under the angle cap.
const MAX_RESAMPLE: usize = 10_000;

/// The four form families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormTag {
    /// `A -> P0 Q A Q^T`.
    Conjugate,
    /// `A -> P0 Q A^-1 Q^T`.
    ConjugateInverse,
    /// `A -> P0 Q exp(tilde(log A)) Q^T`, dimension four.
    TildeTwist,
    /// `A -> P0 Q exp(-tilde(log A)) Q^T`, dimension four.
    TildeTwistNegated,
}

impl FormTag {
    /// Whether this family exists only in dimension four.
    pub fn needs_dimension_four(self) -> bool {
        matches!(self, Self::TildeTwist | Self::TildeTwistNegated)
    }

    /// The single-letter name used by the text interfaces.
    pub fn letter(self) -> &'static str {
        match self {
            Self::Conjugate => "a",
            Self::ConjugateInverse => "b",
            Self::TildeTwist => "c",
            Self::TildeTwistNegated => "d",
        }
    }
}

impl FromStr for FormTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" => Ok(Self::Conjugate),
            "b" => Ok(Self::ConjugateInverse),
            "c" => Ok(Self::TildeTwist),
            "d" => Ok(Self::TildeTwistNegated),
            other => Err(Error::SpecInvalid {
                msg: format!("unknown form tag '{other}', expected a, b, c or d"),
            }),
        }
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// A concrete candidate isometry: family, conjugator, offset.
#[derive(Debug, Clone)]
pub struct IsometryForm {
    tag: FormTag,
    q: RealMatrix,
    p0: Rotation,
}

impl IsometryForm {
    /// Validate the pieces: `q` orthogonal (reflections allowed) and
    /// shaped like `p0`; tags `c`/`d` require dimension four.
    pub fn new(tag: FormTag, q: RealMatrix, p0: Rotation) -> Result<Self> {
        let n = q.require_square()?;
        q.require_finite()?;
        let gram = q.transpose().mul(&q);
        let residual = gram.sub(&RealMatrix::identity(n)).frobenius_norm();
        if residual > tol::DEFAULT.orthogonality * n as f64 {
            return Err(Error::NotOrthogonal { residual });
        }
        if p0.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: p0.n() });
        }
        if tag.needs_dimension_four() && n != 4 {
            return Err(Error::WrongDimension { expected: 4, got: n });
        }
        Ok(Self { tag, q, p0 })
    }

    /// Identity conjugator and offset.
    pub fn plain(tag: FormTag, n: usize) -> Result<Self> {
        Self::new(tag, RealMatrix::identity(n), Rotation::identity(n))
    }

    pub fn tag(&self) -> FormTag {
        self.tag
    }

    pub fn q(&self) -> &RealMatrix {
        &self.q
    }

    pub fn p0(&self) -> &Rotation {
        &self.p0
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    /// The image of the identity, which is exactly the offset.
    pub fn identity_output(&self) -> &Rotation {
        &self.p0
    }

    /// Apply the form to a rotation.
    ///
    /// Errors with `AnglePi` for tags `c`/`d` when the input has a
    /// rotation angle within the guard band of pi.
    pub fn apply(&self, a: &Rotation) -> Result<Rotation> {
        let n = self.dim();
        if a.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: a.n() });
        }
        let inner = match self.tag {
            FormTag::Conjugate => a.body().clone(),
            FormTag::ConjugateInverse => a.body().transpose(),
            FormTag::TildeTwist | FormTag::TildeTwistNegated => {
                let guard = tol::DEFAULT.angle_pi_guard;
                if max_rotation_angle(a)? >= PI - guard {
                    return Err(Error::AnglePi { guard });
                }
                let x = log_so(a)?;
                let mut t = tilde(&x)?;
                if self.tag == FormTag::TildeTwistNegated {
                    t = t.scale(-1.0);
                }
                exp_skew(&t).into_body()
            }
        };
        let body = self
            .p0
            .body()
            .mul(&self.q.mul(&inner).mul(&self.q.transpose()));
        Rotation::new(body)
    }
}

/// Jordan triple product `a b a`.
pub fn triple(a: &Rotation, b: &Rotation) -> Result<Rotation> {
    a.compose(b)?.compose(a)
}

/// Inverted triple product `a b^-1 a`.
pub fn inverted_triple(a: &Rotation, b: &Rotation) -> Result<Rotation> {
    a.compose(&b.inverse())?.compose(a)
}

/// An explicit input/output table standing in for a map with no
/// closed form.
#[derive(Debug, Clone)]
pub struct MapTable {
    entries: Vec<(Rotation, Rotation)>,
    dim: usize,
}

impl MapTable {
    pub fn new(entries: Vec<(Rotation, Rotation)>) -> Result<Self> {
        let dim = match entries.first() {
            Some((a, _)) => a.n(),
            None => {
                return Err(Error::SpecInvalid {
                    msg: "map table must have at least one entry".into(),
                })
            }
        };
        for (a, b) in &entries {
            if a.n() != dim || b.n() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: a.n().max(b.n()),
                });
            }
        }
        Ok(Self { entries, dim })
    }

    /// Parse the text form: blocks of two matrices per entry, input
    /// then output, separated by blank lines.  Every block must be a
    /// valid rotation.
    pub fn parse(text: &str) -> Result<Self> {
        let blocks = textmat::parse_matrices(text)?;
        if blocks.is_empty() || blocks.len() % 2 != 0 {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "map table needs an even number of matrix blocks, found {}",
                    blocks.len()
                ),
            });
        }
        let mut entries = Vec::with_capacity(blocks.len() / 2);
        let mut it = blocks.into_iter();
        while let (Some(input), Some(output)) = (it.next(), it.next()) {
            entries.push((Rotation::new(input)?, Rotation::new(output)?));
        }
        Self::new(entries)
    }

    /// Write the table back out in its text form.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for (input, output) in &self.entries {
            out.push_str(&textmat::format_matrix(input.body()));
            out.push('\n');
            out.push_str(&textmat::format_matrix(output.body()));
            out.push('\n');
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(Rotation, Rotation)] {
        &self.entries
    }
}

/// Haar draw, optionally rejection-sampled under an angle cap.
pub(crate) fn sample_rotation(
    n: usize,
    seed: u64,
    slot: u64,
    cap: Option<f64>,
) -> Result<Rotation> {
    match cap {
        None => random_so(n, derive(seed, slot)),
        Some(cap) => {
            let base = derive(seed, slot);
            for attempt in 0..MAX_RESAMPLE as u64 {
                let r = random_so(n, derive(base, attempt))?;
                if max_rotation_angle(&r)? <= cap {
                    return Ok(r);
                }
            }
            Err(Error::NoConvergence)
        }
    }
}

pub(crate) fn angle_cap_for(tag: FormTag) -> Option<f64> {
    if tag.needs_dimension_four() {
        Some(SAMPLING_ANGLE_CAP * PI)
    } else {
        None
    }
}

/// Deviation `|d(phi(A), phi(B)) - d(A, B)|` for the `i`-th seeded
/// pair: the unit of work behind [`max_deviation_form`], exposed so
/// callers can drive the sweep themselves (for example to compare
/// scheduling strategies).
pub fn pair_deviation(
    form: &IsometryForm,
    spec: &DistanceSpec,
    seed: u64,
    i: usize,
) -> Result<f64> {
    let n = form.dim();
    let cap = angle_cap_for(form.tag());
    let i = i as u64;
    let a = sample_rotation(n, seed, 2 * i, cap)?;
    let b = sample_rotation(n, seed, 2 * i + 1, cap)?;
    let d_in = dist(spec, &a, &b)?;
    let d_out = dist(spec, &form.apply(&a)?, &form.apply(&b)?)?;
    Ok((d_in - d_out).abs())
}

/// Largest deviation `|d(phi(A), phi(B)) - d(A, B)|` over seeded Haar
/// pairs.  For tags `c`/`d` the draws are rejection-sampled to keep
/// rotation angles at most `0.9 pi`, clear of the logarithm guard.
pub fn max_deviation_form(
    form: &IsometryForm,
    spec: &DistanceSpec,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InsufficientSamples { need: 2, got: samples });
    }
    sweep::try_max_over(samples, |i| pair_deviation(form, spec, seed, i))
}

/// Largest deviation between input and output distances over ordered
/// pairs of table entries.  All `len * (len - 1)` ordered pairs are
/// used when `samples` covers them; otherwise pairs are drawn with the
/// seeded generator.
pub fn max_deviation_table(
    table: &MapTable,
    spec: &DistanceSpec,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InsufficientSamples { need: 2, got: samples });
    }
    let m = table.len();
    if m < 2 {
        return Err(Error::InsufficientSamples { need: 2, got: m });
    }
    let total = m * (m - 1);
    let deviation = |i: usize, j: usize| -> Result<f64> {
        let (a_in, a_out) = &table.entries[i];
        let (b_in, b_out) = &table.entries[j];
        let d_in = dist(spec, a_in, b_in)?;
        let d_out = dist(spec, a_out, b_out)?;
        Ok((d_in - d_out).abs())
    };
    if samples >= total {
        sweep::try_max_over(total, |k| {
            let i = k / (m - 1);
            let j0 = k % (m - 1);
            let j = j0 + usize::from(j0 >= i);
            deviation(i, j)
        })
    } else {
        sweep::try_max_over(samples, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, t as u64));
            let i = rng.random_range(0..m);
            let j0 = rng.random_range(0..m - 1);
            let j = j0 + usize::from(j0 >= i);
            deviation(i, j)
        })
    }
}

/// Compare the eigenvalue multisets of `log(exp(X) exp(Y))` before
/// and after the involution; returns the largest entrywise gap after
/// sorting both multisets by `(im, re, modulus)`.
///
/// The involution preserves each factor's eigenvalues; this residual
/// measures whether it also preserves the eigenvalues of the
/// composition, which is the content of the series identity.
pub fn involution_spectrum_gap(x: &SkewMatrix, y: &SkewMatrix) -> Result<f64> {
    let z1 = bch_numeric(x, y)?;
    let z2 = bch_numeric(&tilde(x)?, &tilde(y)?)?;
    let mut e1 = linalg::eig_normal(&z1.complexify())?.values;
    let mut e2 = linalg::eig_normal(&z2.complexify())?.values;
    let key = |z: &Complex64| (z.im, z.re, z.norm());
    let cmp = |a: &Complex64, b: &Complex64| {
        key(a).partial_cmp(&key(b)).unwrap()
    };
    e1.sort_by(cmp);
    e2.sort_by(cmp);
    Ok(e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max))
}

/// Report of the metric-space conditions behind the rigidity argument
/// for surjective isometries.
#[derive(Debug, Clone)]
pub struct MetricConditionsReport {
    /// Largest residual of `d(b x^-1 b, b x'^-1 b) = d(x', x)` over
    /// sampled pairs: invariance under point reflection through `b`.
    pub reflection_invariance: f64,
    /// Largest residual of `d(c x^-1 c', c x'^-1 c') = d(x', x)` over
    /// sampled quadruples: the two-sided version.
    pub double_reflection_invariance: f64,
    /// Number of sampled approximate members of the bisection set
    /// `{x : d(a, x) = d(x, b a^-1 b) = d(a, b)}`, within `slack`.
    pub member_count: usize,
    /// Largest `d(x, b)` over those members.
    pub bisection_radius: f64,
    /// Smallest ratio `d(x, b x^-1 b) / d(x, b)` over members with
    /// `x != b`; reflection through a member at least doubles distance
    /// in the symbol's doubling constant.
    pub min_doubling_ratio: Option<f64>,
    /// The symbol's doubling constant over the quarter-circle.
    pub doubling_reference: f64,
    /// Membership slack used for the set sampling.
    pub slack: f64,
}

impl MetricConditionsReport {
    /// All four conditions hold: the invariances within `tol`, a
    /// finite occupied bisection set, and the doubling ratio at least
    /// the reference within the membership slack.
    pub fn all_pass(&self, tol: f64) -> bool {
        self.reflection_invariance <= tol
            && self.double_reflection_invariance <= tol
            && self.member_count > 0
            && self.bisection_radius.is_finite()
            && match self.min_doubling_ratio {
                Some(r) => r >= self.doubling_reference - self.slack,
                None => false,
            }
    }
}

/// Sample the metric-space conditions for `spec` at the pair `(a, b)`.
///
/// Members of the bisection set are generated as `b exp(eps W)` for
/// unit random skew directions `W` and decreasing `eps`, then filtered
/// by membership residual against the slack; `b` itself is always a
/// member.
pub fn check_metric_conditions(
    spec: &DistanceSpec,
    a: &Rotation,
    b: &Rotation,
    samples: usize,
    seed: u64,
) -> Result<MetricConditionsReport> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    if samples < 2 {
        return Err(Error::InsufficientSamples { need: 2, got: samples });
    }
    let n = a.n();
    let slack = tol::DEFAULT.membership_slack;

    // Point reflection through b preserves distances.
    let reflection = sweep::try_max_over(samples, |t| {
        let t = t as u64;
        let x = random_so(n, derive(seed, 4 * t))?;
        let xp = random_so(n, derive(seed, 4 * t + 1))?;
        let rx = b.compose(&x.inverse())?.compose(b)?;
        let rxp = b.compose(&xp.inverse())?.compose(b)?;
        Ok((dist(spec, &rx, &rxp)? - dist(spec, &xp, &x)?).abs())
    })?;

    // Two-sided version with independent outer points.
    let double_reflection = sweep::try_max_over(samples, |t| {
        let t = t as u64;
        let x = random_so(n, derive(seed, 4 * t))?;
        let xp = random_so(n, derive(seed, 4 * t + 1))?;
        let c = random_so(n, derive(seed, 4 * t + 2))?;
        let cp = random_so(n, derive(seed, 4 * t + 3))?;
        let rx = c.compose(&x.inverse())?.compose(&cp)?;
        let rxp = c.compose(&xp.inverse())?.compose(&cp)?;
        Ok((dist(spec, &rx, &rxp)? - dist(spec, &xp, &x)?).abs())
    })?;

    // Approximate members of the bisection set of (a, b).
    let d_ab = dist(spec, a, b)?;
    let opposite = b.compose(&a.inverse())?.compose(b)?;
    let mut members: Vec<Rotation> = vec![b.clone()];
    for t in 0..samples as u64 {
        let w = random_skew(n, 1.0, derive(seed, 1_000_000 + t))?;
        let norm = w.frobenius_norm();
        if norm == 0.0 {
            continue;
        }
        let eps = [1e-7, 3e-8, 1e-8][(t % 3) as usize];
        let x = b.compose(&exp_skew(&w.scale(eps / norm)))?;
        let r1 = (dist(spec, a, &x)? - d_ab).abs();
        let r2 = (dist(spec, &x, &opposite)? - d_ab).abs();
        if r1.max(r2) <= slack {
            members.push(x);
        }
    }

    let mut radius = 0.0f64;
    let mut min_ratio: Option<f64> = None;
    for x in &members {
        let to_b = dist(spec, x, b)?;
        radius = radius.max(to_b);
        if to_b > 1e-12 {
            let reflected = b.compose(&x.inverse())?.compose(b)?;
            let ratio = dist(spec, x, &reflected)? / to_b;
            min_ratio = Some(match min_ratio {
                Some(r) => r.min(ratio),
                None => ratio,
            });
        }
    }
    let reference = doubling_constant(&spec.symbol, std::f64::consts::FRAC_PI_2)?;

    Ok(MetricConditionsReport {
        reflection_invariance: reflection,
        double_reflection_invariance: double_reflection,
        member_count: members.len(),
        bisection_radius: radius,
        min_doubling_ratio: min_ratio,
        doubling_reference: reference,
        slack,
    })
}

/// Multiplicativity residuals of a form with identity offset.
#[derive(Debug, Clone, Copy)]
pub struct HomomorphismResidual {
    /// Largest `||phi(A1 A2) - phi(A1) phi(A2)||_F`.
    pub mult: f64,
    /// Largest `||phi(A1 A2) - phi(A2) phi(A1)||_F`.
    pub antimult: f64,
    /// Largest over pairs of the smaller of the two residuals; bounded
    /// away from zero exactly when some single pair defeats both the
    /// homomorphism and the antihomomorphism reading.
    pub joint: f64,
}

/// Measure how far a form with `P0 = I` is from being multiplicative
/// or antimultiplicative over seeded pairs.  For tags `c`/`d`, pairs
/// are redrawn until both factors and their product clear the
/// sampling angle cap.
pub fn homomorphism_residual(
    form: &IsometryForm,
    samples: usize,
    seed: u64,
) -> Result<HomomorphismResidual> {
    if samples == 0 {
        return Err(Error::InsufficientSamples { need: 1, got: 0 });
    }
    let offset = form
        .p0
        .body()
        .sub(&RealMatrix::identity(form.dim()))
        .frobenius_norm();
    if offset > 1e-9 {
        return Err(Error::SpecInvalid {
            msg: "multiplicativity residuals require the identity offset".into(),
        });
    }
    let n = form.dim();
    let cap = angle_cap_for(form.tag);
    let reduced = sweep::try_max_vectors(samples, 3, |t| {
        let base = derive(seed, t as u64);
        let (a1, a2) = match cap {
            None => (random_so(n, derive(base, 0))?, random_so(n, derive(base, 1))?),
            Some(cap) => {
                let mut found = None;
                for attempt in 0..MAX_RESAMPLE as u64 {
                    let trial = derive(base, attempt);
                    let a1 = random_so(n, derive(trial, 0))?;
                    let a2 = random_so(n, derive(trial, 1))?;
                    if max_rotation_angle(&a1)? <= cap
                        && max_rotation_angle(&a2)? <= cap
                        && max_rotation_angle(&a1.compose(&a2)?)? <= cap
                    {
                        found = Some((a1, a2));
                        break;
                    }
                }
                found.ok_or(Error::NoConvergence)?
            }
        };
        let lhs = form.apply(&a1.compose(&a2)?)?;
        let f1 = form.apply(&a1)?;
        let f2 = form.apply(&a2)?;
        let mult = lhs.body().sub(f1.compose(&f2)?.body()).frobenius_norm();
        let anti = lhs.body().sub(f2.compose(&f1)?.body()).frobenius_norm();
        Ok(vec![mult, anti, mult.min(anti)])
    })?;
    Ok(HomomorphismResidual {
        mult: reduced[0],
        antimult: reduced[1],
        joint: reduced[2],
    })
}
