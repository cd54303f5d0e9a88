//! End-to-end verification suites.
//!
//! Each suite runs a seeded randomized check of one public claim and
//! returns a [`SuiteReport`]: a pass flag plus named residuals.  The
//! suites are deterministic in `(samples, seed)`, so reports can be
//! compared byte for byte across runs and machines.

use crate::distance::{singular_profile, DistanceSpec};
use crate::error::{Error, Result};
use crate::isometry::{
    self, angle_cap_for, check_metric_conditions, sample_rotation, triple, FormTag,
    IsometryForm, MapTable,
};
use crate::linalg::{self, RealMatrix};
use crate::norms::{evaluate_from_singular_values, NormSpec};
use crate::rotation::{exp_skew, random_so, Rotation};
use crate::scalarfun::ScalarSymbol;
use crate::seedmix::derive;
use crate::skewsym::{random_skew, random_skew_spectral_capped};
use crate::sweep;
use std::f64::consts::PI;
use std::fmt;

/// Outcome of one suite: a flag and the residuals behind it.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub metrics: Vec<(String, f64)>,
}

impl SuiteReport {
    fn new(suite: &str, pass: bool, metrics: Vec<(String, f64)>) -> Self {
        Self { suite: suite.to_string(), pass, metrics }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.suite, if self.pass { "PASS" } else { "FAIL" })?;
        for (name, value) in &self.metrics {
            writeln!(f, "  {name} = {value:.6e}")?;
        }
        Ok(())
    }
}

/// The norm battery used by the sweep suites: operator, Frobenius,
/// Schatten 3, Ky Fan 2, and a strictly decreasing weighted spectral
/// norm with one weight per singular value, halving from 2.
pub fn criterion_norms(n: usize) -> Vec<NormSpec> {
    let weights: Vec<f64> = (0..n).map(|k| 2.0 * 0.5f64.powi(k as i32)).collect();
    vec![
        NormSpec::operator(),
        NormSpec::frobenius(),
        NormSpec::schatten(3.0).expect("3 >= 1"),
        NormSpec::ky_fan(2).expect("2 >= 1"),
        NormSpec::c_spectral(weights).expect("halving weights are admissible"),
    ]
}

fn symbols() -> [ScalarSymbol; 2] {
    [ScalarSymbol::PrincipalLog, ScalarSymbol::ZMinusOne]
}

/// Seeded orthogonal conjugator; half the seeds flip one column so
/// reflections (determinant -1) are exercised too.
fn seeded_orthogonal(n: usize, seed: u64) -> Result<RealMatrix> {
    let mut q = random_so(n, seed)?.into_body();
    if derive(seed, 0x000f_f5e7) & 1 == 1 {
        let neg: Vec<f64> = q.column(0).iter().map(|v| -v).collect();
        q.set_column(0, &neg);
    }
    Ok(q)
}

/// High slots for the per-suite form draws, clear of the per-sample
/// slots which start at zero.
const FORM_SLOT: u64 = 1 << 40;

fn seeded_form(tag: FormTag, n: usize, seed: u64, which: u64) -> Result<IsometryForm> {
    let q = seeded_orthogonal(n, derive(seed, FORM_SLOT + 2 * which))?;
    let p0 = random_so(n, derive(seed, FORM_SLOT + 2 * which + 1))?;
    IsometryForm::new(tag, q, p0)
}

/// Shared engine for the distance-preservation suites: sweep seeded
/// pairs, compute each symbol's singular profile before and after each
/// form, and compare under every norm in the battery.
fn preservation_suite(
    suite: &str,
    forms: &[IsometryForm],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    if samples < 2 {
        return Err(Error::InsufficientSamples { need: 2, got: samples });
    }
    let n = forms[0].dim();
    let syms = symbols();
    let norms = criterion_norms(n);
    let cap = forms
        .iter()
        .filter_map(|f| angle_cap_for(f.tag()))
        .fold(None::<f64>, |acc, c| Some(acc.map_or(c, |a| a.min(c))));
    let width = forms.len() * syms.len() * norms.len();
    let worst = sweep::try_max_vectors(samples, width, |i| {
        let i = i as u64;
        let a = sample_rotation(n, seed, 2 * i, cap)?;
        let b = sample_rotation(n, seed, 2 * i + 1, cap)?;
        let before: Vec<Vec<f64>> = syms
            .iter()
            .map(|sym| singular_profile(sym, &a, &b))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(width);
        for form in forms {
            let fa = form.apply(&a)?;
            let fb = form.apply(&b)?;
            for (si, sym) in syms.iter().enumerate() {
                let after = singular_profile(sym, &fa, &fb)?;
                for nspec in &norms {
                    let d0 = evaluate_from_singular_values(nspec, &before[si])?;
                    let d1 = evaluate_from_singular_values(nspec, &after)?;
                    out.push((d0 - d1).abs());
                }
            }
        }
        Ok(out)
    })?;
    let mut metrics = Vec::with_capacity(width);
    let mut idx = 0;
    for form in forms {
        for sym in &syms {
            for nspec in &norms {
                metrics.push((
                    format!("{}/{}/{}", form.tag(), sym.name(), nspec),
                    worst[idx],
                ));
                idx += 1;
            }
        }
    }
    let pass = worst.iter().all(|r| *r <= tol);
    Ok(SuiteReport::new(suite, pass, metrics))
}

/// Conjugation and inverted conjugation preserve every distance in the
/// battery, in any dimension.
pub fn conjugation(n: usize, samples: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    let forms = vec![
        seeded_form(FormTag::Conjugate, n, seed, 0)?,
        seeded_form(FormTag::ConjugateInverse, n, seed, 1)?,
    ];
    preservation_suite("conjugation", &forms, samples, seed, tol)
}

/// The two involution-twisted forms preserve every distance in the
/// battery in dimension four, away from the half-turn guard band.
pub fn twist(samples: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    let forms = vec![
        seeded_form(FormTag::TildeTwist, 4, seed, 0)?,
        seeded_form(FormTag::TildeTwistNegated, 4, seed, 1)?,
    ];
    preservation_suite("twist", &forms, samples, seed, tol)
}

/// The involution commutes with the composition series at the level of
/// eigenvalue multisets: `log(exp X exp Y)` and its image under the
/// involution of both factors have matching spectra.
pub fn bch_spectrum(samples: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::InsufficientSamples { need: 1, got: 0 });
    }
    let worst = sweep::try_max_over(samples, |i| {
        let i = i as u64;
        let x = random_skew_spectral_capped(4, 1.0, 0.5, derive(seed, 2 * i))?;
        let y = random_skew_spectral_capped(4, 1.0, 0.5, derive(seed, 2 * i + 1))?;
        isometry::involution_spectrum_gap(&x, &y)
    })?;
    Ok(SuiteReport::new(
        "bch-spectrum",
        worst <= tol,
        vec![("max_eigenvalue_gap".into(), worst)],
    ))
}

/// Jordan structure of the forms with identity offset: conjugation
/// and inverted conjugation preserve the triple product `A B A` and
/// signed powers exactly, and those residuals are gated.  The twisted
/// form's signed-power residuals are gated too (the involution is
/// linear on generators).  Its triple-product residual is reported
/// without a gate: on draws clear of the half-turn cut it also
/// vanishes, because the twist acts on the two isoclinic factors as
/// identity and inversion, both of which preserve triples, but the
/// identity needs every operand inside the branch domain.
pub fn jordan(n: usize, samples: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::InsufficientSamples { need: 1, got: 0 });
    }
    let form_a = IsometryForm::new(
        FormTag::Conjugate,
        seeded_orthogonal(n, derive(seed, FORM_SLOT))?,
        Rotation::identity(n),
    )?;
    let form_b = IsometryForm::new(
        FormTag::ConjugateInverse,
        seeded_orthogonal(n, derive(seed, FORM_SLOT + 1))?,
        Rotation::identity(n),
    )?;
    let form_c = if n == 4 {
        Some(IsometryForm::new(
            FormTag::TildeTwist,
            seeded_orthogonal(4, derive(seed, FORM_SLOT + 2))?,
            Rotation::identity(4),
        )?)
    } else {
        None
    };
    let powers: [i64; 3] = [2, 3, -1];
    let per_form = 1 + powers.len();
    let width = 2 * per_form + if form_c.is_some() { per_form } else { 0 };

    let triple_residual = |form: &IsometryForm, a: &Rotation, b: &Rotation| -> Result<f64> {
        let lhs = form.apply(&triple(a, b)?)?;
        let rhs = triple(&form.apply(a)?, &form.apply(b)?)?;
        Ok(lhs.body().sub(rhs.body()).frobenius_norm())
    };
    let power_residual = |form: &IsometryForm, a: &Rotation, k: i64| -> Result<f64> {
        let lhs = form.apply(&a.pow(k))?;
        let rhs = form.apply(a)?.pow(k);
        Ok(lhs.body().sub(rhs.body()).frobenius_norm())
    };

    let worst = sweep::try_max_vectors(samples, width, |i| {
        let i = i as u64;
        let a = random_so(n, derive(seed, 4 * i))?;
        let b = random_so(n, derive(seed, 4 * i + 1))?;
        let mut out = Vec::with_capacity(width);
        for form in [&form_a, &form_b] {
            out.push(triple_residual(form, &a, &b)?);
            for k in powers {
                out.push(power_residual(form, &a, k)?);
            }
        }
        if let Some(form) = &form_c {
            // Capped draws keep A, B, powers up to 3, and A B A clear
            // of the logarithm guard: 3 * 0.3 pi = 0.9 pi.
            let ac = exp_skew(&random_skew_spectral_capped(
                4,
                1.0,
                0.3 * PI,
                derive(seed, 4 * i + 2),
            )?);
            let bc = exp_skew(&random_skew_spectral_capped(
                4,
                1.0,
                0.3 * PI,
                derive(seed, 4 * i + 3),
            )?);
            out.push(triple_residual(form, &ac, &bc)?);
            for k in powers {
                out.push(power_residual(form, &ac, k)?);
            }
        }
        Ok(out)
    })?;

    let mut metrics = Vec::with_capacity(width);
    let mut idx = 0;
    let mut gated_max = 0.0f64;
    let push_block = |tag: FormTag,
                      metrics: &mut Vec<(String, f64)>,
                      idx: &mut usize,
                      gated_max: &mut f64,
                      gate_triple: bool| {
        let t = worst[*idx];
        metrics.push((format!("{tag}/triple"), t));
        if gate_triple {
            *gated_max = gated_max.max(t);
        }
        *idx += 1;
        for k in powers {
            let v = worst[*idx];
            let name = if k < 0 {
                format!("{tag}/pow_inverse")
            } else {
                format!("{tag}/pow{k}")
            };
            metrics.push((name, v));
            *gated_max = gated_max.max(v);
            *idx += 1;
        }
    };
    push_block(FormTag::Conjugate, &mut metrics, &mut idx, &mut gated_max, true);
    push_block(FormTag::ConjugateInverse, &mut metrics, &mut idx, &mut gated_max, true);
    if form_c.is_some() {
        push_block(FormTag::TildeTwist, &mut metrics, &mut idx, &mut gated_max, false);
    }
    Ok(SuiteReport::new("jordan", gated_max <= tol, metrics))
}

/// The metric-space conditions behind the rigidity argument, sampled
/// for a seeded nearby pair.
pub fn metric_conditions(
    spec: &DistanceSpec,
    n: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let a = random_so(n, derive(seed, FORM_SLOT))?;
    let w = random_skew(n, 1.0, derive(seed, FORM_SLOT + 1))?;
    let b = a.compose(&exp_skew(&w.scale(0.05 / w.frobenius_norm())))?;
    let report = check_metric_conditions(spec, &a, &b, samples, seed)?;
    let metrics = vec![
        ("reflection_invariance".into(), report.reflection_invariance),
        (
            "double_reflection_invariance".into(),
            report.double_reflection_invariance,
        ),
        ("member_count".into(), report.member_count as f64),
        ("bisection_radius".into(), report.bisection_radius),
        (
            "min_doubling_ratio".into(),
            report.min_doubling_ratio.unwrap_or(-1.0),
        ),
        ("doubling_reference".into(), report.doubling_reference),
    ];
    Ok(SuiteReport::new("metric-conditions", report.all_pass(tol), metrics))
}

/// In three dimensions the nonzero singular values of a generator come
/// in one equal pair, so the Frobenius norm is exactly `sqrt(2)` times
/// the operator norm on generators.
pub fn generator_norms(samples: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::InsufficientSamples { need: 1, got: 0 });
    }
    let worst = sweep::try_max_vectors(samples, 3, |i| {
        let x = random_skew(3, 1.0, derive(seed, i as u64))?;
        // Generators are normal, so singular values are eigenvalue
        // moduli; this avoids the Gram route's sqrt(eps) floor.
        let mut sv: Vec<f64> = linalg::eig_normal(&x.complexify())?
            .values
            .iter()
            .map(|z| z.norm())
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let scale = sv[0].max(1.0);
        let fro = x.frobenius_norm();
        Ok(vec![
            (fro - 2.0f64.sqrt() * sv[0]).abs() / scale,
            (sv[0] - sv[1]).abs() / scale,
            sv[2].abs() / scale,
        ])
    })?;
    let metrics = vec![
        ("fro_vs_sqrt2_op".into(), worst[0]),
        ("top_pair_gap".into(), worst[1]),
        ("third_value".into(), worst[2]),
    ];
    let pass = worst.iter().all(|r| *r <= tol);
    Ok(SuiteReport::new("generator-norms", pass, metrics))
}

/// The twisted form is neither multiplicative nor antimultiplicative:
/// some single pair defeats both readings at once, which separates it
/// from every conjugation-type form.
pub fn distinguish_twist(samples: usize, seed: u64, min_joint: f64) -> Result<SuiteReport> {
    let form = IsometryForm::plain(FormTag::TildeTwist, 4)?;
    let r = isometry::homomorphism_residual(&form, samples, seed)?;
    let metrics = vec![
        ("mult".into(), r.mult),
        ("antimult".into(), r.antimult),
        ("joint".into(), r.joint),
    ];
    Ok(SuiteReport::new("distinguish-twist", r.joint >= min_joint, metrics))
}

/// Deviation sweep over an explicit input/output table.
pub fn maptable(
    table: &MapTable,
    spec: &DistanceSpec,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let dev = isometry::max_deviation_table(table, spec, samples, seed)?;
    Ok(SuiteReport::new(
        "maptable",
        dev <= tol,
        vec![("max_deviation".into(), dev)],
    ))
}

/// The full battery at standard tolerances.
pub fn run_all(samples: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    let fro = DistanceSpec::new(NormSpec::frobenius(), ScalarSymbol::ZMinusOne);
    Ok(vec![
        conjugation(3, samples, seed, 1e-9)?,
        conjugation(4, samples, derive(seed, 1), 1e-9)?,
        twist(samples, derive(seed, 2), 1e-7)?,
        bch_spectrum(samples, derive(seed, 3), 1e-8)?,
        jordan(3, samples, derive(seed, 4), 1e-9)?,
        jordan(4, samples, derive(seed, 5), 1e-7)?,
        metric_conditions(&fro, 3, samples, derive(seed, 6), 1e-10)?,
        generator_norms(samples, derive(seed, 7), 1e-12)?,
        distinguish_twist(samples, derive(seed, 8), 0.1)?,
    ])
}
