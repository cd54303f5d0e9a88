//! Acceptance battery: twelve numbered criteria covering the
//! classification sweeps, the algebraic identities behind them, and
//! the command-line contract.  Each test prints one pass/fail line
//! (visible with `--nocapture`) and then asserts, so the harness
//! summary also shows one line per criterion.

use rotdist_core::distance::{dist, geodesic_distance, DistanceSpec};
use rotdist_core::isometry::{
    check_metric_conditions, max_deviation_table, FormTag, IsometryForm, MapTable,
};
use rotdist_core::linalg::{self, RealMatrix};
use rotdist_core::norms::NormSpec;
use rotdist_core::rotation::{exp_skew, log_so, random_so, Rotation};
use rotdist_core::scalarfun::{doubling_constant, ScalarSymbol};
use rotdist_core::seedmix::derive;
use rotdist_core::skewsym::{
    bch_numeric, bch_series3, random_skew, random_skew_spectral_capped,
};
use rotdist_core::verify;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::time::Instant;

fn report(num: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {num:02} {name}: {verdict} ({detail})");
    assert!(pass, "criterion {num:02} {name}: {verdict} ({detail})");
}

fn max_metric(reports: &[verify::SuiteReport]) -> f64 {
    reports
        .iter()
        .flat_map(|r| r.metrics.iter().map(|(_, v)| *v))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn rotation_z(theta: f64) -> Rotation {
    let (s, c) = theta.sin_cos();
    let mut m = RealMatrix::identity(3);
    m[(0, 0)] = c;
    m[(0, 1)] = -s;
    m[(1, 0)] = s;
    m[(1, 1)] = c;
    Rotation::new(m).unwrap()
}

/// Conjugation and inverted conjugation preserve every distance in
/// the norm/symbol grid on SO(3)..SO(6): 200 pairs per dimension,
/// residual at most 1e-9, within a 60 second budget.
#[test]
fn criterion_01_conjugation_sufficiency_n3_to_n6() {
    let start = Instant::now();
    let tol = 1e-9;
    let mut reports = Vec::new();
    for n in 3..=6 {
        reports.push(verify::conjugation(n, 200, derive(101, n as u64), tol).unwrap());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let worst = max_metric(&reports);
    let pass = reports.iter().all(|r| r.pass) && elapsed <= 60.0;
    report(
        1,
        "conjugation sufficiency n=3..6",
        pass,
        &format!("max deviation {worst:.2e} vs tol {tol:.0e}; {elapsed:.1} s of 60 s"),
    );
}

/// The two involution-twisted forms preserve the same grid on SO(4)
/// away from half-turns: 200 guarded pairs, residual at most 1e-7,
/// within 30 seconds.
#[test]
fn criterion_02_twist_sufficiency_so4() {
    let start = Instant::now();
    let tol = 1e-7;
    let r = verify::twist(200, 102, tol).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = max_metric(std::slice::from_ref(&r));
    let pass = r.pass && elapsed <= 30.0;
    report(
        2,
        "twist sufficiency on SO(4)",
        pass,
        &format!("max deviation {worst:.2e} vs tol {tol:.0e}; {elapsed:.1} s of 30 s"),
    );
}

/// log(exp X exp Y) and log(exp X~ exp Y~) share an eigenvalue
/// multiset: 500 seeded pairs with spectral norm at most 0.5, gap at
/// most 1e-8, within 20 seconds.
#[test]
fn criterion_03_bch_spectrum_under_the_involution() {
    let start = Instant::now();
    let tol = 1e-8;
    let r = verify::bch_spectrum(500, 103, tol).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = max_metric(std::slice::from_ref(&r));
    let pass = r.pass && elapsed <= 20.0;
    report(
        3,
        "bch spectrum invariance",
        pass,
        &format!("max eigenvalue gap {worst:.2e} vs tol {tol:.0e}; {elapsed:.1} s of 20 s"),
    );
}

/// The twisted form is neither a conjugation nor an inverted
/// conjugation: within 50 seeded pairs some single pair defeats both
/// readings with residual at least 0.1.
#[test]
fn criterion_04_twist_is_not_a_conjugation_either_way() {
    let min_joint = 0.1;
    let r = verify::distinguish_twist(50, 104, min_joint).unwrap();
    let joint = r
        .metrics
        .iter()
        .find(|(k, _)| k == "joint")
        .map(|(_, v)| *v)
        .unwrap();
    report(
        4,
        "twist distinguishability",
        r.pass && joint >= min_joint,
        &format!("best single-pair joint residual {joint:.3} vs floor {min_joint}"),
    );
}

/// On 3x3 skew matrices the Frobenius norm equals sqrt(2) times the
/// top singular value exactly: absolute residual at most 1e-12 over
/// 100 seeded draws.
#[test]
fn criterion_05_frobenius_is_sqrt2_times_top_singular_value_on_k3() {
    let mut worst = 0.0_f64;
    for k in 0..100 {
        let x = random_skew(3, 1.0, derive(105, k)).unwrap();
        let eig = linalg::eig_normal(&x.complexify()).unwrap();
        let sigma1 = eig
            .values
            .iter()
            .map(|z| z.norm())
            .fold(f64::NEG_INFINITY, f64::max);
        let resid = (x.frobenius_norm() - SQRT_2 * sigma1).abs();
        worst = worst.max(resid);
    }
    report(
        5,
        "Frobenius = sqrt(2) * sigma_1 on 3x3 skews",
        worst <= 1e-12,
        &format!("max |fro - sqrt2*sigma1| = {worst:.2e} vs tol 1e-12"),
    );
}

/// Exponential then principal logarithm returns the generator: 200
/// seeded inputs across n = 3..6 with top angle capped at 3.0,
/// relative residual at most 1e-9.
#[test]
fn criterion_06_exp_log_roundtrip() {
    let mut worst = 0.0_f64;
    for k in 0..200u64 {
        let n = 3 + (k % 4) as usize;
        let x = random_skew_spectral_capped(n, 1.0, 3.0, derive(106, k)).unwrap();
        let back = log_so(&exp_skew(&x)).unwrap();
        let err = back.body().sub(x.body()).frobenius_norm();
        let rel = err / (1.0 + x.frobenius_norm());
        worst = worst.max(rel);
    }
    report(
        6,
        "exp/log round trip",
        worst <= 1e-9,
        &format!("max relative residual {worst:.2e} vs tol 1e-9"),
    );
}

/// Geodesic distances from the identity take their closed-form
/// values: sqrt(2)*theta for a planar rotation and sqrt(2)*pi for
/// the half-turn diag(-1,-1,1).
#[test]
fn criterion_07_geodesic_closed_forms() {
    let id = Rotation::identity(3);
    let mut worst_planar = 0.0_f64;
    for theta in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let d = geodesic_distance(&id, &rotation_z(theta)).unwrap();
        worst_planar = worst_planar.max((d - SQRT_2 * theta).abs());
    }
    let mut half = RealMatrix::identity(3);
    half[(0, 0)] = -1.0;
    half[(1, 1)] = -1.0;
    let half_turn = Rotation::new(half).unwrap();
    let d_half = geodesic_distance(&id, &half_turn).unwrap();
    let half_resid = (d_half - SQRT_2 * PI).abs();
    let pass = worst_planar <= 1e-10 && half_resid <= 1e-9;
    report(
        7,
        "geodesic closed forms",
        pass,
        &format!(
            "planar residual {worst_planar:.2e} vs 1e-10; half-turn residual {half_resid:.2e} vs 1e-9"
        ),
    );
}

/// Doubling constants of the admissible symbols on |t| <= pi/2: the
/// logarithm doubles distances exactly, z - 1 scales them by
/// sqrt(2), both within 1e-9.
#[test]
fn criterion_08_doubling_constants() {
    let k_log = doubling_constant(&ScalarSymbol::PrincipalLog, FRAC_PI_2).unwrap();
    let k_z = doubling_constant(&ScalarSymbol::ZMinusOne, FRAC_PI_2).unwrap();
    let r_log = (k_log - 2.0).abs();
    let r_z = (k_z - SQRT_2).abs();
    let pass = r_log <= 1e-9 && r_z <= 1e-9;
    report(
        8,
        "doubling constants",
        pass,
        &format!("|K_log - 2| = {r_log:.2e}, |K_zminus1 - sqrt2| = {r_z:.2e} vs 1e-9"),
    );
}

/// Every distance in the grid is bi-invariant, and the sampled
/// reflection conditions hold: all residuals at most 1e-10 over 100
/// seeded triples per norm/symbol pair.
#[test]
fn criterion_09_translation_and_reflection_invariance() {
    let symbols = [ScalarSymbol::ZMinusOne, ScalarSymbol::PrincipalLog];
    let mut worst = 0.0_f64;
    for (si, symbol) in symbols.iter().enumerate() {
        for (ni, norm) in verify::criterion_norms(3).into_iter().enumerate() {
            let spec = DistanceSpec::new(norm, symbol.clone());
            let pair_seed = derive(109, (si * 16 + ni) as u64);
            for t in 0..100u64 {
                let a = random_so(3, derive(pair_seed, 3 * t)).unwrap();
                let b = random_so(3, derive(pair_seed, 3 * t + 1)).unwrap();
                let g = random_so(3, derive(pair_seed, 3 * t + 2)).unwrap();
                let base = dist(&spec, &a, &b).unwrap();
                let left = dist(&spec, &g.compose(&a).unwrap(), &g.compose(&b).unwrap()).unwrap();
                let right = dist(&spec, &a.compose(&g).unwrap(), &b.compose(&g).unwrap()).unwrap();
                worst = worst.max((left - base).abs()).max((right - base).abs());
            }
        }
    }
    let spec = DistanceSpec::new(
        "fro".parse::<NormSpec>().unwrap(),
        ScalarSymbol::ZMinusOne,
    );
    let a = random_so(3, derive(109, 9001)).unwrap();
    let w = random_skew(3, 1.0, derive(109, 9002)).unwrap();
    let b = a
        .compose(&exp_skew(&w.scale(0.05 / w.frobenius_norm())))
        .unwrap();
    let cond = check_metric_conditions(&spec, &a, &b, 50, derive(109, 9003)).unwrap();
    let refl = cond
        .reflection_invariance
        .max(cond.double_reflection_invariance);
    let pass = worst <= 1e-10 && refl <= 1e-10;
    report(
        9,
        "translation and reflection invariance",
        pass,
        &format!("max translation residual {worst:.2e}; max reflection residual {refl:.2e} vs 1e-10"),
    );
}

/// The unital conjugation forms respect the Jordan triple product
/// and signed powers k in {2, 3, -1}: residuals at most 1e-9 over
/// 100 seeded pairs.
#[test]
fn criterion_10_jordan_triple_and_power_compatibility() {
    let tol = 1e-9;
    let r = verify::jordan(3, 100, 110, tol).unwrap();
    let worst = max_metric(std::slice::from_ref(&r));
    report(
        10,
        "Jordan triple and power compatibility",
        r.pass,
        &format!("max gated residual {worst:.2e} vs tol {tol:.0e}"),
    );
}

/// Negative control: corrupting one output of an otherwise exact
/// conjugation table by 1e-2 drives the sweep deviation above 1e-3
/// and makes the command-line verifier exit with code 1.
#[test]
fn criterion_11_corrupted_table_is_rejected() {
    let q = random_so(3, derive(111, 0)).unwrap();
    let p0 = random_so(3, derive(111, 1)).unwrap();
    let form = IsometryForm::new(FormTag::Conjugate, q.body().clone(), p0).unwrap();
    let mut entries = Vec::new();
    for i in 0..6u64 {
        let input = random_so(3, derive(111, 2 + i)).unwrap();
        let output = form.apply(&input).unwrap();
        entries.push((input, output));
    }
    // Nudge one output off the group and project it back.
    let mut m = entries[2].1.body().clone();
    m[(0, 1)] += 1e-2;
    let factors = linalg::qr(&m).unwrap();
    let mut qm = factors.q;
    if linalg::det(&qm).unwrap() < 0.0 {
        for i in 0..3 {
            qm[(i, 2)] = -qm[(i, 2)];
        }
    }
    entries[2].1 = Rotation::new(qm).unwrap();
    let table = MapTable::new(entries).unwrap();

    let spec = DistanceSpec::new(
        "fro".parse::<NormSpec>().unwrap(),
        ScalarSymbol::ZMinusOne,
    );
    let dev = max_deviation_table(&table, &spec, 1000, 0).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.mat");
    std::fs::write(&path, table.format()).unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_rotdist"))
        .args([
            "verify",
            "--suite",
            "maptable",
            "--table",
            path.to_str().unwrap(),
            "--samples",
            "1000",
            "--seed",
            "0",
        ])
        .output()
        .unwrap();
    let code = out.status.code();
    let pass = dev >= 1e-3 && code == Some(1);
    report(
        11,
        "corrupted table rejected",
        pass,
        &format!("max deviation {dev:.2e} (floor 1e-3); verify exit code {code:?} (want 1)"),
    );
}

/// The third-order series truncation error scales at fourth order:
/// halving the input scale from 0.1 to 0.05 shrinks the gap to the
/// numeric value by a factor between 12 and 20 on average.
#[test]
fn criterion_12_bch_truncation_order() {
    let gap = |x: &rotdist_core::skewsym::SkewMatrix,
               y: &rotdist_core::skewsym::SkewMatrix,
               s: f64| {
        let xs = x.scale(s);
        let ys = y.scale(s);
        let series = bch_series3(&xs, &ys).unwrap();
        let numeric = bch_numeric(&xs, &ys).unwrap();
        series.body().sub(numeric.body()).frobenius_norm()
    };
    let mut sum = 0.0;
    for k in 0..50u64 {
        let x = random_skew(4, 1.0, derive(112, 2 * k)).unwrap();
        let y = random_skew(4, 1.0, derive(112, 2 * k + 1)).unwrap();
        let x = x.scale(1.0 / x.frobenius_norm());
        let y = y.scale(1.0 / y.frobenius_norm());
        sum += gap(&x, &y, 0.1) / gap(&x, &y, 0.05);
    }
    let mean = sum / 50.0;
    let pass = (12.0..=20.0).contains(&mean);
    report(
        12,
        "bch truncation order",
        pass,
        &format!("mean error shrink factor {mean:.2} (want within [12, 20])"),
    );
}
