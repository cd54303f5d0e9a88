//! `rotdist`: distances, decompositions and verification sweeps on
//! the rotation group, over plain-text matrix files.
//!
//! Every command prints one JSON record per result with the fields
//! `command`, `inputs`, and `value` or `report`.  Identical arguments
//! and seeds produce byte-identical output.  Exit codes: 0 on
//! success or all-pass, 1 on a verification failure, 2 on usage or
//! input errors (reported on stderr).

mod json;

use clap::{Parser, Subcommand};
use json::{record, Value};
use rotdist_core::distance::{dist, geodesic_distance, norm_distance, DistanceSpec};
use rotdist_core::isometry::{FormTag, IsometryForm, MapTable};
use rotdist_core::linalg::RealMatrix;
use rotdist_core::norms::NormSpec;
use rotdist_core::rotation::{exp_skew, log_so, Rotation};
use rotdist_core::scalarfun::{check_axioms, AxiomCheck, ScalarSymbol};
use rotdist_core::skewsym::{bch_numeric, bch_series3, tilde, youla, SkewMatrix};
use rotdist_core::verify::{self, SuiteReport};
use rotdist_core::textmat;
use std::path::{Path, PathBuf};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "rotdist",
    version,
    about = "Distances, decompositions and verification sweeps on the rotation group"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance N(f(A^-1 B)) between two rotation files.
    Dist {
        /// Norm spec, e.g. `op`, `fro`, `schatten:3`, `kyfan:2`,
        /// `c:1,0.5,0.25`, optionally with a multiplier like `2*fro`.
        #[arg(long, default_value = "fro")]
        norm: String,
        /// Scalar symbol: `zminus1` or `log`.
        #[arg(long = "f", default_value = "zminus1")]
        symbol: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Geodesic distance: Frobenius norm of the relative logarithm.
    Geodist { a: PathBuf, b: PathBuf },
    /// Extrinsic distance N(A - B).
    Normdist {
        #[arg(long, default_value = "fro")]
        norm: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Exponential of a skew-symmetric matrix file.
    Exp {
        x: PathBuf,
        /// Also write the resulting matrix as plain text to a file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal logarithm of a rotation file.
    Log {
        a: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plane decomposition of a skew-symmetric file: orthogonal basis
    /// and descending block parameters.
    Youla { x: PathBuf },
    /// The linear involution on 4x4 skew-symmetric matrices.
    Tilde {
        x: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// log(exp X exp Y) for two skew-symmetric files.
    Bch {
        /// Use the third-order series instead of the numeric value.
        #[arg(long)]
        series: bool,
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one of the candidate isometry forms to a rotation file.
    Applyform {
        /// Form tag: a (conjugation), b (inverted conjugation),
        /// c / d (involution twists, dimension four).
        #[arg(long)]
        form: String,
        /// Orthogonal conjugator file; identity when omitted.
        #[arg(long = "Q")]
        q: Option<PathBuf>,
        /// Left offset rotation file; identity when omitted.
        #[arg(long = "P0")]
        p0: Option<PathBuf>,
        a: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the admissibility axioms of a scalar symbol on a grid.
    Checkf {
        #[arg(long = "f", default_value = "log")]
        symbol: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Run a verification suite and report pass/fail with residuals.
    Verify {
        /// One of: all, conjugation, twist, bch-spectrum, jordan,
        /// metric-conditions, generator-norms, distinguish-twist,
        /// maptable.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Gate tolerance; each suite has a standard default.
        #[arg(long)]
        tol: Option<f64>,
        /// Distance used by the metric-conditions and maptable suites.
        #[arg(long, default_value = "fro")]
        norm: String,
        #[arg(long = "f", default_value = "zminus1")]
        symbol: String,
        /// Input/output table file for the maptable suite.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn read_matrix(path: &Path) -> CliResult<RealMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    textmat::parse_single(&text)
        .map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_rotation(path: &Path) -> CliResult<Rotation> {
    Rotation::new(read_matrix(path)?)
        .map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_skew(path: &Path) -> CliResult<SkewMatrix> {
    SkewMatrix::new(read_matrix(path)?)
        .map_err(|e| format!("{}: {e}", path.display()).into())
}

fn parse_spec(norm: &str, symbol: &str) -> CliResult<DistanceSpec> {
    let norm: NormSpec = norm.parse()?;
    let symbol: ScalarSymbol = symbol.parse()?;
    Ok(DistanceSpec::new(norm, symbol))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn write_out(out: &Option<PathBuf>, m: &RealMatrix) -> CliResult<()> {
    if let Some(path) = out {
        std::fs::write(path, textmat::format_matrix(m))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn emit_matrix(
    command: &str,
    inputs: &[String],
    m: &RealMatrix,
    out: &Option<PathBuf>,
) -> CliResult<i32> {
    write_out(out, m)?;
    println!("{}", record(command, inputs, "value", Value::matrix(m)));
    Ok(0)
}

fn run(command: Command) -> CliResult<i32> {
    match command {
        Command::Dist { norm, symbol, a, b } => {
            let spec = parse_spec(&norm, &symbol)?;
            let value = dist(&spec, &read_rotation(&a)?, &read_rotation(&b)?)?;
            println!(
                "{}",
                record(
                    "dist",
                    &[path_str(&a), path_str(&b)],
                    "value",
                    Value::Num(value)
                )
            );
            Ok(0)
        }
        Command::Geodist { a, b } => {
            let value = geodesic_distance(&read_rotation(&a)?, &read_rotation(&b)?)?;
            println!(
                "{}",
                record(
                    "geodist",
                    &[path_str(&a), path_str(&b)],
                    "value",
                    Value::Num(value)
                )
            );
            Ok(0)
        }
        Command::Normdist { norm, a, b } => {
            let norm: NormSpec = norm.parse()?;
            let value = norm_distance(&norm, &read_rotation(&a)?, &read_rotation(&b)?)?;
            println!(
                "{}",
                record(
                    "normdist",
                    &[path_str(&a), path_str(&b)],
                    "value",
                    Value::Num(value)
                )
            );
            Ok(0)
        }
        Command::Exp { x, out } => {
            let r = exp_skew(&read_skew(&x)?);
            emit_matrix("exp", &[path_str(&x)], r.body(), &out)
        }
        Command::Log { a, out } => {
            let g = log_so(&read_rotation(&a)?)?;
            emit_matrix("log", &[path_str(&a)], g.body(), &out)
        }
        Command::Youla { x } => {
            let form = youla(&read_skew(&x)?)?;
            let value = Value::obj(vec![
                ("lambdas", Value::floats(&form.lambdas)),
                ("q", Value::matrix(&form.q)),
            ]);
            println!("{}", record("youla", &[path_str(&x)], "value", value));
            Ok(0)
        }
        Command::Tilde { x, out } => {
            let t = tilde(&read_skew(&x)?)?;
            emit_matrix("tilde", &[path_str(&x)], t.body(), &out)
        }
        Command::Bch { series, x, y, out } => {
            let xm = read_skew(&x)?;
            let ym = read_skew(&y)?;
            let z = if series {
                bch_series3(&xm, &ym)?
            } else {
                bch_numeric(&xm, &ym)?
            };
            emit_matrix("bch", &[path_str(&x), path_str(&y)], z.body(), &out)
        }
        Command::Applyform { form, q, p0, a, out } => {
            let tag: FormTag = form.parse()?;
            let rot = read_rotation(&a)?;
            let n = rot.n();
            let qm = match &q {
                Some(path) => read_matrix(path)?,
                None => RealMatrix::identity(n),
            };
            let pm = match &p0 {
                Some(path) => read_rotation(path)?,
                None => Rotation::identity(n),
            };
            let form = IsometryForm::new(tag, qm, pm)?;
            let image = form.apply(&rot)?;
            emit_matrix("applyform", &[path_str(&a)], image.body(), &out)
        }
        Command::Checkf { symbol, grid } => {
            let f: ScalarSymbol = symbol.parse()?;
            let report = check_axioms(&f, grid)?;
            let check = |c: &AxiomCheck| {
                Value::obj(vec![
                    ("pass", Value::Bool(c.pass)),
                    ("measured", Value::Num(c.measured)),
                ])
            };
            let tail = Value::obj(vec![
                ("symbol", Value::str(f.name())),
                ("grid", Value::Int(report.grid as i64)),
                (
                    "zero_only_at_identity",
                    check(&report.zero_only_at_identity),
                ),
                ("conformal_at_identity", check(&report.conformal_at_identity)),
                (
                    "continuous_away_from_minus_one",
                    check(&report.continuous_away_from_minus_one),
                ),
                (
                    "left_limit_at_minus_one_matches",
                    check(&report.left_limit_at_minus_one_matches),
                ),
                (
                    "right_limit_at_minus_one_nonzero",
                    check(&report.right_limit_at_minus_one_nonzero),
                ),
                ("all_pass", Value::Bool(report.all_pass())),
            ]);
            println!("{}", record("checkf", &[], "report", tail));
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Verify {
            suite,
            n,
            samples,
            seed,
            tol,
            norm,
            symbol,
            table,
        } => run_verify(&suite, n, samples, seed, tol, &norm, &symbol, table.as_deref()),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    suite: &str,
    n: usize,
    samples: usize,
    seed: u64,
    tol: Option<f64>,
    norm: &str,
    symbol: &str,
    table: Option<&Path>,
) -> CliResult<i32> {
    let inputs: Vec<String> = table.iter().map(|p| path_str(p)).collect();
    let reports: Vec<SuiteReport> = match suite {
        "all" => verify::run_all(samples, seed)?,
        "conjugation" => vec![verify::conjugation(n, samples, seed, tol.unwrap_or(1e-9))?],
        "twist" => vec![verify::twist(samples, seed, tol.unwrap_or(1e-7))?],
        "bch-spectrum" => vec![verify::bch_spectrum(samples, seed, tol.unwrap_or(1e-8))?],
        "jordan" => {
            let default = if n == 4 { 1e-7 } else { 1e-9 };
            vec![verify::jordan(n, samples, seed, tol.unwrap_or(default))?]
        }
        "metric-conditions" => {
            let spec = parse_spec(norm, symbol)?;
            vec![verify::metric_conditions(
                &spec,
                n,
                samples,
                seed,
                tol.unwrap_or(1e-10),
            )?]
        }
        "generator-norms" => {
            vec![verify::generator_norms(samples, seed, tol.unwrap_or(1e-12))?]
        }
        "distinguish-twist" => {
            vec![verify::distinguish_twist(samples, seed, tol.unwrap_or(0.1))?]
        }
        "maptable" => {
            let path = table.ok_or("the maptable suite needs --table <file>")?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let parsed = MapTable::parse(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let spec = parse_spec(norm, symbol)?;
            vec![verify::maptable(
                &parsed,
                &spec,
                samples,
                seed,
                tol.unwrap_or(1e-9),
            )?]
        }
        other => {
            return Err(format!(
                "unknown suite '{other}'; expected one of all, conjugation, twist, \
                 bch-spectrum, jordan, metric-conditions, generator-norms, \
                 distinguish-twist, maptable"
            )
            .into())
        }
    };
    let mut all_pass = true;
    for r in &reports {
        all_pass &= r.pass;
        let metrics = Value::Obj(
            r.metrics
                .iter()
                .map(|(k, v)| (k.clone(), Value::Num(*v)))
                .collect(),
        );
        let tail = Value::obj(vec![
            ("suite", Value::str(r.suite.clone())),
            ("pass", Value::Bool(r.pass)),
            ("metrics", metrics),
        ]);
        println!("{}", record("verify", &inputs, "report", tail));
    }
    Ok(if all_pass { 0 } else { 1 })
}
