//! `warpstab` command-line front end.
//!
//! Exit status: 0 when a command produced its result (a verdict of
//! "unstable" is a result), 1 when a verification or table regression did
//! not pass, 2 for invalid input, 3 when the numerics could not decide.

mod args;
mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use warpstab_core::atlas::{self, AtlasOptions};
use warpstab_core::coupledforms::{
    cosh_strict_constant, cosh_v4_coefficient_check, lambda_crit_bracket, q_sweep, CoshSubspace,
    NumericQOracle,
};
use warpstab_core::criteria::{
    classify_cosh_cylinder, classify_flat_cylinder, classify_sin_cone, FiberSpectrum,
    QPositivityOracle, StabilityClass,
};
use warpstab_core::spectral1d::{verify_lemma_cosh, verify_lemma_sin, verify_sin_zero, Grid};
use warpstab_core::{Error, Executor};

pub use args::{Cli, Command, Format};
pub use report::{render, QRow, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Why a command did not produce a report.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    run_cli(&cli, out, err)
}

pub fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match cli.jobs {
        Some(0) => Err(Failure::Invalid("--jobs must be at least 1".into())),
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Err(Failure::Invalid(format!("cannot start {jobs} worker threads: {e}"))),
        },
        None => dispatch(cli),
    };
    match outcome {
        Ok(report) => match render(&report, cli.format) {
            Ok(text) => {
                if let Err(e) = out.write_all(text.as_bytes()) {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    return EXIT_FAILED;
                }
                if report.passed() {
                    EXIT_OK
                } else {
                    EXIT_FAILED
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_INVALID
            }
        },
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.exit_code()
        }
    }
}

fn executor(cli: &Cli) -> Executor {
    if cli.jobs == Some(1) {
        Executor::Sequential
    } else {
        Executor::Parallel
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let exec = executor(cli);
    match &cli.command {
        Command::Classify { target } => classify(target, exec),
        Command::Verify { check } => verify(check),
        Command::Sweep { kind } => sweep(kind, exec),
        Command::Tables(t) => tables(t, exec),
    }
}

fn finite(name: &str, v: f64) -> std::result::Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Invalid(format!("--{name} must be finite, got {v}")))
    }
}

fn kappa_for(class: StabilityClass) -> f64 {
    match class {
        StabilityClass::Unstable => -1.0,
        StabilityClass::Stable => 0.0,
        StabilityClass::StrictlyStable => 1.0,
    }
}

fn sin_fiber(a: &args::SinArgs) -> std::result::Result<FiberSpectrum, Failure> {
    if let Some(line) = &a.record {
        return Ok(atlas::parse_line(line, 1)?.fiber_spectrum());
    }
    let n = a.n.ok_or_else(|| Failure::Invalid("--n is required".into()))?;
    if a.round_sphere {
        return Ok(FiberSpectrum::round_sphere(n));
    }
    let stated = [a.kappa_min.is_some(), a.fiber.is_some(), a.fiber_stable]
        .iter()
        .filter(|&&b| b)
        .count();
    if stated != 1 {
        return Err(Failure::Invalid(
            "give exactly one of --kappa-min, --fiber, --fiber-stable".into(),
        ));
    }
    let kappa = match (a.kappa_min, a.fiber) {
        (Some(k), _) => finite("kappa-min", k)?,
        (None, Some(f)) => kappa_for(f.into()),
        (None, None) => 0.0,
    };
    let mut eigs: Vec<f64> = a.lambda1.into_iter().chain(a.eigenvalues.iter().copied()).collect();
    for &l in &eigs {
        finite("lambda1", l)?;
    }
    eigs.sort_by(f64::total_cmp);
    if eigs.is_empty() && a.tail_bound.is_none() {
        return Err(Failure::Invalid(
            "give --lambda1, --eigenvalues or --tail-bound".into(),
        ));
    }
    let mut fiber = FiberSpectrum::positive(n, kappa, eigs);
    if let Some(t) = a.tail_bound {
        fiber = fiber.with_tail_bound(Some(finite("tail-bound", t)?));
    }
    Ok(fiber)
}

fn classify(target: &args::ClassifyTarget, exec: Executor) -> Outcome {
    use args::ClassifyTarget as T;
    let (geometry, classification) = match target {
        T::Sin(a) => {
            let fiber = sin_fiber(a)?;
            let oracle = NumericQOracle::new(a.numerics.grid_n, exec);
            let fallback = a.numeric.then_some(&oracle as &dyn QPositivityOracle);
            ("sin-cone", classify_sin_cone(&fiber, fallback)?)
        }
        T::Cosh(a) => {
            let kappa = finite("kappa-min", a.kappa_min)?;
            let fiber = FiberSpectrum::negative(a.n, kappa, !a.not_attained);
            ("cosh-cylinder", classify_cosh_cylinder(&fiber)?)
        }
        T::Flat(a) => ("flat-cylinder", classify_flat_cylinder(a.fiber.into(), a.circle)),
    };
    Ok(Report::Classify {
        geometry: geometry.to_string(),
        classification,
    })
}

fn verify(check: &args::VerifyCheck) -> Outcome {
    use args::VerifyCheck as V;
    match check {
        V::CoshLemma(a) => {
            let nu = &a.numerics;
            let r = verify_lemma_cosh(a.n, a.variant.into(), nu.grid_n, nu.trunc_l, nu.tol)?;
            Ok(Report::Lemma {
                check: "cosh-lemma".into(),
                passed: r.within(a.rel_tol),
                report: r,
            })
        }
        V::SinLemma(a) => {
            let r = verify_lemma_sin(a.n, a.lambda, a.numerics.grid_n, a.numerics.tol)?;
            Ok(Report::Lemma {
                check: "sin-lemma".into(),
                passed: r.within(a.rel_tol) && r.cosine >= a.min_cosine,
                report: r,
            })
        }
        V::SinZero(a) => {
            let r = verify_sin_zero(a.n, a.numerics.grid_n, a.numerics.tol)?;
            Ok(Report::SinZero {
                passed: r.below(a.bound),
                bound: a.bound,
                report: r,
            })
        }
        V::CoshCoeff(a) => {
            let passed = cosh_v4_coefficient_check(a.n, a.alpha, a.beta, (0.0, a.lambda_max))?;
            Ok(Report::CoshCoeff {
                n: a.n,
                alpha: a.alpha,
                beta: a.beta,
                lambda_max: a.lambda_max,
                passed,
            })
        }
    }
}

fn sweep(kind: &args::SweepKind, exec: Executor) -> Outcome {
    use args::SweepKind as S;
    match kind {
        S::Q(a) => {
            let grid = Grid::sin(a.numerics.grid_n)?;
            let rows = q_sweep(a.n, a.from, a.to, a.step, &grid, exec)?;
            Ok(Report::QSweep {
                n: a.n,
                rows: rows.iter().map(QRow::from).collect(),
            })
        }
        S::LambdaCrit(a) => {
            let grid = Grid::sin(a.grid_n)?;
            let bracket = lambda_crit_bracket(a.n, a.tol, &grid, exec)?;
            Ok(Report::LambdaCrit { bracket })
        }
        S::CoshConstant(a) => {
            let nf = f64::from(a.n);
            let (subspace, from, to) = match a.subspace {
                args::SubspaceArg::V3 => (CoshSubspace::V3, a.from.unwrap_or(nf - 1.0), a.to.unwrap_or(nf + 20.0)),
                args::SubspaceArg::V4 => (CoshSubspace::V4, a.from.unwrap_or(0.0), a.to.unwrap_or(4.0 * nf)),
            };
            if !(a.step > 0.0) || !(to >= from) {
                return Err(Failure::Invalid(format!(
                    "need from <= to and step > 0 (got {from}, {to}, {})",
                    a.step
                )));
            }
            let count = ((to - from) / a.step + 1e-9).floor() as usize;
            let mut params: Vec<f64> = (0..=count).map(|k| from + k as f64 * a.step).collect();
            if to - params[count] > 1e-9 {
                params.push(to);
            }
            let grid = Grid::cosh(a.numerics.grid_n, a.numerics.trunc_l)?;
            let constant = cosh_strict_constant(a.n, subspace, &params, &grid, exec)?;
            Ok(Report::CoshConstant { constant })
        }
    }
}

fn tables(t: &args::TablesArgs, exec: Executor) -> Outcome {
    let records = match &t.fixture {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
            atlas::parse_fixture(&text)?
        }
        None => atlas::load_builtin(),
    };
    let options = AtlasOptions {
        use_numeric_fallback: !t.no_numeric,
        cells: t.grid_n,
        executor: exec,
    };
    let outcomes = atlas::classify_all(&records, &options);
    Ok(Report::Tables {
        report: atlas::regression(&outcomes),
    })
}
