//! Positivity of the sin `V4` form and the transition point `λ_crit(n)`.

use serde::{Deserialize, Serialize};

use super::{assemble_block, BlockFormSpec, Subspace, V4Normalization, Warp};
use crate::criteria::{instability_window, stability_threshold, QPositivityOracle, QSample};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::spectral1d::{smallest_eigenvalue, Domain, Grid};

/// `θ_min` must exceed this for the form to count as positive.
pub const POSITIVITY_TOL: f64 = 1e-6;

/// Bisection tolerance on `θ` inside positivity decisions.
const THETA_TOL: f64 = 1e-7;

/// Points in the coarse scan that precedes the `λ_crit` bisection.
const CRIT_SCAN_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub n: u32,
    pub lambda: f64,
    pub theta_min: f64,
    /// `θ_min` on the grid refined once.
    pub theta_refined: f64,
    pub positive: bool,
    pub cells: usize,
    /// Nodal values of `(φ, ψ, χ)` on the base grid when not positive.
    pub witness: Option<Vec<Vec<f64>>>,
}

fn theta_on(n: u32, lambda: f64, grid: &Grid, want_vector: bool) -> Result<(f64, Option<Vec<Vec<f64>>>)> {
    let spec = BlockFormSpec::new(Warp::Sin, n, Subspace::V4(lambda))
        .with_normalization(V4Normalization::Weighted);
    let pencil = assemble_block(&spec, grid)?;
    let pair = smallest_eigenvalue(&pencil, THETA_TOL)?;
    let witness = want_vector.then(|| {
        (0..pencil.components)
            .map(|i| pencil.component(&pair.vector, i))
            .collect()
    });
    Ok((pair.theta, witness))
}

/// Positivity of the sin `V4` form at fiber eigenvalue `lambda > n`.
///
/// The decision is repeated on the refined grid; the two must agree.
pub fn q_positivity(n: u32, lambda: f64, grid: &Grid) -> Result<PositivityReport> {
    let nf = f64::from(n);
    if n < 4 {
        return Err(Error::UnsupportedDimension { n, min: 4 });
    }
    if !(lambda > nf && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "positivity test needs lambda > n = {n}, got {lambda}"
        )));
    }
    if grid.domain != Domain::SinInterval {
        return Err(Error::Precondition("positivity test runs on the sine grid".into()));
    }
    let (theta, witness) = theta_on(n, lambda, grid, true)?;
    let (theta_fine, _) = theta_on(n, lambda, &grid.refined(), false)?;
    let positive = theta > POSITIVITY_TOL;
    if positive != (theta_fine > POSITIVITY_TOL) {
        return Err(Error::InconclusiveResolution {
            lambda,
            theta_coarse: theta,
            theta_fine,
        });
    }
    Ok(PositivityReport {
        n,
        lambda,
        theta_min: theta,
        theta_refined: theta_fine,
        positive,
        cells: grid.cells,
        witness: (!positive).then_some(witness).flatten(),
    })
}

/// Positivity at `from, from + step, …` up to and including `to`.
pub fn q_sweep(
    n: u32,
    from: f64,
    to: f64,
    step: f64,
    grid: &Grid,
    executor: Executor,
) -> Result<Vec<PositivityReport>> {
    if !(step > 0.0) || !(to >= from) {
        return Err(Error::Domain(format!(
            "sweep needs from <= to and step > 0 (got {from}, {to}, {step})"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    let mut points: Vec<f64> = (0..=count).map(|k| from + k as f64 * step).collect();
    if to - points[count] > 1e-9 {
        points.push(to);
    }
    executor
        .map(&points, |&lambda| q_positivity(n, lambda, grid))
        .into_iter()
        .collect()
}

/// Sign of the form at `lambda`, falling back on the refined grid when the
/// two resolutions disagree.
fn sign_at(n: u32, lambda: f64, grid: &Grid) -> Result<(bool, f64)> {
    match q_positivity(n, lambda, grid) {
        Ok(r) => Ok((r.positive, r.theta_min)),
        Err(Error::InconclusiveResolution { theta_fine, .. }) => {
            Ok((theta_fine > POSITIVITY_TOL, theta_fine))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CritBracket {
    pub n: u32,
    /// Not positive here.
    pub lo: f64,
    /// Positive here.
    pub hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub window_upper: f64,
    /// Coarse scan `(λ, positive)` that preceded the bisection.
    pub scan: Vec<(f64, bool)>,
    /// Whether the bracket lies inside `(2n - 2, 2n - 1)`; reported only.
    pub inside_conjectured_range: bool,
}

/// Bracket of width `<= tol_lambda` around the transition of the sin `V4`
/// form from not positive to positive.
pub fn lambda_crit_bracket(
    n: u32,
    tol_lambda: f64,
    grid: &Grid,
    executor: Executor,
) -> Result<CritBracket> {
    if !(tol_lambda > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol_lambda}")));
    }
    let window = instability_window(n)?;
    let start = window.upper - tol_lambda;
    let end = stability_threshold(n);

    let points: Vec<f64> = (0..CRIT_SCAN_POINTS)
        .map(|k| start + (end - start) * k as f64 / (CRIT_SCAN_POINTS - 1) as f64)
        .collect();
    let signs: Vec<(bool, f64)> = executor
        .map(&points, |&lambda| sign_at(n, lambda, grid))
        .into_iter()
        .collect::<Result<_>>()?;
    let scan: Vec<(f64, bool)> = points.iter().zip(&signs).map(|(&l, &(p, _))| (l, p)).collect();
    let changes = scan.windows(2).filter(|w| w[0].1 != w[1].1).count();
    if changes > 1 {
        return Err(Error::MultiTransition { samples: scan });
    }
    if signs[0].0 {
        return Err(Error::Precondition(format!(
            "form is already positive at lambda = {start}, below the transition"
        )));
    }
    if !signs[CRIT_SCAN_POINTS - 1].0 {
        return Err(Error::Precondition(format!(
            "form is not positive at lambda = 2n - 1 = {end}"
        )));
    }
    let k = scan.iter().position(|&(_, p)| p).expect("positive endpoint");
    let (mut lo, mut theta_lo) = (points[k - 1], signs[k - 1].1);
    let (mut hi, mut theta_hi) = (points[k], signs[k].1);
    while hi - lo > tol_lambda {
        let mid = 0.5 * (lo + hi);
        let (positive, theta) = sign_at(n, mid, grid)?;
        if positive {
            hi = mid;
            theta_hi = theta;
        } else {
            lo = mid;
            theta_lo = theta;
        }
    }
    let nf = f64::from(n);
    Ok(CritBracket {
        n,
        lo,
        hi,
        theta_lo,
        theta_hi,
        window_upper: window.upper,
        scan,
        inside_conjectured_range: lo > 2.0 * nf - 2.0 && hi < 2.0 * nf - 1.0,
    })
}

/// Numeric fallback for sin-cone classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericQOracle {
    pub cells: usize,
    pub executor: Executor,
}

impl NumericQOracle {
    pub fn new(cells: usize, executor: Executor) -> Self {
        Self { cells, executor }
    }
}

impl QPositivityOracle for NumericQOracle {
    fn q_sample(&self, n: u32, lambda: f64) -> Result<QSample> {
        let r = q_positivity(n, lambda, &Grid::sin(self.cells)?)?;
        Ok(QSample {
            lambda,
            theta_min: r.theta_min,
            positive: r.positive,
        })
    }

    fn executor(&self) -> Executor {
        self.executor
    }
}
