//! Smallest generalized eigenvalue by inertia bisection and inverse iteration.

use serde::{Deserialize, Serialize};

use super::band::check_positive_definite;
use super::AssembledPencil;
use crate::error::{Error, Result};

const MAX_EXPANSIONS: usize = 200;
const MAX_BISECTIONS: usize = 200;
const MAX_INVERSE_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub theta: f64,
    /// `B`-normalized, first significant entry positive.
    pub vector: Vec<f64>,
    /// Bracket with no eigenvalue below `lower` and at least one below `upper`.
    pub lower: f64,
    pub upper: f64,
}

/// Number of generalized eigenvalues strictly below `sigma`.
pub fn count_below(pencil: &AssembledPencil, sigma: f64) -> usize {
    pencil.a.shifted(sigma, &pencil.b).ldlt().negative_count()
}

fn normalize(pencil: &AssembledPencil, x: &mut [f64]) {
    let norm = pencil.norm_sq(x).sqrt();
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sign = x
        .iter()
        .find(|v| v.abs() > 1e-8 * big)
        .map_or(1.0, |v| v.signum());
    x.iter_mut().for_each(|v| *v *= sign / norm);
}

pub fn smallest_eigenvalue(pencil: &AssembledPencil, tol: f64) -> Result<EigenPair> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    check_positive_definite(&pencil.b)?;

    let (a, b) = pencil.grid.domain.bounds();
    let trial = pencil.sample(|_, r| (std::f64::consts::PI * (r - a) / (b - a)).sin());
    let rq = pencil.rayleigh(&trial);
    let mut hi = rq + tol * rq.abs().max(1.0);
    let mut step = rq.abs().max(1.0);
    let mut tries = 0;
    while count_below(pencil, hi) == 0 {
        hi += step;
        step *= 2.0;
        tries += 1;
        if tries > MAX_EXPANSIONS {
            return Err(Error::NonConvergence("no eigenvalue found above the trial quotient".into()));
        }
    }
    let mut step = hi.abs().max(1.0);
    let mut lo = hi - step;
    tries = 0;
    while count_below(pencil, lo) > 0 {
        step *= 2.0;
        lo = hi - step;
        tries += 1;
        if tries > MAX_EXPANSIONS || !lo.is_finite() {
            return Err(Error::NonConvergence("spectrum is not bounded below".into()));
        }
    }
    tries = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if count_below(pencil, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        tries += 1;
        if tries > MAX_BISECTIONS {
            return Err(Error::NonConvergence("bisection budget exhausted".into()));
        }
    }

    // Below the spectrum the shifted matrix is positive definite.
    let shift = lo - tol;
    let factor = pencil.a.shifted(shift, &pencil.b).ldlt();
    let mut x = trial;
    normalize(pencil, &mut x);
    let mut theta = pencil.rayleigh(&x);
    for _ in 0..MAX_INVERSE_STEPS {
        let mut y = factor.solve(&pencil.b.matvec(&x));
        normalize(pencil, &mut y);
        let next = pencil.rayleigh(&y);
        let diff: Vec<f64> = y.iter().zip(&x).map(|(p, q)| p - q).collect();
        let change = pencil.norm_sq(&diff).sqrt();
        x = y;
        let settled = (next - theta).abs() <= 1e-14 * next.abs().max(1.0) && change < 1e-10;
        theta = next;
        if settled {
            break;
        }
    }

    if count_below(pencil, theta - tol) != 0 || count_below(pencil, theta + tol) == 0 {
        return Err(Error::NonConvergence(format!(
            "inertia certificate failed at theta = {theta} (bracket [{lo}, {hi}])"
        )));
    }
    Ok(EigenPair {
        theta,
        vector: x,
        lower: lo,
        upper: hi,
    })
}
