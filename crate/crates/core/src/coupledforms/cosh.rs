//! Strict positivity on cosh-cylinders.

use serde::{Deserialize, Serialize};

use super::{assemble_block, BlockFormSpec, Subspace, Warp};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::spectral1d::{smallest_eigenvalue, Domain, Grid};

const THETA_TOL: f64 = 1e-7;
const COEFF_SAMPLES: usize = 10_000;

/// Nonnegativity of the two coefficients left after the Young-inequality
/// splitting on `V4`, sampled over `lambda_range`.
///
/// With `a = 4n - α²(n-1)/n - β²(n+1)/n` and
/// `b(λ) = 2λ(λ+n-3) - (4-α)²λ(λ+n)/n - (4-β)²(n+1)λ²/(2n²)`, the check is
/// `a >= 0` and `b(λ) >= 0` on every sample.
pub fn cosh_v4_coefficient_check(n: u32, alpha: f64, beta: f64, lambda_range: (f64, f64)) -> Result<bool> {
    if !(alpha > 0.0 && alpha < 4.0 && beta > 0.0 && beta < 4.0) {
        return Err(Error::Domain(format!(
            "alpha and beta must lie in (0, 4), got {alpha}, {beta}"
        )));
    }
    let (lo, hi) = lambda_range;
    if !(lo >= 0.0 && hi >= lo) {
        return Err(Error::Domain(format!("invalid lambda range [{lo}, {hi}]")));
    }
    let nf = f64::from(n);
    let (a2, b2) = ((4.0 - alpha).powi(2), (4.0 - beta).powi(2));
    let first_terms = [4.0 * nf, alpha * alpha * (nf - 1.0) / nf, beta * beta * (nf + 1.0) / nf];
    let first = first_terms[0] - first_terms[1] - first_terms[2];
    // Cancellation noise in the λ-linear terms is not a sign change.
    if first < -1e-12 * first_terms.iter().sum::<f64>() {
        return Ok(false);
    }
    for k in 0..=COEFF_SAMPLES {
        let l = lo + (hi - lo) * k as f64 / COEFF_SAMPLES as f64;
        let terms = [
            2.0 * l * (l + nf - 3.0),
            a2 * l * (l + nf) / nf,
            b2 * (nf + 1.0) * l * l / (2.0 * nf * nf),
        ];
        let value = terms[0] - terms[1] - terms[2];
        if value < -1e-12 * terms.iter().map(|t| t.abs()).sum::<f64>() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoshSubspace {
    V3,
    V4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictConstant {
    pub n: u32,
    pub subspace: CoshSubspace,
    /// Minimum of `θ_min` over the sampled parameters.
    pub constant: f64,
    pub argmin: f64,
    /// `(parameter, θ_min)` in input order.
    pub samples: Vec<(f64, f64)>,
}

/// Numerical estimate of the strict positivity constant of the cosh form on
/// `V3` (parameter `μ_w`) or `V4` (parameter `λ`).
pub fn cosh_strict_constant(
    n: u32,
    subspace: CoshSubspace,
    parameters: &[f64],
    grid: &Grid,
    executor: Executor,
) -> Result<StrictConstant> {
    if n < 4 {
        return Err(Error::UnsupportedDimension { n, min: 4 });
    }
    if !matches!(grid.domain, Domain::CoshLine { .. }) {
        return Err(Error::Precondition("cosh forms need a cosh grid".into()));
    }
    if parameters.is_empty() {
        return Err(Error::Precondition("no parameters to sample".into()));
    }
    let thetas: Vec<f64> = executor
        .map(parameters, |&p| {
            let sub = match subspace {
                CoshSubspace::V3 => Subspace::V3(p),
                CoshSubspace::V4 => Subspace::V4(p),
            };
            let pencil = assemble_block(&BlockFormSpec::new(Warp::Cosh, n, sub), grid)?;
            Ok(smallest_eigenvalue(&pencil, THETA_TOL)?.theta)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let samples: Vec<(f64, f64)> = parameters.iter().copied().zip(thetas).collect();
    if let Some(&(parameter, theta)) = samples.iter().find(|s| s.1 <= 0.0) {
        return Err(Error::StrictPositivityViolation { parameter, theta });
    }
    let &(argmin, constant) = samples
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    Ok(StrictConstant {
        n,
        subspace,
        constant,
        argmin,
        samples,
    })
}
