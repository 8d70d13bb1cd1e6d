//! Checks of the one-dimensional infima against their closed forms.

use serde::{Deserialize, Serialize};

use super::{assemble, smallest_eigenvalue, Domain, Grid, Weight, WeightedForm};
use crate::criteria::mu_exponent;
use crate::error::{Error, Result};

/// Which denominator the cosh quotient `∫(φ')² coshⁿ / ∫φ² w` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoshVariant {
    /// `w = cosh^(n-2)`; infimum `n`, approached by `cosh^(-n)`.
    A,
    /// `w = coshⁿ`; infimum `n - 1`, approached by `cosh^(1-n)`.
    B,
}

impl CoshVariant {
    fn denominator_power(self, n: u32) -> i32 {
        match self {
            CoshVariant::A => n as i32 - 2,
            CoshVariant::B => n as i32,
        }
    }

    fn expected(self, n: u32) -> f64 {
        match self {
            CoshVariant::A => f64::from(n),
            CoshVariant::B => f64::from(n) - 1.0,
        }
    }

    fn minimizer_power(self, n: u32) -> i32 {
        match self {
            CoshVariant::A => -(n as i32),
            CoshVariant::B => 1 - n as i32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n: u32,
    pub theta: f64,
    pub expected: f64,
    /// `|θ - expected| / |expected|`, or `|θ|` when the expected value is zero.
    pub relative_error: f64,
    /// `B`-cosine between the computed eigenvector and the sampled minimizer.
    pub cosine: f64,
    pub cells: usize,
    pub half_length: Option<f64>,
    /// `θ` after extending the cosh truncation by one at fixed spacing.
    pub theta_extended: Option<f64>,
}

impl LemmaReport {
    pub fn within(&self, relative: f64) -> bool {
        self.relative_error <= relative
    }
}

fn relative_error(theta: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        theta.abs()
    } else {
        (theta - expected).abs() / expected.abs()
    }
}

fn require_n(n: u32) -> Result<()> {
    if n < 4 {
        Err(Error::UnsupportedDimension { n, min: 4 })
    } else {
        Ok(())
    }
}

pub fn cosh_lemma_form(n: u32, variant: CoshVariant, half_length: f64) -> WeightedForm {
    WeightedForm {
        domain: Domain::CoshLine { half_length },
        derivative_weight: Weight::f_pow(1.0, n as i32),
        potential_terms: Weight::zero(),
        normalization_weight: Weight::f_pow(1.0, variant.denominator_power(n)),
    }
}

fn cosh_theta(n: u32, variant: CoshVariant, cells: usize, half_length: f64, tol: f64) -> Result<(f64, f64)> {
    let grid = Grid::cosh(cells, half_length)?;
    let pencil = assemble(&cosh_lemma_form(n, variant, half_length), &grid)?;
    let pair = smallest_eigenvalue(&pencil, tol)?;
    let p = variant.minimizer_power(n);
    let exact = pencil.sample(|_, r| r.cosh().powi(p));
    Ok((pair.theta, pencil.b_cosine(&pair.vector, &exact)))
}

/// Infimum of `∫(φ')² coshⁿ / ∫φ² w` on `(-L, L)`.
///
/// The truncation is checked by re-solving on an interval at least one
/// longer at each end with the same spacing; a change larger than `tol` is an error.
pub fn verify_lemma_cosh(
    n: u32,
    variant: CoshVariant,
    cells: usize,
    half_length: f64,
    tol: f64,
) -> Result<LemmaReport> {
    require_n(n)?;
    let (theta, cosine) = cosh_theta(n, variant, cells, half_length, tol)?;
    // Whole cells are added at each end so the spacing is unchanged.
    let h = 2.0 * half_length / cells as f64;
    let per_side = (1.0 / h).ceil() as usize;
    let ext_length = half_length + per_side as f64 * h;
    let (theta_extended, _) = cosh_theta(n, variant, cells + 2 * per_side, ext_length, tol)?;
    if (theta - theta_extended).abs() > tol {
        return Err(Error::TruncationDominated {
            theta,
            theta_extended,
        });
    }
    let expected = variant.expected(n);
    Ok(LemmaReport {
        n,
        theta,
        expected,
        relative_error: relative_error(theta, expected),
        cosine,
        cells,
        half_length: Some(half_length),
        theta_extended: Some(theta_extended),
    })
}

pub fn sin_lemma_form(n: u32, lambda: f64) -> WeightedForm {
    WeightedForm {
        domain: Domain::SinInterval,
        derivative_weight: Weight::f_pow(1.0, n as i32),
        potential_terms: Weight::f_pow(lambda, n as i32 - 2),
        normalization_weight: Weight::f_pow(1.0, n as i32),
    }
}

/// Infimum of `[∫(φ')² sinⁿ + λ∫φ² sin^(n-2)] / ∫φ² sinⁿ`, expected `λ + μ`.
pub fn verify_lemma_sin(n: u32, lambda: f64, cells: usize, tol: f64) -> Result<LemmaReport> {
    require_n(n)?;
    let mu = mu_exponent(n, lambda)?;
    let grid = Grid::sin(cells)?;
    let pencil = assemble(&sin_lemma_form(n, lambda), &grid)?;
    let pair = smallest_eigenvalue(&pencil, tol)?;
    let exact = pencil.sample(|_, r| r.sin().powf(mu));
    let expected = lambda + mu;
    Ok(LemmaReport {
        n,
        theta: pair.theta,
        expected,
        relative_error: relative_error(pair.theta, expected),
        cosine: pencil.b_cosine(&pair.vector, &exact),
        cells,
        half_length: None,
        theta_extended: None,
    })
}

/// Both quotients with vanishing infimum on `(0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinZeroReport {
    pub n: u32,
    pub cells: usize,
    /// Denominator `∫φ² sin^(n-2)`.
    pub theta_low_weight: f64,
    /// Denominator `∫φ² sinⁿ`.
    pub theta_high_weight: f64,
}

impl SinZeroReport {
    pub fn below(&self, bound: f64) -> bool {
        self.theta_low_weight < bound && self.theta_high_weight < bound
    }
}

pub fn verify_sin_zero(n: u32, cells: usize, tol: f64) -> Result<SinZeroReport> {
    require_n(n)?;
    let grid = Grid::sin(cells)?;
    let theta = |p: i32| -> Result<f64> {
        let form = WeightedForm {
            domain: Domain::SinInterval,
            derivative_weight: Weight::f_pow(1.0, n as i32),
            potential_terms: Weight::zero(),
            normalization_weight: Weight::f_pow(1.0, p),
        };
        Ok(smallest_eigenvalue(&assemble(&form, &grid)?, tol)?.theta)
    };
    Ok(SinZeroReport {
        n,
        cells,
        theta_low_weight: theta(n as i32 - 2)?,
        theta_high_weight: theta(n as i32)?,
    })
}
