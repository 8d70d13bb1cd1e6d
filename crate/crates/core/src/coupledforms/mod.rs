//! Radial forms of the Einstein operator on each invariant subspace.
//!
//! A symmetric 2-tensor on the warped product splits into four families of
//! subspaces indexed by fiber eigendata: TT-tensors (`V1`, one field),
//! functions times the metric (`V2`, one field), divergence-free 1-forms
//! (`V3`, two fields) and functions through their Hessian (`V4`, three
//! fields). Each family reduces to a [`BlockForm`] on the radial interval.

mod cosh;
mod crit;
mod destabilizer;

use serde::{Deserialize, Serialize};

use crate::criteria::mu_exponent;
use crate::error::{Error, Result};
use crate::spectral1d::{AssembledPencil, BlockForm, ComponentForm, Coupling, Domain, Grid, Weight};

pub use cosh::{cosh_strict_constant, cosh_v4_coefficient_check, CoshSubspace, StrictConstant};
pub use crit::{
    lambda_crit_bracket, q_positivity, q_sweep, CritBracket, NumericQOracle, PositivityReport,
    POSITIVITY_TOL,
};
pub use destabilizer::{boundary_lambda, destabilizer_limit, destabilizer_value, sin_power_integral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Warp {
    Sin,
    Cosh,
}

impl Warp {
    /// Scalar curvature of the fiber under the normalization `Ric = ±(n-1) g`.
    pub fn fiber_scal(self, n: u32) -> f64 {
        let nf = f64::from(n);
        match self {
            Warp::Sin => nf * (nf - 1.0),
            Warp::Cosh => -nf * (nf - 1.0),
        }
    }

    pub fn ambient_scal(self, n: u32) -> f64 {
        let nf = f64::from(n);
        match self {
            Warp::Sin => nf * (nf + 1.0),
            Warp::Cosh => -nf * (nf + 1.0),
        }
    }

    pub fn domain(self, half_length: f64) -> Domain {
        match self {
            Warp::Sin => Domain::SinInterval,
            Warp::Cosh => Domain::CoshLine { half_length },
        }
    }
}

/// Which invariant subspace, with its fiber eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum Subspace {
    /// TT-tensor with Einstein eigenvalue `κ`.
    V1(f64),
    /// Function with Laplace eigenvalue `λ`, times the metric.
    V2(f64),
    /// Divergence-free 1-form with eigenvalue `μ_w`.
    V3(f64),
    /// Function with Laplace eigenvalue `λ`, through its Hessian.
    V4(f64),
}

/// Normalization of the `V4` pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum V4Normalization {
    /// The `L²` norms of the three tensor families.
    #[default]
    Tensor,
    /// `λ(λ-n)∫φ² fⁿ + λ∫ψ² fⁿ + ∫χ² fⁿ`, used by the positivity test on sin-cones.
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockFormSpec {
    pub warp: Warp,
    pub n: u32,
    pub subspace: Subspace,
    pub normalization: V4Normalization,
}

impl BlockFormSpec {
    pub fn new(warp: Warp, n: u32, subspace: Subspace) -> Self {
        Self {
            warp,
            n,
            subspace,
            normalization: V4Normalization::Tensor,
        }
    }

    pub fn with_normalization(mut self, normalization: V4Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn fiber_scal(&self) -> f64 {
        self.warp.fiber_scal(self.n)
    }

    pub fn ambient_scal(&self) -> f64 {
        self.warp.ambient_scal(self.n)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::UnsupportedDimension { n: self.n, min: 4 });
        }
        let nf = f64::from(self.n);
        match self.subspace {
            Subspace::V1(k) if !k.is_finite() => Err(Error::Domain(format!("kappa must be finite, got {k}"))),
            Subspace::V2(l) if !(l >= 0.0 && l.is_finite()) => {
                Err(Error::Domain(format!("V2 needs lambda >= 0, got {l}")))
            }
            Subspace::V3(m) if !(m >= nf - 1.0 - 1e-12 && m.is_finite()) => Err(Error::Domain(format!(
                "V3 needs mu_w >= n - 1 = {}, got {m}",
                nf - 1.0
            ))),
            Subspace::V4(l) if !(l >= 0.0 && l.is_finite()) => {
                Err(Error::Domain(format!("V4 needs lambda >= 0, got {l}")))
            }
            Subspace::V4(l) if self.warp == Warp::Sin && l > 0.0 && l <= nf => Err(Error::Domain(format!(
                "sin V4 normalization degenerates for 0 < lambda <= n (lambda = {l})"
            ))),
            _ if self.normalization == V4Normalization::Weighted
                && !(self.warp == Warp::Sin && matches!(self.subspace, Subspace::V4(_))) =>
            {
                Err(Error::Precondition(
                    "the weighted normalization applies to sin V4 only".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// The form on `domain`, with components of zero norm removed.
    pub fn form(&self, half_length: f64) -> Result<BlockForm> {
        self.validate()?;
        let n = self.n as i32;
        let nf = f64::from(self.n);
        let scal = self.fiber_scal();
        let domain = self.warp.domain(half_length);
        // Weight shorthands.
        let fp = |c: f64, p: i32| Weight::f_pow(c, p);
        let df2 = |c: f64| Weight::term(c, n - 2, 2, 0);
        let ddf = |c: f64| Weight::term(c, n - 1, 0, 1);
        let df1 = |c: f64| Weight::term(c, n - 2, 1, 0);

        let (components, couplings) = match self.subspace {
            Subspace::V1(kappa) => (
                vec![ComponentForm {
                    derivative: fp(1.0, n),
                    potential: fp(kappa, n - 2),
                    normalization: fp(1.0, n),
                }],
                vec![],
            ),
            Subspace::V2(lambda) => (
                vec![ComponentForm {
                    derivative: fp(nf + 1.0, n),
                    potential: fp((nf + 1.0) * lambda, n - 2).plus(fp(-2.0 * self.ambient_scal(), n)),
                    normalization: fp(nf + 1.0, n),
                }],
                vec![],
            ),
            Subspace::V3(mu_w) => {
                let c = mu_w - scal / nf;
                let psi2 = ComponentForm {
                    derivative: fp(2.0, n),
                    potential: fp(2.0 * mu_w, n - 2)
                        .plus(df2(2.0 * nf + 6.0))
                        .plus(ddf(-4.0)),
                    normalization: fp(2.0, n),
                };
                if c.abs() <= 1e-12 {
                    (vec![psi2], vec![])
                } else {
                    let psi1 = ComponentForm {
                        derivative: fp(0.5 * c, n),
                        potential: fp(0.5 * c * c, n - 2),
                        normalization: fp(0.5 * c, n),
                    };
                    (
                        vec![psi1, psi2],
                        vec![Coupling {
                            i: 0,
                            j: 1,
                            weight: df1(-4.0 * c),
                        }],
                    )
                }
            }
            Subspace::V4(lambda) => return self.v4_form(lambda, domain),
        };
        Ok(BlockForm {
            domain,
            components,
            couplings,
        })
    }

    fn v4_form(&self, lambda: f64, domain: Domain) -> Result<BlockForm> {
        let n = self.n as i32;
        let nf = f64::from(self.n);
        let scal = self.fiber_scal();
        let fp = |c: f64, p: i32| Weight::f_pow(c, p);
        let df2 = |c: f64| Weight::term(c, n - 2, 2, 0);
        let ddf = |c: f64| Weight::term(c, n - 1, 0, 1);
        let df1 = |c: f64| Weight::term(c, n - 2, 1, 0);

        let a = (nf - 1.0) * lambda - scal;
        let norms = match self.normalization {
            V4Normalization::Tensor => [nf * lambda * a, 2.0 * lambda, nf * (nf + 1.0)],
            V4Normalization::Weighted => [lambda * (lambda - nf), lambda, 1.0],
        };
        let energy = [nf * lambda * a, 2.0 * lambda, nf * (nf + 1.0)];
        let potentials = [
            fp(nf * lambda * a * (lambda - 2.0 * scal / nf), n - 2),
            df2((2.0 * nf + 6.0) * lambda)
                .plus(fp(2.0 * lambda * (lambda - scal / nf), n - 2))
                .plus(ddf(-4.0 * lambda)),
            fp(nf * ((nf + 1.0) * lambda - 2.0 * scal / nf), n - 2)
                .plus(ddf(-4.0 * nf * nf))
                .plus(df2(2.0 * nf * nf * (nf + 3.0))),
        ];
        let couplings_full = [(0, 1, -8.0 * a * lambda), (1, 2, 8.0 * (nf + 1.0) * lambda)];

        let keep: Vec<usize> = (0..3).filter(|&i| norms[i] > 0.0).collect();
        if keep.len() < 3 && lambda != 0.0 {
            return Err(Error::Domain(format!(
                "V4 normalization is not positive at lambda = {lambda}"
            )));
        }
        let index = |i: usize| keep.iter().position(|&k| k == i);
        let components = keep
            .iter()
            .map(|&i| ComponentForm {
                derivative: fp(energy[i], n),
                potential: potentials[i].clone(),
                normalization: fp(norms[i], n),
            })
            .collect();
        let couplings = couplings_full
            .iter()
            .filter_map(|&(i, j, c)| {
                let (i, j) = (index(i)?, index(j)?);
                (c != 0.0).then(|| Coupling {
                    i,
                    j,
                    weight: df1(c),
                })
            })
            .collect();
        Ok(BlockForm {
            domain,
            components,
            couplings,
        })
    }
}

/// Assemble the pencil of `spec` on `grid`.
pub fn assemble_block(spec: &BlockFormSpec, grid: &Grid) -> Result<AssembledPencil> {
    if (spec.warp == Warp::Sin) != (grid.domain == Domain::SinInterval) {
        return Err(Error::Precondition("grid does not match the warp".into()));
    }
    spec.form(grid.domain.half_length())?.assemble(grid)
}

/// Lower bound `λ + μ - 2n` for the sin `V2` Rayleigh quotient.
pub fn sin_v2_lower_bound(n: u32, lambda: f64) -> Result<f64> {
    Ok(lambda + mu_exponent(n, lambda)? - 2.0 * f64::from(n))
}
