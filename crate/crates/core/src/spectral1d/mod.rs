//! Weighted one-dimensional quadratic forms and their discretization.
//!
//! A form `∫ d φ'² + p φ²` over `(0, π)` or `(-L, L)` with normalization
//! `∫ w φ²` is assembled with P1 elements and homogeneous Dirichlet ends into
//! a banded pencil `(A, B)`. Several components are interleaved node by node,
//! so a `K`-component form has half bandwidth `2K - 1`.

pub mod band;
pub mod cutoff;
pub mod eigen;
pub mod lemmas;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use band::SymBand;

pub use cutoff::{cutoff_family, CutoffProfile, DiscreteCutoff};
pub use eigen::{count_below, smallest_eigenvalue, EigenPair};
pub use lemmas::{
    cosh_lemma_form, sin_lemma_form, verify_lemma_cosh, verify_lemma_sin, verify_sin_zero, CoshVariant,
    LemmaReport, SinZeroReport,
};

/// Smallest admissible number of cells.
pub const MIN_CELLS: usize = 16;

/// Gauss points per cell used by assembly.
pub const ASSEMBLY_POINTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// `(0, π)` with `f = sin`.
    SinInterval,
    /// `(-L, L)` with `f = cosh`.
    CoshLine { half_length: f64 },
}

impl Domain {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Domain::SinInterval => (0.0, std::f64::consts::PI),
            Domain::CoshLine { half_length } => (-half_length, half_length),
        }
    }

    /// `(f, f', f'')` at `r`.
    pub fn warp(&self, r: f64) -> (f64, f64, f64) {
        match self {
            Domain::SinInterval => {
                let (s, c) = r.sin_cos();
                (s, c, -s)
            }
            Domain::CoshLine { .. } => (r.cosh(), r.sinh(), r.cosh()),
        }
    }

    pub fn half_length(&self) -> f64 {
        match *self {
            Domain::SinInterval => std::f64::consts::FRAC_PI_2,
            Domain::CoshLine { half_length } => half_length,
        }
    }
}

/// `coeff · f^f_pow · (f')^df_pow · (f'')^ddf_pow`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub f_pow: i32,
    pub df_pow: u32,
    pub ddf_pow: u32,
}

/// A sum of monomials in the warping function and its derivatives.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Weight(pub Vec<Monomial>);

impl Weight {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn f_pow(coeff: f64, p: i32) -> Self {
        Self::term(coeff, p, 0, 0)
    }

    pub fn term(coeff: f64, f_pow: i32, df_pow: u32, ddf_pow: u32) -> Self {
        Self(vec![Monomial {
            coeff,
            f_pow,
            df_pow,
            ddf_pow,
        }])
    }

    pub fn plus(mut self, other: Weight) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|m| m.coeff == 0.0)
    }

    pub fn eval_warp(&self, (f, df, ddf): (f64, f64, f64)) -> f64 {
        self.0
            .iter()
            .filter(|m| m.coeff != 0.0)
            .map(|m| m.coeff * f.powi(m.f_pow) * df.powi(m.df_pow as i32) * ddf.powi(m.ddf_pow as i32))
            .sum()
    }

    pub fn eval(&self, domain: &Domain, r: f64) -> f64 {
        self.eval_warp(domain.warp(r))
    }

    /// Smallest power of `f` carried by a nonzero term.
    pub fn min_f_power(&self) -> Option<i32> {
        self.0
            .iter()
            .filter(|m| m.coeff != 0.0)
            .map(|m| m.f_pow + m.ddf_pow as i32)
            .min()
    }
}

/// Uniform grid with `cells` cells; the two end nodes carry Dirichlet conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub domain: Domain,
    pub cells: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(domain: Domain, cells: usize) -> Result<Self> {
        if cells < MIN_CELLS {
            return Err(Error::Grid(format!("need at least {MIN_CELLS} cells, got {cells}")));
        }
        if let Domain::CoshLine { half_length } = domain {
            if !(half_length > 0.0 && half_length.is_finite()) {
                return Err(Error::Grid(format!(
                    "truncation length must be positive, got {half_length}"
                )));
            }
        }
        let (a, b) = domain.bounds();
        Ok(Self {
            domain,
            cells,
            h: (b - a) / cells as f64,
        })
    }

    pub fn sin(cells: usize) -> Result<Self> {
        Self::new(Domain::SinInterval, cells)
    }

    pub fn cosh(cells: usize, half_length: f64) -> Result<Self> {
        Self::new(Domain::CoshLine { half_length }, cells)
    }

    /// Same domain with twice as many cells.
    pub fn refined(&self) -> Self {
        Self::new(self.domain, 2 * self.cells).expect("refining a valid grid")
    }

    pub fn node(&self, k: usize) -> f64 {
        let (a, b) = self.domain.bounds();
        if k == self.cells {
            b
        } else {
            a + k as f64 * self.h
        }
    }

    pub fn interior_count(&self) -> usize {
        self.cells - 1
    }

    /// Coordinates of the interior nodes.
    pub fn interior(&self) -> Vec<f64> {
        (1..self.cells).map(|k| self.node(k)).collect()
    }
}

/// One scalar field's part of a form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentForm {
    pub derivative: Weight,
    pub potential: Weight,
    pub normalization: Weight,
}

/// `∫ c φ_i φ_j`, counted once in the energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub weight: Weight,
}

/// Scalar weighted Rayleigh quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedForm {
    pub domain: Domain,
    pub derivative_weight: Weight,
    pub potential_terms: Weight,
    pub normalization_weight: Weight,
}

/// Quadratic form in one to three coupled scalar fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockForm {
    pub domain: Domain,
    pub components: Vec<ComponentForm>,
    pub couplings: Vec<Coupling>,
}

impl From<WeightedForm> for BlockForm {
    fn from(w: WeightedForm) -> Self {
        BlockForm {
            domain: w.domain,
            components: vec![ComponentForm {
                derivative: w.derivative_weight,
                potential: w.potential_terms,
                normalization: w.normalization_weight,
            }],
            couplings: Vec::new(),
        }
    }
}

impl BlockForm {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Precondition("form has no components".into()));
        }
        for c in &self.couplings {
            if c.i == c.j || c.i >= self.len() || c.j >= self.len() {
                return Err(Error::Precondition(format!(
                    "invalid coupling between components {} and {}",
                    c.i, c.j
                )));
            }
        }
        Ok(())
    }

    /// Energy and normalization of smooth fields by composite Gauss quadrature.
    ///
    /// `field(i, r)` returns `(φ_i(r), φ_i'(r))`.
    pub fn evaluate(
        &self,
        field: impl Fn(usize, f64) -> (f64, f64),
        cells: usize,
        points: usize,
    ) -> (f64, f64) {
        let (a, b) = self.domain.bounds();
        let h = (b - a) / cells as f64;
        let (mut energy, mut norm) = (0.0, 0.0);
        let mut vals = vec![(0.0, 0.0); self.len()];
        for c in 0..cells {
            let lo = a + c as f64 * h;
            quadrature::for_each_point(lo, lo + h, points, |r, w| {
                let warp = self.domain.warp(r);
                for (i, v) in vals.iter_mut().enumerate() {
                    *v = field(i, r);
                }
                for (comp, &(u, du)) in self.components.iter().zip(&vals) {
                    energy += w
                        * (comp.derivative.eval_warp(warp) * du * du
                            + comp.potential.eval_warp(warp) * u * u);
                    norm += w * comp.normalization.eval_warp(warp) * u * u;
                }
                for cp in &self.couplings {
                    energy += w * cp.weight.eval_warp(warp) * vals[cp.i].0 * vals[cp.j].0;
                }
            });
        }
        (energy, norm)
    }

    pub fn assemble(&self, grid: &Grid) -> Result<AssembledPencil> {
        self.validate()?;
        if grid.domain != self.domain {
            return Err(Error::Precondition("grid and form live on different domains".into()));
        }
        let k = self.len();
        let m = grid.interior_count();
        let dim = m * k;
        let bw = 2 * k - 1;
        let mut a = SymBand::zeros(dim, bw);
        let mut b = SymBand::zeros(dim, bw);
        let h = grid.h;
        // Global unknown for (local node, component), if interior.
        let unknown = |node: usize, comp: usize| -> Option<usize> {
            (node >= 1 && node < grid.cells).then(|| (node - 1) * k + comp)
        };
        let mut d = vec![0.0; k];
        let mut p = vec![0.0; k];
        let mut w = vec![0.0; k];
        let mut c = vec![0.0; self.couplings.len()];
        for cell in 0..grid.cells {
            let x0 = grid.node(cell);
            let x1 = grid.node(cell + 1);
            d.iter_mut().for_each(|v| *v = 0.0);
            // Element integrals: stiffness ∫d/h², and mass ∫q N_a N_b stored as [00, 11, 01].
            let mut pm = vec![[0.0; 3]; k];
            let mut wm = vec![[0.0; 3]; k];
            let mut cm = vec![[0.0; 4]; self.couplings.len()];
            let mut overflow = None;
            quadrature::for_each_point(x0, x1, ASSEMBLY_POINTS, |r, gw| {
                let warp = grid.domain.warp(r);
                for (i, comp) in self.components.iter().enumerate() {
                    let dv = comp.derivative.eval_warp(warp);
                    p[i] = comp.potential.eval_warp(warp);
                    w[i] = comp.normalization.eval_warp(warp);
                    if !(dv.is_finite() && p[i].is_finite() && w[i].is_finite()) {
                        overflow = Some(r);
                    }
                    d[i] += gw * dv;
                }
                for (ci, cp) in self.couplings.iter().enumerate() {
                    c[ci] = cp.weight.eval_warp(warp);
                    if !c[ci].is_finite() {
                        overflow = Some(r);
                    }
                }
                let n1 = (r - x0) / h;
                let n0 = 1.0 - n1;
                let prods = [n0 * n0, n1 * n1, n0 * n1];
                for i in 0..k {
                    for (t, &pr) in prods.iter().enumerate() {
                        pm[i][t] += gw * p[i] * pr;
                        wm[i][t] += gw * w[i] * pr;
                    }
                }
                let cross = [n0 * n0, n0 * n1, n1 * n0, n1 * n1];
                for (ci, cv) in c.iter().enumerate() {
                    for (t, &pr) in cross.iter().enumerate() {
                        cm[ci][t] += gw * cv * pr;
                    }
                }
            });
            if let Some(r) = overflow {
                return Err(Error::WeightOverflow {
                    r,
                    half_length: grid.domain.half_length(),
                });
            }
            for i in 0..k {
                let s = d[i] / (h * h);
                let local = [(cell, cell, 0), (cell + 1, cell + 1, 1), (cell + 1, cell, 2)];
                for (na, nb, t) in local {
                    if let (Some(ra), Some(rb)) = (unknown(na, i), unknown(nb, i)) {
                        let stiff = if t == 2 { -s } else { s };
                        a.add(ra, rb, stiff + pm[i][t]);
                        b.add(ra, rb, wm[i][t]);
                    }
                }
            }
            for (ci, cp) in self.couplings.iter().enumerate() {
                // Pairs (node of φ_i, node of φ_j) in the order used for `cross`.
                let pairs = [(cell, cell), (cell, cell + 1), (cell + 1, cell), (cell + 1, cell + 1)];
                for (t, (na, nb)) in pairs.into_iter().enumerate() {
                    if let (Some(ra), Some(rb)) = (unknown(na, cp.i), unknown(nb, cp.j)) {
                        a.add(ra, rb, 0.5 * cm[ci][t]);
                    }
                }
            }
        }
        Ok(AssembledPencil {
            a,
            b,
            grid: *grid,
            components: k,
        })
    }
}

impl WeightedForm {
    pub fn assemble(&self, grid: &Grid) -> Result<AssembledPencil> {
        BlockForm::from(self.clone()).assemble(grid)
    }
}

/// Assemble a scalar form on `grid`.
pub fn assemble(form: &WeightedForm, grid: &Grid) -> Result<AssembledPencil> {
    form.assemble(grid)
}

/// Discretized pencil `A x = θ B x`.
#[derive(Debug, Clone)]
pub struct AssembledPencil {
    pub a: SymBand,
    pub b: SymBand,
    pub grid: Grid,
    pub components: usize,
}

impl AssembledPencil {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn energy(&self, x: &[f64]) -> f64 {
        self.a.bilinear(x, x)
    }

    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        self.b.bilinear(x, x)
    }

    pub fn rayleigh(&self, x: &[f64]) -> f64 {
        self.energy(x) / self.norm_sq(x)
    }

    /// Nodal vector from `f(component, r)`.
    pub fn sample(&self, f: impl Fn(usize, f64) -> f64) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim());
        for r in self.grid.interior() {
            for i in 0..self.components {
                x.push(f(i, r));
            }
        }
        x
    }

    /// Nodal values of one component.
    pub fn component(&self, x: &[f64], i: usize) -> Vec<f64> {
        x.iter().skip(i).step_by(self.components).copied().collect()
    }

    /// `(A - θB) x`.
    pub fn residual(&self, theta: f64, x: &[f64]) -> Vec<f64> {
        let ax = self.a.matvec(x);
        let bx = self.b.matvec(x);
        ax.iter().zip(&bx).map(|(p, q)| p - theta * q).collect()
    }

    /// Cosine of the angle between `x` and `y` in the `B` inner product.
    pub fn b_cosine(&self, x: &[f64], y: &[f64]) -> f64 {
        let xy = self.b.bilinear(x, y);
        xy / (self.norm_sq(x) * self.norm_sq(y)).sqrt()
    }
}
