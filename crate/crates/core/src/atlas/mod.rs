//! Sin-cones over compact irreducible symmetric spaces.
//!
//! The built-in rows carry the normalized first eigenvalue `Λ = λ₁/(dim-1)`
//! as an exact fraction together with the known stability of the fiber and
//! of its sin-cone. [`classify_all`] recomputes the cone column from the
//! fiber data and [`regression`] compares it with the stored one.

mod fixture;

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coupledforms::NumericQOracle;
use crate::criteria::{classify_sin_cone, Classification, FiberSpectrum, StabilityClass, Verdict};
use crate::error::Result;
use crate::exec::Executor;

pub use fixture::{parse_fixture, parse_line, render_line};

/// The shipped fixture.
pub const BUILTIN_FIXTURE: &str = include_str!("../../data/symmetric_spaces.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialPath {
    RoundSphere,
    NumericSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// A compact simple Lie group.
    Group,
    /// A symmetric space `G/K` of non-group type.
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricSpaceRecord {
    /// `A_n`, `E_8`, … for groups; `A I`, `D III`, … otherwise.
    pub family: String,
    pub name: String,
    pub dim: u32,
    pub lambda_norm: Ratio<i64>,
    pub fiber_stability: StabilityClass,
    pub expected_cone: StabilityClass,
    pub special_path: Option<SpecialPath>,
}

impl SymmetricSpaceRecord {
    pub fn kind(&self) -> SpaceKind {
        if self.family.contains('_') {
            SpaceKind::Group
        } else {
            SpaceKind::Quotient
        }
    }

    pub fn lambda1_exact(&self) -> Ratio<i64> {
        self.lambda_norm * i64::from(self.dim - 1)
    }

    pub fn lambda1(&self) -> f64 {
        let r = self.lambda1_exact();
        *r.numer() as f64 / *r.denom() as f64
    }

    /// Consistency of the row: positive `λ₁`, `λ₁ = dim` on spheres and
    /// `λ₁ >= dim` elsewhere.
    fn check(&self) -> std::result::Result<(), String> {
        if self.dim < 2 {
            return Err(format!("dimension {} is too small", self.dim));
        }
        let l1 = self.lambda1_exact();
        let dim = Ratio::from_integer(i64::from(self.dim));
        if l1 <= Ratio::from_integer(0) {
            return Err(format!("lambda_1 = {l1} is not positive"));
        }
        match self.special_path {
            Some(SpecialPath::RoundSphere) if l1 != dim => Err(format!(
                "round sphere of dimension {} must have lambda_1 = {}, got {l1}",
                self.dim, self.dim
            )),
            Some(SpecialPath::RoundSphere) => Ok(()),
            _ if l1 < dim => Err(format!(
                "lambda_1 = {l1} violates the Obata bound lambda_1 >= {}",
                self.dim
            )),
            _ => Ok(()),
        }
    }

    /// Fiber data fed to the sin-cone classifier.
    ///
    /// Only the sign of `κ_min` enters: unstable fibers get `-1`, stable ones
    /// `0` and strictly stable ones `1`. The spectrum is `λ₁` with the tail
    /// bound `λ₁`.
    pub fn fiber_spectrum(&self) -> FiberSpectrum {
        if self.special_path == Some(SpecialPath::RoundSphere) {
            return FiberSpectrum::round_sphere(self.dim);
        }
        let kappa = match self.fiber_stability {
            StabilityClass::Unstable => -1.0,
            StabilityClass::Stable => 0.0,
            StabilityClass::StrictlyStable => 1.0,
        };
        FiberSpectrum::positive(self.dim, kappa, vec![self.lambda1()])
    }
}

/// All rows of the shipped fixture.
pub fn load_builtin() -> Vec<SymmetricSpaceRecord> {
    parse_fixture(BUILTIN_FIXTURE).expect("built-in fixture is valid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtlasOptions {
    /// Consult the numeric positivity test for eigenvalues in the gap.
    pub use_numeric_fallback: bool,
    /// Grid cells for the numeric test.
    pub cells: usize,
    pub executor: Executor,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        Self {
            use_numeric_fallback: true,
            cells: 4000,
            executor: Executor::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub record: SymmetricSpaceRecord,
    pub computed: Option<Classification>,
    /// Set when classification failed.
    pub error: Option<String>,
}

impl RowOutcome {
    pub fn verdict(&self) -> Option<Verdict> {
        self.computed.as_ref().map(|c| c.verdict)
    }
}

/// Classifies every row; a failing row does not abort the batch.
pub fn classify_all(records: &[SymmetricSpaceRecord], options: &AtlasOptions) -> Vec<RowOutcome> {
    let oracle = NumericQOracle::new(options.cells, options.executor);
    let fallback = options
        .use_numeric_fallback
        .then_some(&oracle as &dyn crate::criteria::QPositivityOracle);
    options.executor.map(records, |record| {
        let result: Result<Classification> = classify_sin_cone(&record.fiber_spectrum(), fallback);
        let (computed, error) = match result {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        };
        RowOutcome {
            record: record.clone(),
            computed,
            error,
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub family: String,
    pub name: String,
    pub dim: u32,
    pub lambda_norm: String,
    pub lambda1: f64,
    pub fiber: StabilityClass,
    pub expected: StabilityClass,
    /// `None` when classification failed.
    pub computed: Option<Verdict>,
    pub matches: bool,
    pub error: Option<String>,
    pub kind: SpaceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub rows: Vec<RegressionRow>,
    pub mismatches: usize,
}

impl RegressionReport {
    pub fn is_success(&self) -> bool {
        self.mismatches == 0
    }

    /// Side-by-side text tables, groups first.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (kind, title) in [
            (SpaceKind::Group, "Simple Lie groups"),
            (SpaceKind::Quotient, "Symmetric spaces of non-group type"),
        ] {
            let rows: Vec<&RegressionRow> = self.rows.iter().filter(|r| r.kind == kind).collect();
            if rows.is_empty() {
                continue;
            }
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "{title}");
            let _ = writeln!(
                out,
                "{:<7} {:<24} {:>4} {:>7} {:>9}  {:<16} {:<16} {:<16} {}",
                "type", "space", "dim", "Lambda", "lambda_1", "fiber", "expected", "computed", ""
            );
            for r in rows {
                let computed = r.computed.map_or("error", Verdict::label);
                let mark = if r.matches { "ok" } else { "MISMATCH" };
                let _ = writeln!(
                    out,
                    "{:<7} {:<24} {:>4} {:>7} {:>9.4}  {:<16} {:<16} {:<16} {}",
                    r.family,
                    r.name,
                    r.dim,
                    r.lambda_norm,
                    r.lambda1,
                    r.fiber.label(),
                    r.expected.label(),
                    computed,
                    mark
                );
                if let Some(e) = &r.error {
                    let _ = writeln!(out, "        error: {e}");
                }
            }
        }
        let _ = writeln!(out, "\n{} rows, {} mismatches", self.rows.len(), self.mismatches);
        out
    }
}

/// Compares computed verdicts with the stored cone column.
pub fn regression(outcomes: &[RowOutcome]) -> RegressionReport {
    let rows: Vec<RegressionRow> = outcomes
        .iter()
        .map(|o| {
            let r = &o.record;
            let computed = o.verdict();
            RegressionRow {
                family: r.family.clone(),
                name: r.name.clone(),
                dim: r.dim,
                lambda_norm: r.lambda_norm.to_string(),
                lambda1: r.lambda1(),
                fiber: r.fiber_stability,
                expected: r.expected_cone,
                computed,
                matches: computed == Some(r.expected_cone.verdict()),
                error: o.error.clone(),
                kind: r.kind(),
            }
        })
        .collect();
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    RegressionReport { rows, mismatches }
}
