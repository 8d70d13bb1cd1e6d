//! Closed-form stability verdicts for Einstein warped products.
//!
//! Everything here is decided from scalar inequalities on the fiber data. The
//! only place numerics can enter is the optional [`QPositivityOracle`] that
//! `classify_sin_cone` consults for eigenvalues in the unresolved gap
//! `[window.upper, 2n - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;

/// Comparisons against irrational bounds use this symmetric tolerance; a
/// value within it of a bound is recorded as a boundary case.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Trial values for the free constant in the 2x2 matrix criterion.
pub const EPS_TRIALS: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// Step used when sweeping an unresolved spectral tail with the numeric oracle.
pub const TAIL_SWEEP_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EinsteinSign {
    Positive,
    Zero,
    Negative,
}

/// Spectral description of the fiber `(M^n, g)`.
///
/// The fiber is normalized so that `Ric = (n-1) g`, `0`, or `-(n-1) g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSpectrum {
    pub n: u32,
    pub einstein_sign: EinsteinSign,
    /// Bottom of the spectrum of the Einstein operator on TT-tensors; may be `-inf`.
    pub kappa_min: f64,
    /// Whether `kappa_min` is an eigenvalue (true) or only a strict lower bound.
    pub kappa_min_attained: bool,
    /// Known nonzero Laplace eigenvalues, nondecreasing.
    pub laplacian_eigenvalues: Vec<f64>,
    /// Every eigenvalue not listed is at least this large.
    pub tail_bound: Option<f64>,
    pub is_round_sphere: bool,
}

impl FiberSpectrum {
    /// Positive Einstein fiber with a finite list of eigenvalues and a tail
    /// bound equal to the smallest of them.
    pub fn positive(n: u32, kappa_min: f64, eigenvalues: Vec<f64>) -> Self {
        let tail_bound = eigenvalues.first().copied();
        Self {
            n,
            einstein_sign: EinsteinSign::Positive,
            kappa_min,
            kappa_min_attained: true,
            laplacian_eigenvalues: eigenvalues,
            tail_bound,
            is_round_sphere: false,
        }
    }

    pub fn negative(n: u32, kappa_min: f64, attained: bool) -> Self {
        Self {
            n,
            einstein_sign: EinsteinSign::Negative,
            kappa_min,
            kappa_min_attained: attained,
            laplacian_eigenvalues: Vec::new(),
            tail_bound: None,
            is_round_sphere: false,
        }
    }

    pub fn round_sphere(n: u32) -> Self {
        let first = f64::from(n);
        Self {
            is_round_sphere: true,
            ..Self::positive(n, f64::from(n) + 1.0, vec![first])
        }
    }

    pub fn with_tail_bound(mut self, tail_bound: Option<f64>) -> Self {
        self.tail_bound = tail_bound;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::UnsupportedDimension { n: self.n, min: 2 });
        }
        if self.kappa_min.is_nan() || self.kappa_min == f64::INFINITY {
            return Err(Error::Domain("kappa_min must be a real number or -inf".into()));
        }
        let mut prev = 0.0;
        for &lambda in &self.laplacian_eigenvalues {
            if !lambda.is_finite() || lambda <= 0.0 {
                return Err(Error::Domain(format!(
                    "Laplace eigenvalues must be positive and finite, got {lambda}"
                )));
            }
            if lambda < prev {
                return Err(Error::Domain(format!(
                    "Laplace eigenvalues must be nondecreasing ({prev} then {lambda})"
                )));
            }
            prev = lambda;
        }
        if let Some(t) = self.tail_bound {
            if !t.is_finite() || t <= 0.0 {
                return Err(Error::Domain(format!("tail bound must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    StrictlyStable,
    Stable,
    Unstable,
    Undetermined,
}

impl Verdict {
    /// Order used by the monotonicity property: larger is "more stable".
    pub fn rank(self) -> u8 {
        match self {
            Verdict::Unstable => 0,
            Verdict::Undetermined => 1,
            Verdict::Stable => 2,
            Verdict::StrictlyStable => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::StrictlyStable => "strictly-stable",
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Stability of a fiber or of a tabulated cone (never undetermined).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityClass {
    StrictlyStable,
    Stable,
    Unstable,
}

impl StabilityClass {
    pub fn verdict(self) -> Verdict {
        match self {
            StabilityClass::StrictlyStable => Verdict::StrictlyStable,
            StabilityClass::Stable => Verdict::Stable,
            StabilityClass::Unstable => Verdict::Unstable,
        }
    }

    pub fn label(self) -> &'static str {
        self.verdict().label()
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "strictly-stable" | "s. stable" | "s.stable" => Some(StabilityClass::StrictlyStable),
            "stable" => Some(StabilityClass::Stable),
            "unstable" => Some(StabilityClass::Unstable),
            _ => None,
        }
    }
}

/// One fact that contributed to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    RoundSphere,
    /// A listed eigenvalue violates the bound `lambda >= n` expected of a
    /// positive Einstein fiber other than the round sphere.
    ObataBound { lambda: f64, n: f64 },
    KappaBelow { kappa_min: f64, bound: f64 },
    KappaAtBound { kappa_min: f64, bound: f64, attained: bool },
    KappaAbove { kappa_min: f64, bound: f64 },
    EigenvalueInWindow { lambda: f64, lower: f64, upper: f64 },
    EigenvalueInGap { lambda: f64, lower: f64, upper: f64 },
    EigenvaluesAboveThreshold { smallest: f64, threshold: f64 },
    /// The tail bound leaves room for unlisted eigenvalues below `2n - 1`.
    TailBelowThreshold { tail_bound: f64, threshold: f64 },
    /// `|value - bound| < BOUNDARY_TOL`.
    Boundary { quantity: String, value: f64, bound: f64 },
    QPositivity { lambda: f64, theta_min: f64, positive: bool },
    TailSweep { from: f64, to: f64, samples: usize, all_positive: bool },
    FiberStability { fiber: StabilityClass },
    NonCompactBase,
    CircleBase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
}

impl Classification {
    fn new(verdict: Verdict, reasons: Vec<Reason>) -> Self {
        Self { verdict, reasons }
    }

    pub fn has_boundary_flag(&self) -> bool {
        self.reasons.iter().any(|r| matches!(r, Reason::Boundary { .. }))
    }
}

/// The open interval of fiber eigenvalues that destabilize the sin-cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstabilityWindow {
    pub lower: f64,
    pub upper: f64,
}

impl InstabilityWindow {
    pub fn contains(&self, lambda: f64) -> bool {
        lambda > self.lower && lambda < self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn check_dimension(n: u32, min: u32) -> Result<()> {
    if n < min {
        Err(Error::UnsupportedDimension { n, min })
    } else {
        Ok(())
    }
}

/// The exponent `mu >= 0` with `mu (mu + n - 1) = lambda`.
pub fn mu_exponent(n: u32, lambda: f64) -> Result<f64> {
    check_dimension(n, 2)?;
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    // lambda / (a + sqrt(a^2 + lambda)) avoids cancellation for small lambda.
    let a = 0.5 * (f64::from(n) - 1.0);
    Ok(lambda / (a + (a * a + lambda).sqrt()))
}

/// Eigenvalue `lambda + mu` of `sin^mu(r) v` on the sin-cone.
pub fn cone_eigenvalue(n: u32, lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain(format!(
            "cone eigenvalue needs lambda > 0, got {lambda}"
        )));
    }
    Ok(lambda + mu_exponent(n, lambda)?)
}

pub fn instability_window(n: u32) -> Result<InstabilityWindow> {
    check_dimension(n, 4)?;
    let nf = f64::from(n);
    // (n/2)(sqrt(1 + 8/n) - 1) rewritten as 4 / (1 + sqrt(1 + 8/n)).
    let upper = 2.0 * nf - 4.0 / (1.0 + (1.0 + 8.0 / nf).sqrt());
    Ok(InstabilityWindow { lower: nf, upper })
}

/// Laplace eigenvalue threshold `2n - 1` above which the sin-cone is stable.
pub fn stability_threshold(n: u32) -> f64 {
    2.0 * f64::from(n) - 1.0
}

fn kappa_reason(kappa_min: f64, bound: f64, attained: bool, reasons: &mut Vec<Reason>) -> Ordering3 {
    if kappa_min.is_finite() && (kappa_min - bound).abs() < BOUNDARY_TOL {
        reasons.push(Reason::Boundary {
            quantity: "kappa_min".into(),
            value: kappa_min,
            bound,
        });
        reasons.push(Reason::KappaAtBound {
            kappa_min,
            bound,
            attained,
        });
        Ordering3::At
    } else if kappa_min < bound {
        reasons.push(Reason::KappaBelow { kappa_min, bound });
        Ordering3::Below
    } else {
        reasons.push(Reason::KappaAbove { kappa_min, bound });
        Ordering3::Above
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ordering3 {
    Below,
    At,
    Above,
}

/// Cosh-cylinder over a negative Einstein fiber: the verdict is read off
/// `kappa_min` against `-n`.
pub fn classify_cosh_cylinder(fiber: &FiberSpectrum) -> Result<Classification> {
    if fiber.einstein_sign != EinsteinSign::Negative {
        return Err(Error::Precondition(
            "cosh-cylinders need a negative Einstein fiber".into(),
        ));
    }
    check_dimension(fiber.n, 4)?;
    fiber.validate()?;

    let mut reasons = Vec::new();
    let bound = -f64::from(fiber.n);
    let verdict = match kappa_reason(fiber.kappa_min, bound, fiber.kappa_min_attained, &mut reasons) {
        Ordering3::Below => Verdict::Unstable,
        Ordering3::At => Verdict::Stable,
        Ordering3::Above => Verdict::StrictlyStable,
    };
    Ok(Classification::new(verdict, reasons))
}

/// Ricci-flat product `I x M` with `I` a circle or the real line.
pub fn classify_flat_cylinder(fiber: StabilityClass, base_is_circle: bool) -> Classification {
    let mut reasons = vec![Reason::FiberStability { fiber }];
    reasons.push(if base_is_circle {
        Reason::CircleBase
    } else {
        Reason::NonCompactBase
    });
    let verdict = match fiber {
        StabilityClass::StrictlyStable if !base_is_circle => Verdict::Stable,
        other => other.verdict(),
    };
    Classification::new(verdict, reasons)
}

/// One evaluation of the numeric positivity test for the coupled form on the
/// fourth block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QSample {
    pub lambda: f64,
    pub theta_min: f64,
    pub positive: bool,
}

/// Numeric decision procedure for eigenvalues in the gap.
pub trait QPositivityOracle: Sync {
    fn q_sample(&self, n: u32, lambda: f64) -> Result<QSample>;

    fn executor(&self) -> Executor {
        Executor::Sequential
    }
}

/// Sample points for a tail sweep over `[from, to]`: a fixed step plus both endpoints.
pub fn tail_sweep_points(from: f64, to: f64) -> Vec<f64> {
    let mut points = Vec::new();
    let mut k = 0u32;
    loop {
        let x = from + f64::from(k) * TAIL_SWEEP_STEP;
        if x >= to - 1e-12 {
            break;
        }
        points.push(x);
        k += 1;
    }
    points.push(to);
    points
}

/// Sin-cone over a closed positive Einstein fiber.
pub fn classify_sin_cone(
    fiber: &FiberSpectrum,
    numeric_fallback: Option<&dyn QPositivityOracle>,
) -> Result<Classification> {
    if fiber.einstein_sign != EinsteinSign::Positive {
        return Err(Error::Precondition(
            "sin-cones need a positive Einstein fiber".into(),
        ));
    }
    check_dimension(fiber.n, 4)?;
    fiber.validate()?;
    if fiber.laplacian_eigenvalues.is_empty() && fiber.tail_bound.is_none() {
        return Err(Error::Precondition("no Laplace eigenvalue data".into()));
    }
    if fiber.is_round_sphere {
        return Ok(Classification::new(
            Verdict::StrictlyStable,
            vec![Reason::RoundSphere],
        ));
    }

    let n = fiber.n;
    let nf = f64::from(n);
    let window = instability_window(n)?;
    let threshold = stability_threshold(n);
    let mut reasons = Vec::new();

    for &lambda in &fiber.laplacian_eigenvalues {
        if lambda < nf - BOUNDARY_TOL {
            reasons.push(Reason::ObataBound { lambda, n: nf });
        }
    }

    let kappa = kappa_reason(fiber.kappa_min, 0.0, fiber.kappa_min_attained, &mut reasons);

    let mut unstable = kappa == Ordering3::Below;
    let mut gap = Vec::new();
    let mut below_theory = false;
    for &lambda in &fiber.laplacian_eigenvalues {
        for (bound, name) in [
            (window.lower, "window.lower"),
            (window.upper, "window.upper"),
            (threshold, "2n-1"),
        ] {
            if (lambda - bound).abs() < BOUNDARY_TOL {
                reasons.push(Reason::Boundary {
                    quantity: format!("lambda vs {name}"),
                    value: lambda,
                    bound,
                });
            }
        }
        if lambda > window.lower + BOUNDARY_TOL && lambda < window.upper - BOUNDARY_TOL {
            reasons.push(Reason::EigenvalueInWindow {
                lambda,
                lower: window.lower,
                upper: window.upper,
            });
            unstable = true;
        } else if lambda >= threshold - BOUNDARY_TOL {
            // meets the sufficient bound
        } else if lambda >= window.upper - BOUNDARY_TOL {
            gap.push(lambda);
        } else {
            // At or below n: outside the range the window criteria cover.
            below_theory = true;
        }
    }
    if unstable {
        return Ok(Classification::new(Verdict::Unstable, reasons));
    }

    if let Some(smallest) = fiber
        .laplacian_eigenvalues
        .iter()
        .copied()
        .filter(|&l| l >= threshold - BOUNDARY_TOL)
        .reduce(f64::min)
    {
        reasons.push(Reason::EigenvaluesAboveThreshold {
            smallest,
            threshold,
        });
    }
    for &lambda in &gap {
        reasons.push(Reason::EigenvalueInGap {
            lambda,
            lower: window.upper,
            upper: threshold,
        });
    }

    // Portion of the spectrum only known through the tail bound.
    let tail = fiber
        .tail_bound
        .filter(|&t| t < threshold - BOUNDARY_TOL);
    if let Some(t) = tail {
        reasons.push(Reason::TailBelowThreshold {
            tail_bound: t,
            threshold,
        });
    }
    let tail_resolvable = tail.map_or(true, |t| t >= window.upper - BOUNDARY_TOL);

    if below_theory {
        return Ok(Classification::new(Verdict::Undetermined, reasons));
    }
    if gap.is_empty() && tail.is_none() {
        let strict = kappa == Ordering3::Above;
        let verdict = if strict {
            Verdict::StrictlyStable
        } else {
            Verdict::Stable
        };
        return Ok(Classification::new(verdict, reasons));
    }
    if !tail_resolvable {
        return Ok(Classification::new(Verdict::Undetermined, reasons));
    }
    let Some(oracle) = numeric_fallback else {
        return Ok(Classification::new(Verdict::Undetermined, reasons));
    };

    let executor = oracle.executor();
    let samples = executor.map(&gap, |&lambda| oracle.q_sample(n, lambda));
    let mut all_positive = true;
    for sample in samples {
        let s = sample?;
        reasons.push(Reason::QPositivity {
            lambda: s.lambda,
            theta_min: s.theta_min,
            positive: s.positive,
        });
        all_positive &= s.positive;
    }
    if !all_positive {
        // A listed eigenvalue whose block form is not positive semidefinite.
        return Ok(Classification::new(Verdict::Unstable, reasons));
    }

    if let Some(t) = tail {
        let from = t.max(window.upper);
        let points = tail_sweep_points(from, threshold);
        let samples = executor.map(&points, |&lambda| oracle.q_sample(n, lambda));
        let mut tail_positive = true;
        for sample in samples {
            tail_positive &= sample?.positive;
        }
        reasons.push(Reason::TailSweep {
            from,
            to: threshold,
            samples: points.len(),
            all_positive: tail_positive,
        });
        if !tail_positive {
            // Unlisted eigenvalues may or may not sit where the form fails.
            return Ok(Classification::new(Verdict::Undetermined, reasons));
        }
    }

    let verdict = if kappa == Ordering3::Above {
        Verdict::StrictlyStable
    } else {
        Verdict::Stable
    };
    Ok(Classification::new(verdict, reasons))
}

/// Closed form of the Einstein quadratic form on `T(v)` for a cone
/// eigenfunction with eigenvalue `lambda_tilde` and squared norm `norm_sq`.
pub fn t_tensor_form_value(n: u32, lambda_tilde: f64, norm_sq: f64) -> f64 {
    let nf = f64::from(n);
    nf * (lambda_tilde - nf - 1.0) * (lambda_tilde - 2.0 * nf) * (lambda_tilde - nf) * norm_sq
}

pub type Sym2 = [[f64; 2]; 2];

/// The three 2x2 matrices bounding the coupled form from below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QMatrices {
    pub q1: Sym2,
    pub q2: Sym2,
    pub q3: Sym2,
    pub f: f64,
    pub g: f64,
}

impl QMatrices {
    pub fn all_positive_definite(&self) -> bool {
        [self.q1, self.q2, self.q3].iter().all(positive_definite_2x2)
    }
}

/// Sylvester's criterion on a symmetric 2x2 matrix.
pub fn positive_definite_2x2(m: &Sym2) -> bool {
    m[0][0] > 0.0 && m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.0
}

pub fn q_matrices(n: u32, lambda: f64, epsilon: f64) -> Result<QMatrices> {
    check_dimension(n, 4)?;
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let nf = f64::from(n);
    let denom = (nf + 1.0) * lambda - 2.0 * (nf - 1.0);
    if !(lambda > 0.0) || !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "need lambda > 2(n-1)/(n+1) = {}, got {lambda}",
            2.0 * (nf - 1.0) / (nf + 1.0)
        )));
    }
    let c = (nf + 1.0) * lambda;
    let f = c * c / (nf * denom) + epsilon;
    let g = c * c / (2.0 * nf * nf * (nf + 3.0)) + epsilon;

    let q2 = [[f, c], [c, nf * denom]];
    let q3 = [[g, c], [c, 2.0 * nf * nf * (nf + 3.0)]];
    let l = lambda;
    let a11 = nf * (nf - 1.0) * l * (l - nf) * (l - 2.0 * (nf - 1.0));
    let a12 = -2.0 * (nf - 1.0) * l * (l - nf);
    let a22 = (2.0 * nf + 6.0) * l + 2.0 * l * (l - (nf - 1.0)) - f - g;
    let q1 = [[a11, a12], [a12, a22]];
    Ok(QMatrices { q1, q2, q3, f, g })
}

/// True when some trial epsilon makes all three matrices positive definite.
pub fn q_matrices_positive(n: u32, lambda: f64) -> Result<bool> {
    for eps in EPS_TRIALS {
        if q_matrices(n, lambda, eps)?.all_positive_definite() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn mu_exponent_examples() {
        assert_eq!(mu_exponent(4, 0.0).unwrap(), 0.0);
        assert_relative_eq!(mu_exponent(4, 4.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(mu_exponent(4, 10.0).unwrap(), 2.0, epsilon = 1e-14);
        assert!(matches!(mu_exponent(4, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn mu_is_integer_on_sphere_eigenvalues() {
        for n in 4..12u32 {
            for k in 1..6u32 {
                let lambda = f64::from(k * (k + n - 1));
                assert_relative_eq!(mu_exponent(n, lambda).unwrap(), f64::from(k), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cone_eigenvalue_examples() {
        assert_relative_eq!(cone_eigenvalue(4, 4.0).unwrap(), 5.0, epsilon = 1e-14);
        assert_relative_eq!(cone_eigenvalue(4, 10.0).unwrap(), 12.0, epsilon = 1e-14);
        assert_relative_eq!(cone_eigenvalue(5, 5.0).unwrap(), 6.0, epsilon = 1e-14);
        assert!(cone_eigenvalue(4, 0.0).is_err());
    }

    #[test]
    fn window_examples() {
        let w4 = instability_window(4).unwrap();
        assert_eq!(w4.lower, 4.0);
        assert_relative_eq!(w4.upper, 8.0 - 2.0 * (3f64.sqrt() - 1.0), epsilon = 1e-13);
        assert_relative_eq!(w4.upper, 6.5359, epsilon = 1e-4);
        let w8 = instability_window(8).unwrap();
        assert_relative_eq!(w8.upper, 16.0 - 4.0 * (2f64.sqrt() - 1.0), epsilon = 1e-13);
        assert_relative_eq!(w8.upper, 14.3431, epsilon = 1e-4);
        assert!(matches!(
            instability_window(3),
            Err(Error::UnsupportedDimension { n: 3, min: 4 })
        ));
    }

    #[test]
    fn window_upper_in_open_band_and_decreasing_offset() {
        let mut prev_offset = f64::INFINITY;
        for n in 4..=10_000u32 {
            let w = instability_window(n).unwrap();
            let nf = f64::from(n);
            assert!(w.upper > 2.0 * nf - 2.0 && w.upper < 2.0 * nf - 1.0, "n = {n}");
            let offset = w.upper - (2.0 * nf - 2.0);
            assert!(offset < prev_offset, "offset must shrink, n = {n}");
            prev_offset = offset;
        }
    }

    #[test]
    fn cosh_boundary_triple() {
        let verdict = |k| {
            classify_cosh_cylinder(&FiberSpectrum::negative(4, k, true))
                .unwrap()
                .verdict
        };
        assert_eq!(verdict(-4.1), Verdict::Unstable);
        assert_eq!(verdict(-4.0), Verdict::Stable);
        assert_eq!(verdict(-3.9), Verdict::StrictlyStable);
        assert_eq!(verdict(f64::NEG_INFINITY), Verdict::Unstable);
    }

    #[test]
    fn cosh_at_bound_is_flagged_and_never_strict() {
        for attained in [true, false] {
            let c = classify_cosh_cylinder(&FiberSpectrum::negative(6, -6.0, attained)).unwrap();
            assert_eq!(c.verdict, Verdict::Stable);
            assert!(c.has_boundary_flag());
        }
    }

    #[test]
    fn cosh_rejects_wrong_sign_and_small_n() {
        let mut f = FiberSpectrum::negative(4, 0.0, true);
        f.einstein_sign = EinsteinSign::Positive;
        assert!(matches!(classify_cosh_cylinder(&f), Err(Error::Precondition(_))));
        assert!(matches!(
            classify_cosh_cylinder(&FiberSpectrum::negative(3, 0.0, true)),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn flat_cylinder_cases() {
        use StabilityClass::*;
        assert_eq!(classify_flat_cylinder(StrictlyStable, true).verdict, Verdict::StrictlyStable);
        assert_eq!(classify_flat_cylinder(StrictlyStable, false).verdict, Verdict::Stable);
        assert_eq!(classify_flat_cylinder(Unstable, true).verdict, Verdict::Unstable);
        assert_eq!(classify_flat_cylinder(Unstable, false).verdict, Verdict::Unstable);
        assert_eq!(classify_flat_cylinder(Stable, true).verdict, Verdict::Stable);
    }

    #[test]
    fn sin_cone_table_examples() {
        // Spin(7): n = 21, lambda_1 = 21/10 * 20.
        let spin7 = FiberSpectrum::positive(21, 1.0, vec![42.0]);
        assert_eq!(classify_sin_cone(&spin7, None).unwrap().verdict, Verdict::StrictlyStable);
        // G2: n = 14, lambda_1 = 2 * 13.
        let g2 = FiberSpectrum::positive(14, 0.0, vec![26.0]);
        assert_eq!(classify_sin_cone(&g2, None).unwrap().verdict, Verdict::Unstable);
        let w = instability_window(14).unwrap();
        assert_relative_eq!(w.upper, 28.0 - 7.0 * ((11.0f64 / 7.0).sqrt() - 1.0), epsilon = 1e-12);
        // CP^2: n = 4, lambda_1 = 6.
        let cp2 = FiberSpectrum::positive(4, 0.0, vec![6.0]);
        assert_eq!(classify_sin_cone(&cp2, None).unwrap().verdict, Verdict::Unstable);
    }

    #[test]
    fn sin_cone_sphere_and_errors() {
        let s = FiberSpectrum::round_sphere(5);
        let c = classify_sin_cone(&s, None).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlyStable);
        assert_eq!(c.reasons, vec![Reason::RoundSphere]);

        let mut neg = FiberSpectrum::positive(5, 0.0, vec![10.0]);
        neg.einstein_sign = EinsteinSign::Negative;
        assert!(matches!(classify_sin_cone(&neg, None), Err(Error::Precondition(_))));

        let empty = FiberSpectrum::positive(5, 0.0, vec![]);
        assert!(matches!(classify_sin_cone(&empty, None), Err(Error::Precondition(_))));

        let small = FiberSpectrum::positive(3, 0.0, vec![10.0]);
        assert!(matches!(classify_sin_cone(&small, None), Err(Error::UnsupportedDimension { .. })));

        let unsorted = FiberSpectrum::positive(5, 0.0, vec![12.0, 10.0]);
        assert!(matches!(classify_sin_cone(&unsorted, None), Err(Error::Domain(_))));
    }

    #[test]
    fn sin_cone_negative_kappa_is_unstable() {
        let f = FiberSpectrum::positive(6, -0.5, vec![20.0]);
        assert_eq!(classify_sin_cone(&f, None).unwrap().verdict, Verdict::Unstable);
    }

    #[test]
    fn sin_cone_gap_is_undetermined_without_fallback() {
        // n = 5: gap is [8.4689, 9).
        let f = FiberSpectrum::positive(5, 0.0, vec![80.0 / 9.0]);
        let c = classify_sin_cone(&f, None).unwrap();
        assert_eq!(c.verdict, Verdict::Undetermined);
        assert!(c.reasons.iter().any(|r| matches!(r, Reason::EigenvalueInGap { .. })));
    }

    #[test]
    fn sin_cone_threshold_boundary_is_flagged() {
        let stable = FiberSpectrum::positive(6, 0.0, vec![11.0]);
        let c = classify_sin_cone(&stable, None).unwrap();
        assert_eq!(c.verdict, Verdict::Stable);
        assert!(c.has_boundary_flag());

        let strict = FiberSpectrum::positive(6, 0.5, vec![11.0]);
        let c = classify_sin_cone(&strict, None).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlyStable);
        assert!(c.has_boundary_flag());
    }

    #[test]
    fn sin_cone_obata_violation_is_reported() {
        let f = FiberSpectrum::positive(6, 0.0, vec![5.0, 20.0]);
        let c = classify_sin_cone(&f, None).unwrap();
        assert!(c.reasons.iter().any(|r| matches!(r, Reason::ObataBound { .. })));
        assert_eq!(c.verdict, Verdict::Undetermined);
    }

    struct Fixed(bool);

    impl QPositivityOracle for Fixed {
        fn q_sample(&self, _n: u32, lambda: f64) -> Result<QSample> {
            Ok(QSample {
                lambda,
                theta_min: if self.0 { 1.0 } else { -1.0 },
                positive: self.0,
            })
        }
    }

    #[test]
    fn sin_cone_fallback_paths() {
        let listed = FiberSpectrum::positive(5, 0.0, vec![8.7, 20.0]).with_tail_bound(Some(20.0));
        assert_eq!(classify_sin_cone(&listed, Some(&Fixed(true))).unwrap().verdict, Verdict::Stable);
        assert_eq!(classify_sin_cone(&listed, Some(&Fixed(false))).unwrap().verdict, Verdict::Unstable);

        let strict = FiberSpectrum::positive(5, 1.0, vec![8.7]).with_tail_bound(Some(20.0));
        assert_eq!(
            classify_sin_cone(&strict, Some(&Fixed(true))).unwrap().verdict,
            Verdict::StrictlyStable
        );

        // Only a tail bound in the gap: a failed sweep cannot prove instability.
        let tail_only = FiberSpectrum::positive(5, 0.0, vec![]).with_tail_bound(Some(8.6));
        let c = classify_sin_cone(&tail_only, Some(&Fixed(false))).unwrap();
        assert_eq!(c.verdict, Verdict::Undetermined);
        let c = classify_sin_cone(&tail_only, Some(&Fixed(true))).unwrap();
        assert_eq!(c.verdict, Verdict::Stable);
        assert!(c.reasons.iter().any(|r| matches!(r, Reason::TailSweep { all_positive: true, .. })));

        // Tail reaching into the window is never resolved.
        let deep_tail = FiberSpectrum::positive(5, 0.0, vec![]).with_tail_bound(Some(7.0));
        assert_eq!(
            classify_sin_cone(&deep_tail, Some(&Fixed(true))).unwrap().verdict,
            Verdict::Undetermined
        );
    }

    #[test]
    fn tail_sweep_points_cover_both_ends() {
        let pts = tail_sweep_points(80.0 / 9.0, 9.0);
        assert_eq!(pts.first().copied(), Some(80.0 / 9.0));
        assert_eq!(pts.last().copied(), Some(9.0));
        assert!(pts.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= TAIL_SWEEP_STEP + 1e-12));
    }

    #[test]
    fn t_tensor_examples() {
        assert_eq!(t_tensor_form_value(4, 7.0, 1.0), -24.0);
        assert_eq!(t_tensor_form_value(4, 8.0, 1.0), 0.0);
        assert_eq!(t_tensor_form_value(4, 5.0, 1.0), 0.0);
    }

    #[test]
    fn t_tensor_sign_pattern_dense() {
        for n in 4..=12u32 {
            let nf = f64::from(n);
            for k in 1..2000 {
                let lt = nf + 1e-3 + f64::from(k) * (2.0 * nf) / 2000.0;
                let v = t_tensor_form_value(n, lt, 1.0);
                if lt > nf + 1.0 && lt < 2.0 * nf {
                    assert!(v < 0.0, "n={n} lt={lt}");
                } else if lt < nf + 1.0 || lt > 2.0 * nf {
                    assert!(v > 0.0, "n={n} lt={lt}");
                }
            }
            assert_eq!(t_tensor_form_value(n, nf + 1.0, 1.0), 0.0);
            assert_eq!(t_tensor_form_value(n, 2.0 * nf, 1.0), 0.0);
        }
    }

    #[test]
    fn q_matrices_examples() {
        let m = q_matrices(4, 7.0, 1e-6).unwrap();
        assert!(m.all_positive_definite());

        let m = q_matrices(4, 6.0, 1e-6).unwrap();
        assert_eq!(m.q1[0][0], 0.0);
        assert_eq!(m.q1[0][1], -72.0);
        let det = m.q1[0][0] * m.q1[1][1] - m.q1[0][1] * m.q1[1][0];
        assert_eq!(det, -72.0 * 72.0);
        assert!(!positive_definite_2x2(&m.q1));

        assert!(q_matrices(10, 19.0, 1e-6).unwrap().all_positive_definite());
        assert!(matches!(q_matrices(4, 1.2, 1e-6), Err(Error::Domain(_))));
    }

    #[test]
    fn q_matrices_positive_examples() {
        assert!(q_matrices_positive(4, 7.0).unwrap());
        assert!(!q_matrices_positive(4, 6.0).unwrap());
        assert!(q_matrices_positive(6, 11.0).unwrap());
        for n in 4..=64u32 {
            assert!(q_matrices_positive(n, stability_threshold(n)).unwrap(), "n = {n}");
        }
    }

    fn sample_verdict(kappa: f64, eigs: &[f64]) -> Verdict {
        let f = FiberSpectrum::positive(6, kappa, eigs.to_vec());
        classify_sin_cone(&f, None).unwrap().verdict
    }

    proptest! {
        #[test]
        fn mu_solves_defining_quadratic(n in 2u32..200, lambda in 0.0f64..1e4) {
            let mu = mu_exponent(n, lambda).unwrap();
            prop_assert!(mu >= 0.0);
            let lhs = mu * (mu + f64::from(n) - 1.0);
            prop_assert!((lhs - lambda).abs() <= 1e-12 * lambda.max(1.0));
        }

        #[test]
        fn mu_is_monotone(n in 2u32..100, a in 0.0f64..500.0, d in 1e-6f64..50.0) {
            prop_assert!(mu_exponent(n, a + d).unwrap() > mu_exponent(n, a).unwrap());
        }

        #[test]
        fn sin_cone_verdict_monotone(
            kappa in -2.0f64..2.0,
            bump in 0.0f64..2.0,
            mut eigs in prop::collection::vec(6.0f64..30.0, 2..6),
            drop in 0usize..5,
        ) {
            eigs.sort_by(f64::total_cmp);
            let base = sample_verdict(kappa, &eigs);
            prop_assert!(sample_verdict(kappa + bump, &eigs).rank() >= base.rank());
            if eigs.len() > 1 {
                let mut fewer = eigs.clone();
                fewer.remove(drop % eigs.len());
                // Keep the original tail bound so only listed data changes.
                let f = FiberSpectrum::positive(6, kappa, fewer).with_tail_bound(Some(eigs[0]));
                let v = classify_sin_cone(&f, None).unwrap().verdict;
                prop_assert!(v.rank() >= base.rank());
            }
        }
    }
}
