use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use warpstab_core::atlas::RegressionReport;
use warpstab_core::coupledforms::{CritBracket, PositivityReport, StrictConstant};
use warpstab_core::criteria::{Classification, Reason};
use warpstab_core::spectral1d::{LemmaReport, SinZeroReport};

use crate::args::Format;

/// One row of a `sweep q` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QRow {
    pub lambda: f64,
    pub theta_min: f64,
    pub theta_refined: f64,
    pub positive: bool,
}

impl From<&PositivityReport> for QRow {
    fn from(r: &PositivityReport) -> Self {
        Self {
            lambda: r.lambda,
            theta_min: r.theta_min,
            theta_refined: r.theta_refined,
            positive: r.positive,
        }
    }
}

/// Result of one command, as printed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Classify {
        geometry: String,
        classification: Classification,
    },
    Lemma {
        check: String,
        passed: bool,
        report: LemmaReport,
    },
    SinZero {
        passed: bool,
        bound: f64,
        report: SinZeroReport,
    },
    CoshCoeff {
        n: u32,
        alpha: f64,
        beta: f64,
        lambda_max: f64,
        passed: bool,
    },
    QSweep {
        n: u32,
        rows: Vec<QRow>,
    },
    LambdaCrit {
        bracket: CritBracket,
    },
    CoshConstant {
        constant: StrictConstant,
    },
    Tables {
        report: RegressionReport,
    },
}

impl Report {
    /// False for a failed verification or a table mismatch.
    pub fn passed(&self) -> bool {
        match self {
            Report::Lemma { passed, .. }
            | Report::SinZero { passed, .. }
            | Report::CoshCoeff { passed, .. } => *passed,
            Report::Tables { report } => report.is_success(),
            _ => true,
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Text => Ok(text(report)),
        Format::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Csv => csv_text(report).map_err(|e| e.to_string()),
    }
}

fn pass_label(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn describe(reason: &Reason) -> String {
    match reason {
        Reason::RoundSphere => "fiber is the round sphere".into(),
        Reason::ObataBound { lambda, n } => format!("eigenvalue {lambda} is below n = {n}"),
        Reason::KappaBelow { kappa_min, bound } => {
            format!("kappa_min = {kappa_min} < {bound}")
        }
        Reason::KappaAtBound {
            kappa_min,
            bound,
            attained,
        } => format!(
            "kappa_min = {kappa_min} equals {bound} ({})",
            if *attained { "attained" } else { "not attained" }
        ),
        Reason::KappaAbove { kappa_min, bound } => format!("kappa_min = {kappa_min} > {bound}"),
        Reason::EigenvalueInWindow { lambda, lower, upper } => {
            format!("eigenvalue {lambda} lies in the instability window ({lower:.6}, {upper:.6})")
        }
        Reason::EigenvalueInGap { lambda, lower, upper } => {
            format!("eigenvalue {lambda} lies in the gap [{lower:.6}, {upper})")
        }
        Reason::EigenvaluesAboveThreshold { smallest, threshold } => {
            format!("smallest eigenvalue {smallest} >= {threshold}")
        }
        Reason::TailBelowThreshold {
            tail_bound,
            threshold,
        } => format!("tail bound {tail_bound} leaves unlisted eigenvalues below {threshold}"),
        Reason::Boundary {
            quantity,
            value,
            bound,
        } => format!("{quantity} = {value} is at the boundary {bound}"),
        Reason::QPositivity {
            lambda,
            theta_min,
            positive,
        } => format!(
            "numeric form at lambda = {lambda}: theta_min = {theta_min:.6e} ({})",
            if *positive { "positive" } else { "not positive" }
        ),
        Reason::TailSweep {
            from,
            to,
            samples,
            all_positive,
        } => format!(
            "tail sweep on [{from}, {to}] with {samples} samples: {}",
            if *all_positive { "all positive" } else { "not all positive" }
        ),
        Reason::FiberStability { fiber } => format!("fiber is {}", fiber.label()),
        Reason::NonCompactBase => "base is the real line".into(),
        Reason::CircleBase => "base is a circle".into(),
    }
}

fn text(report: &Report) -> String {
    let mut s = String::new();
    match report {
        Report::Classify {
            geometry,
            classification,
        } => {
            let _ = writeln!(s, "{geometry}: {}", classification.verdict);
            for r in &classification.reasons {
                let _ = writeln!(s, "  - {}", describe(r));
            }
        }
        Report::Lemma {
            check,
            passed,
            report: r,
        } => {
            let _ = writeln!(s, "{check} n={}: {}", r.n, pass_label(*passed));
            let _ = writeln!(s, "  theta     {:.10}", r.theta);
            let _ = writeln!(s, "  expected  {:.10}", r.expected);
            let _ = writeln!(s, "  rel error {:.3e}", r.relative_error);
            if r.cosine.is_finite() {
                let _ = writeln!(s, "  cosine    {:.8}", r.cosine);
            }
            if let (Some(l), Some(t)) = (r.half_length, r.theta_extended) {
                let _ = writeln!(s, "  half length {l}, theta at 2L {t:.10}");
            }
            let _ = writeln!(s, "  cells     {}", r.cells);
        }
        Report::SinZero {
            passed,
            bound,
            report: r,
        } => {
            let _ = writeln!(s, "sin-zero n={}: {}", r.n, pass_label(*passed));
            let _ = writeln!(s, "  weight sin^(n-2)  theta {:.6e}", r.theta_low_weight);
            let _ = writeln!(s, "  weight sin^(n+2)  theta {:.6e}", r.theta_high_weight);
            let _ = writeln!(s, "  bound {bound}, cells {}", r.cells);
        }
        Report::CoshCoeff {
            n,
            alpha,
            beta,
            lambda_max,
            passed,
        } => {
            let _ = writeln!(
                s,
                "cosh-coeff n={n} alpha={alpha} beta={beta} lambda in [0, {lambda_max}]: {}",
                pass_label(*passed)
            );
        }
        Report::QSweep { n, rows } => {
            let _ = writeln!(s, "n = {n}");
            let _ = writeln!(s, "{:>10} {:>16} {:>16}  positive", "lambda", "theta_min", "theta_refined");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:>10.4} {:>16.8e} {:>16.8e}  {}",
                    r.lambda,
                    r.theta_min,
                    r.theta_refined,
                    if r.positive { "yes" } else { "no" }
                );
            }
        }
        Report::LambdaCrit { bracket: b } => {
            let _ = writeln!(s, "n = {}: lambda_crit in [{:.6}, {:.6}]", b.n, b.lo, b.hi);
            let _ = writeln!(s, "  theta at ends   {:.6e}, {:.6e}", b.theta_lo, b.theta_hi);
            let _ = writeln!(s, "  window upper    {:.6}", b.window_upper);
            let _ = writeln!(
                s,
                "  inside (2n-2, 2n-1): {}",
                if b.inside_conjectured_range { "yes" } else { "no" }
            );
        }
        Report::CoshConstant { constant: c } => {
            let _ = writeln!(
                s,
                "n = {} {:?}: constant {:.8} at parameter {}",
                c.n, c.subspace, c.constant, c.argmin
            );
            let _ = writeln!(s, "{:>10} {:>16}", "parameter", "theta_min");
            for (p, t) in &c.samples {
                let _ = writeln!(s, "{p:>10.4} {t:>16.8}");
            }
        }
        Report::Tables { report } => s.push_str(&report.render_text()),
    }
    s
}

fn csv_text(report: &Report) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report {
        Report::Classify {
            geometry,
            classification,
        } => {
            w.write_record(["geometry", "verdict", "reason"])?;
            let verdict = classification.verdict.label();
            if classification.reasons.is_empty() {
                w.write_record([geometry.as_str(), verdict, ""])?;
            }
            for r in &classification.reasons {
                w.write_record([geometry.as_str(), verdict, &describe(r)])?;
            }
        }
        Report::Lemma {
            check,
            passed,
            report: r,
        } => {
            w.write_record(["check", "n", "theta", "expected", "relative_error", "cosine", "cells", "passed"])?;
            w.write_record([
                check.clone(),
                r.n.to_string(),
                r.theta.to_string(),
                r.expected.to_string(),
                r.relative_error.to_string(),
                r.cosine.to_string(),
                r.cells.to_string(),
                passed.to_string(),
            ])?;
        }
        Report::SinZero {
            passed,
            bound,
            report: r,
        } => {
            w.write_record(["n", "theta_low_weight", "theta_high_weight", "bound", "cells", "passed"])?;
            w.write_record([
                r.n.to_string(),
                r.theta_low_weight.to_string(),
                r.theta_high_weight.to_string(),
                bound.to_string(),
                r.cells.to_string(),
                passed.to_string(),
            ])?;
        }
        Report::CoshCoeff {
            n,
            alpha,
            beta,
            lambda_max,
            passed,
        } => {
            w.write_record(["n", "alpha", "beta", "lambda_max", "passed"])?;
            w.write_record([
                n.to_string(),
                alpha.to_string(),
                beta.to_string(),
                lambda_max.to_string(),
                passed.to_string(),
            ])?;
        }
        Report::QSweep { rows, .. } => {
            for r in rows {
                w.serialize(r)?;
            }
        }
        Report::LambdaCrit { bracket: b } => {
            w.write_record(["n", "lo", "hi", "theta_lo", "theta_hi", "window_upper", "inside_conjectured_range"])?;
            w.write_record([
                b.n.to_string(),
                b.lo.to_string(),
                b.hi.to_string(),
                b.theta_lo.to_string(),
                b.theta_hi.to_string(),
                b.window_upper.to_string(),
                b.inside_conjectured_range.to_string(),
            ])?;
        }
        Report::CoshConstant { constant: c } => {
            w.write_record(["parameter", "theta_min"])?;
            for (p, t) in &c.samples {
                w.write_record([p.to_string(), t.to_string()])?;
            }
        }
        Report::Tables { report } => {
            w.write_record(["family", "name", "dim", "Lambda", "lambda_1", "fiber", "expected", "computed", "matches", "error"])?;
            for r in &report.rows {
                w.write_record([
                    r.family.clone(),
                    r.name.clone(),
                    r.dim.to_string(),
                    r.lambda_norm.clone(),
                    r.lambda1.to_string(),
                    r.fiber.label().to_string(),
                    r.expected.label().to_string(),
                    r.computed.map_or("error", |v| v.label()).to_string(),
                    r.matches.to_string(),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
