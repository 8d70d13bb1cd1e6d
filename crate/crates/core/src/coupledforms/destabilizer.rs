//! Explicit destabilizing perturbations for eigenvalues in the window.
//!
//! For `ψ = φ_ε sin^μ` and a unit fiber eigenfunction `v`, the trace-free
//! tensor built from `ṽ = ψ v` has Einstein energy
//! `n(∇̃a, ∇̃b) - n²(a, b)` with `a = (Δ̃ - 2n)ṽ` and `b = (Δ̃ - n - 1)ṽ`.
//! As `ε → 0` this tends to `n(λ̃-n-1)(λ̃-2n)(λ̃-n)∫sin^(n+2μ)`.

use statrs::function::gamma::ln_gamma;

use crate::criteria::{cone_eigenvalue, instability_window, mu_exponent, t_tensor_form_value};
use crate::error::{Error, Result};
use crate::spectral1d::cutoff::{sampled_cutoff, CutoffProfile};
use crate::spectral1d::quadrature::for_each_point;
use crate::spectral1d::{Domain, Grid};

const POINTS: usize = 5;

/// `∫₀^π sin^p dr = √π Γ((p+1)/2) / Γ(p/2 + 1)`.
pub fn sin_power_integral(p: f64) -> f64 {
    let ln = 0.5 * std::f64::consts::PI.ln() + ln_gamma(0.5 * (p + 1.0)) - ln_gamma(0.5 * p + 1.0);
    ln.exp()
}

/// `ε → 0` limit of [`destabilizer_value`].
pub fn destabilizer_limit(n: u32, lambda: f64) -> Result<f64> {
    let mu = mu_exponent(n, lambda)?;
    let lt = cone_eigenvalue(n, lambda)?;
    Ok(t_tensor_form_value(n, lt, sin_power_integral(f64::from(n) + 2.0 * mu)))
}

/// The `λ` with `λ + μ(λ) = 2n`, by bisection on `[n, 2n]`.
pub fn boundary_lambda(n: u32) -> Result<f64> {
    if n < 4 {
        return Err(Error::UnsupportedDimension { n, min: 4 });
    }
    let target = 2.0 * f64::from(n);
    let g = |l: f64| -> Result<f64> { Ok(cone_eigenvalue(n, l)? - target) };
    let (mut lo, mut hi) = (f64::from(n), target);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `[g, g', g'', g''']` for `g = sin^μ`.
fn sin_power_jet(mu: f64, r: f64) -> [f64; 4] {
    let (s, c) = r.sin_cos();
    let p = |k: f64| s.powf(mu - k);
    [
        p(0.0),
        mu * p(1.0) * c,
        mu * (mu - 1.0) * p(2.0) * c * c - mu * p(0.0),
        mu * (mu - 1.0) * (mu - 2.0) * p(3.0) * c * c * c
            - (2.0 * mu * (mu - 1.0) + mu * mu) * p(1.0) * c,
    ]
}

/// Energy of the destabilizing tensor with cutoff width `epsilon`.
///
/// The integrand needs three derivatives of the cutoff, so the C² quintic
/// profile is used. Quadrature runs on the grid cells split at the profile
/// breakpoints.
pub fn destabilizer_value(n: u32, lambda: f64, epsilon: f64, grid: &Grid) -> Result<f64> {
    let window = instability_window(n)?;
    if !window.contains(lambda) {
        return Err(Error::Domain(format!(
            "lambda = {lambda} is not inside the instability window ({}, {})",
            window.lower, window.upper
        )));
    }
    if grid.domain != Domain::SinInterval {
        return Err(Error::Precondition("destabilizer lives on the sine grid".into()));
    }
    let cutoff = sampled_cutoff(epsilon, grid, CutoffProfile::Quintic)?.cutoff;
    let mu = mu_exponent(n, lambda)?;
    let nf = f64::from(n);

    let [e1, _, _, e4] = cutoff.breakpoints();
    let mut cuts: Vec<f64> = (0..=grid.cells)
        .map(|k| grid.node(k))
        .filter(|&r| r > e1 && r < e4)
        .chain(cutoff.breakpoints())
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let integrand = |r: f64| -> f64 {
        let [c0, c1, c2, c3] = cutoff.jet(r);
        let [g0, g1, g2, g3] = sin_power_jet(mu, r);
        let psi = c0 * g0;
        let d1 = c1 * g0 + c0 * g1;
        let d2 = c2 * g0 + 2.0 * c1 * g1 + c0 * g2;
        let d3 = c3 * g0 + 3.0 * c2 * g1 + 3.0 * c1 * g2 + c0 * g3;
        let (s, c) = r.sin_cos();
        let cot = c / s;
        let s2 = s * s;
        let l0 = -d2 - nf * cot * d1 + lambda * psi / s2;
        let l1 = -d3 - nf * (cot * d2 - d1 / s2) + lambda * (d1 / s2 - 2.0 * psi * c / (s2 * s));
        let (a, da) = (l0 - 2.0 * nf * psi, l1 - 2.0 * nf * d1);
        let (b, db) = (l0 - (nf + 1.0) * psi, l1 - (nf + 1.0) * d1);
        let sn = s.powi(n as i32);
        nf * (da * db + lambda * a * b / s2) * sn - nf * nf * a * b * sn
    };

    let mut total = 0.0;
    for w in cuts.windows(2) {
        for_each_point(w[0], w[1], POINTS, |r, wt| total += wt * integrand(r));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sin_power_integral_known_values() {
        assert!((sin_power_integral(0.0) - PI).abs() < 1e-12);
        assert!((sin_power_integral(1.0) - 2.0).abs() < 1e-12);
        assert!((sin_power_integral(2.0) - PI / 2.0).abs() < 1e-12);
        assert!((sin_power_integral(4.0) - 3.0 * PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_lambda_matches_closed_form() {
        for n in 4..=12u32 {
            let nf = f64::from(n);
            let closed = 0.5 * (5.0 * nf - (nf * nf + 8.0 * nf).sqrt());
            assert!((boundary_lambda(n).unwrap() - closed).abs() < 1e-10);
            assert!((instability_window(n).unwrap().upper - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn limit_is_negative_inside_window_and_zero_at_top() {
        for lambda in [5.5, 6.0, 6.5] {
            assert!(destabilizer_limit(4, lambda).unwrap() < 0.0);
        }
        assert!(destabilizer_limit(4, boundary_lambda(4).unwrap()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn sin_power_jet_matches_finite_differences() {
        let mu = 1.7;
        let h = 1e-6;
        for r in [0.4, 1.0, 2.5] {
            let j = sin_power_jet(mu, r);
            for k in 0..3 {
                let fd = (sin_power_jet(mu, r + h)[k] - sin_power_jet(mu, r - h)[k]) / (2.0 * h);
                assert!((fd - j[k + 1]).abs() < 1e-6, "r = {r}, k = {k}");
            }
        }
    }

    #[test]
    fn rejects_lambda_outside_window() {
        let g = Grid::sin(800).unwrap();
        assert!(matches!(destabilizer_value(4, 7.0, PI / 16.0, &g), Err(Error::Domain(_))));
    }
}
