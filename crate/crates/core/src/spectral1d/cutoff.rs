//! Cutoff functions on `(0, π)` vanishing near both ends.

use serde::{Deserialize, Serialize};

use super::{quadrature, Domain, Grid};
use crate::error::{Error, Result};

/// Minimum number of grid nodes inside each ramp.
pub const MIN_RAMP_NODES: usize = 4;

/// Transition profile `S` on `[0, 1]` with `S(0) = 0`, `S(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CutoffProfile {
    /// `3t² - 2t³`, C¹.
    #[default]
    Cubic,
    /// `6t⁵ - 15t⁴ + 10t³`, C².
    Quintic,
}

impl CutoffProfile {
    /// `[S, S', S'', S''']` at `t`, clamped outside `[0, 1]`.
    pub fn jet(self, t: f64) -> [f64; 4] {
        if t <= 0.0 {
            return [0.0; 4];
        }
        if t >= 1.0 {
            return [1.0, 0.0, 0.0, 0.0];
        }
        let t2 = t * t;
        match self {
            CutoffProfile::Cubic => [
                t2 * (3.0 - 2.0 * t),
                6.0 * t * (1.0 - t),
                6.0 - 12.0 * t,
                -12.0,
            ],
            CutoffProfile::Quintic => [
                t2 * t * (10.0 + t * (-15.0 + 6.0 * t)),
                30.0 * t2 * (1.0 - t) * (1.0 - t),
                60.0 * t * (1.0 - t) * (1.0 - 2.0 * t),
                60.0 * (1.0 - 6.0 * t + 6.0 * t2),
            ],
        }
    }

    /// `max |S'|`.
    pub fn max_slope(self) -> f64 {
        match self {
            CutoffProfile::Cubic => 1.5,
            CutoffProfile::Quintic => 1.875,
        }
    }
}

/// `φ_ε`: zero on `(0, ε) ∪ (π-ε, π)`, one on `(2ε, π-2ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub epsilon: f64,
    pub profile: CutoffProfile,
}

impl Cutoff {
    pub fn new(epsilon: f64, profile: CutoffProfile) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < std::f64::consts::FRAC_PI_4) {
            return Err(Error::Domain(format!(
                "cutoff width must lie in (0, π/4), got {epsilon}"
            )));
        }
        Ok(Self { epsilon, profile })
    }

    /// `[φ, φ', φ'', φ''']` at `r`.
    pub fn jet(&self, r: f64) -> [f64; 4] {
        let e = self.epsilon;
        let pi = std::f64::consts::PI;
        if r < 0.5 * pi {
            let [s, s1, s2, s3] = self.profile.jet((r - e) / e);
            [s, s1 / e, s2 / (e * e), s3 / (e * e * e)]
        } else {
            let [s, s1, s2, s3] = self.profile.jet((pi - e - r) / e);
            [s, -s1 / e, s2 / (e * e), -s3 / (e * e * e)]
        }
    }

    /// Points where the profile is not smooth.
    pub fn breakpoints(&self) -> [f64; 4] {
        let e = self.epsilon;
        let pi = std::f64::consts::PI;
        [e, 2.0 * e, pi - 2.0 * e, pi - e]
    }

    /// `∫ (φ')² sinⁿ`, integrated on the two ramps only.
    pub fn derivative_energy(&self, n: u32, subcells: usize) -> f64 {
        let [a, b, c, d] = self.breakpoints();
        let g = |r: f64| {
            let v = self.jet(r)[1];
            v * v * r.sin().powi(n as i32)
        };
        quadrature::integrate(a, b, subcells, 5, g) + quadrature::integrate(c, d, subcells, 5, g)
    }
}

/// Cutoff sampled on a sine grid, end nodes included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCutoff {
    pub cutoff: Cutoff,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl DiscreteCutoff {
    pub fn value_at(&self, k: usize) -> f64 {
        self.values[k]
    }
}

/// Cubic smoothstep cutoff of width `epsilon` sampled on `grid`.
pub fn cutoff_family(epsilon: f64, grid: &Grid) -> Result<DiscreteCutoff> {
    sampled_cutoff(epsilon, grid, CutoffProfile::Cubic)
}

pub fn sampled_cutoff(epsilon: f64, grid: &Grid, profile: CutoffProfile) -> Result<DiscreteCutoff> {
    if grid.domain != Domain::SinInterval {
        return Err(Error::Precondition("cutoffs live on the sine interval".into()));
    }
    let cutoff = Cutoff::new(epsilon, profile)?;
    let ramp_nodes = (epsilon / grid.h).floor() as usize;
    if ramp_nodes < MIN_RAMP_NODES {
        return Err(Error::Resolution(format!(
            "cutoff width {epsilon} spans {ramp_nodes} cells of size {}; need at least {MIN_RAMP_NODES}",
            grid.h
        )));
    }
    let nodes: Vec<f64> = (0..=grid.cells).map(|k| grid.node(k)).collect();
    let values = nodes.iter().map(|&r| cutoff.jet(r)[0]).collect();
    Ok(DiscreteCutoff {
        cutoff,
        nodes,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plateau_and_support() {
        let g = Grid::sin(1600).unwrap();
        let c = cutoff_family(PI / 8.0, &g).unwrap();
        assert_eq!(c.value_at(800), 1.0);
        assert_eq!(c.value_at(100), 0.0);
        assert_eq!(c.cutoff.jet(PI / 2.0)[0], 1.0);
        assert_eq!(c.cutoff.jet(PI / 16.0)[0], 0.0);
    }

    #[test]
    fn slope_bound_holds() {
        for profile in [CutoffProfile::Cubic, CutoffProfile::Quintic] {
            let c = Cutoff::new(0.1, profile).unwrap();
            let worst = (0..=10_000)
                .map(|k| c.jet(PI * k as f64 / 10_000.0)[1].abs())
                .fold(0.0, f64::max);
            assert!(worst <= 2.0 / 0.1 + 1e-12);
            assert!((worst - profile.max_slope() / 0.1).abs() < 0.05);
        }
    }

    #[test]
    fn profiles_are_monotone_and_symmetric() {
        for profile in [CutoffProfile::Cubic, CutoffProfile::Quintic] {
            let c = Cutoff::new(0.3, profile).unwrap();
            let mut prev = 0.0;
            for k in 0..=500 {
                let r = PI / 2.0 * k as f64 / 500.0;
                let v = c.jet(r)[0];
                assert!(v >= prev);
                prev = v;
                assert!((v - c.jet(PI - r)[0]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quintic_jet_matches_finite_differences() {
        let c = Cutoff::new(0.2, CutoffProfile::Quintic).unwrap();
        let h = 1e-6;
        for r in [0.25, 0.3, 0.37, PI - 0.3] {
            let j = c.jet(r);
            for k in 0..3 {
                let fd = (c.jet(r + h)[k] - c.jet(r - h)[k]) / (2.0 * h);
                assert!((fd - j[k + 1]).abs() < 1e-4 * j[k + 1].abs().max(1.0), "r = {r}, k = {k}");
            }
        }
    }

    #[test]
    fn too_narrow_ramp_is_a_resolution_error() {
        let g = Grid::sin(64).unwrap();
        assert!(matches!(cutoff_family(0.1, &g), Err(Error::Resolution(_))));
        assert!(matches!(cutoff_family(1.0, &g), Err(Error::Domain(_))));
    }
}
