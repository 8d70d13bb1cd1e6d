use std::f64::consts::PI;

use warpstab_core::coupledforms::{
    boundary_lambda, cosh_strict_constant, destabilizer_limit, destabilizer_value, q_positivity,
    sin_power_integral, CoshSubspace,
};
use warpstab_core::criteria::{instability_window, q_matrices_positive, stability_threshold};
use warpstab_core::spectral1d::quadrature::integrate;
use warpstab_core::spectral1d::Grid;
use warpstab_core::Executor;

#[test]
fn matrix_criterion_implies_numeric_positivity_from_threshold() {
    let g = Grid::sin(600).unwrap();
    for n in [4u32, 5, 6] {
        let nf = f64::from(n);
        let mut lambda = nf + 0.25;
        while lambda <= 4.0 * nf {
            let matrix = q_matrices_positive(n, lambda).unwrap();
            if matrix && (n > 4 || lambda >= stability_threshold(n)) {
                let r = q_positivity(n, lambda, &g).unwrap();
                assert!(r.positive, "n = {n}, lambda = {lambda}: theta = {}", r.theta_min);
            }
            lambda += 0.25;
        }
    }
}

#[test]
fn matrix_criterion_is_too_optimistic_below_threshold_in_dimension_four() {
    // The 2x2 bounds accept lambda = 6.5, which lies in the instability window.
    assert!(q_matrices_positive(4, 6.5).unwrap());
    assert!(instability_window(4).unwrap().contains(6.5));
    assert!(destabilizer_limit(4, 6.5).unwrap() < 0.0);
    let r = q_positivity(4, 6.5, &Grid::sin(600).unwrap()).unwrap();
    assert!(!r.positive && r.theta_min < -0.1);
}

#[test]
fn window_midpoint_is_not_positive_and_threshold_is() {
    let g = Grid::sin(800).unwrap();
    for n in 4..=8u32 {
        let w = instability_window(n).unwrap();
        assert!(destabilizer_limit(n, w.midpoint()).unwrap() < 0.0);
        let mid = q_positivity(n, w.midpoint(), &g).unwrap();
        assert!(!mid.positive && mid.theta_min < 0.0, "n = {n}");
        assert!(q_positivity(n, stability_threshold(n), &g).unwrap().positive, "n = {n}");
    }
}

#[test]
fn witness_is_consistent_with_theta() {
    let g = Grid::sin(400).unwrap();
    let r = q_positivity(4, 5.5, &g).unwrap();
    let w = r.witness.expect("not positive");
    assert_eq!(w.len(), 3);
    assert!(w.iter().all(|c| c.len() == g.interior_count()));
    assert!(r.theta_refined < 0.0);
}

#[test]
fn sin_power_integral_matches_quadrature() {
    for p in [4.0, 5.3, 7.75, 11.0] {
        let q = integrate(0.0, PI, 2000, 5, |r: f64| r.sin().powf(p));
        assert!((q - sin_power_integral(p)).abs() < 1e-10, "p = {p}");
    }
}

#[test]
fn destabilizer_converges_to_its_limit() {
    // Narrow cutoffs on a fine grid for n = 4.
    let g = Grid::sin(80_000).unwrap();
    let v = destabilizer_value(4, 6.0, PI / 16384.0, &g).unwrap();
    let l = destabilizer_limit(4, 6.0).unwrap();
    assert!(v < 0.0 && (v - l).abs() < 0.01 * l.abs(), "{v} vs {l}");
    // Faster convergence in higher dimension.
    let g = Grid::sin(8000).unwrap();
    for (n, lambda) in [(8u32, 10.0), (10, 12.0)] {
        let v = destabilizer_value(n, lambda, PI / 64.0, &g).unwrap();
        let l = destabilizer_limit(n, lambda).unwrap();
        assert!(v < 0.0 && (v - l).abs() < 0.02 * l.abs(), "n = {n}: {v} vs {l}");
    }
}

#[test]
fn destabilizer_limit_vanishes_at_window_top() {
    for n in 4..=10u32 {
        let b = boundary_lambda(n).unwrap();
        assert!((b - instability_window(n).unwrap().upper).abs() < 1e-9);
        assert!(destabilizer_limit(n, b).unwrap().abs() < 1e-3);
    }
}

#[test]
fn cosh_constants_are_positive_and_grid_stable() {
    let coarse = Grid::cosh(800, 8.0).unwrap();
    let fine = coarse.refined();
    for (sub, params) in [
        (CoshSubspace::V3, vec![3.0, 5.0, 10.0]),
        (CoshSubspace::V4, vec![0.0, 2.0, 8.0]),
    ] {
        let a = cosh_strict_constant(4, sub, &params, &coarse, Executor::Sequential).unwrap();
        let b = cosh_strict_constant(4, sub, &params, &fine, Executor::Parallel).unwrap();
        assert!(a.constant > 0.0);
        assert!((a.constant - b.constant).abs() < 0.01 * b.constant, "{sub:?}");
    }
}
