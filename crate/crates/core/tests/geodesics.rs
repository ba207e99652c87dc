mod common;

use rand::Rng;
use spacetime_convex::catalog;
use spacetime_convex::geodesics::{
    closed_curve_probe, convexity_along_curve, integrate_geodesic, ExpressionCurve, GeodesicState, LoopVerdict,
};
use spacetime_convex::geometry::{covariant_hessian, CausalCharacter};
use std::f64::consts::PI;

const RADIUS: f64 = 6.0;

/// Circular equatorial orbit at r = 6, M = 1: u^t = 1/√(1 − 3M/r), Ω = √(M/r³).
fn circular_orbit() -> (GeodesicState, f64, f64) {
    let ut = 1.0 / (1.0 - 3.0 / RADIUS).sqrt();
    let omega = RADIUS.powf(-1.5);
    (
        GeodesicState::new([0.0, RADIUS, PI / 2.0, 0.0], vec![ut, 0.0, 0.0, omega * ut]),
        ut,
        omega,
    )
}

#[test]
fn circular_orbit_keeps_its_radius_and_angular_velocity() {
    let m = catalog::model("schwarzschild-exterior").unwrap();
    let (s0, ut, omega) = circular_orbit();
    let period = 2.0 * PI / omega / ut;
    let traj = integrate_geodesic(&m, &s0, (0.0, period), 1e-2).unwrap();
    assert!((ut - 2f64.sqrt()).abs() < 1e-15);
    for (_, state) in &traj.samples {
        assert!((state.position[1] - RADIUS).abs() < 1e-6);
        let v = &state.velocity.components;
        assert!((v[3] / v[0] - omega).abs() < 1e-9);
    }
    let end = traj.last();
    assert!((end.position[3] - 2.0 * PI).abs() < 1e-6);
}

/// Endpoint differences between step counts n, 2n and 4n over one period of a
/// mildly eccentric orbit. The circular orbit itself has constant velocity in
/// this chart, so RK4 reproduces it to roundoff and shows no step dependence.
fn self_convergence_ratio(steps: usize) -> f64 {
    let m = catalog::model("schwarzschild-exterior").unwrap();
    let (mut s0, ut, omega) = circular_orbit();
    s0.velocity.components[1] = 0.02;
    let period = 2.0 * PI / omega / ut;
    let end = |n: usize| integrate_geodesic(&m, &s0, (0.0, period), period / n as f64).unwrap().last().position.to_vec();
    let (a, b, c) = (end(steps), end(2 * steps), end(4 * steps));
    let gap = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    gap(&a, &b) / gap(&b, &c)
}

#[test]
fn rk4_error_drops_sixteenfold_under_step_halving() {
    let ratio = self_convergence_ratio(100);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn norm_is_conserved_to_1e8() {
    let s = catalog::model("schwarzschild-exterior").unwrap();
    let flat = catalog::model("minkowski-cartesian").unwrap();
    let cases = [
        (&s, GeodesicState::new([0.0, 8.0, 1.3, 0.2], vec![1.3, -0.2, 0.01, 0.03])),
        (&s, GeodesicState::new([0.0, 10.0, 1.0, 0.0], vec![0.1, 0.3, 0.02, 0.04])),
        (&flat, GeodesicState::new([0.0, 0.0, 0.0, 0.0], vec![0.4, 1.0, -0.5, 0.2])),
    ];
    for (model, s0) in cases {
        let traj = integrate_geodesic(model, &s0, (0.0, 10.0), 1e-3).unwrap();
        assert!(traj.norm_drift() <= 1e-8, "{}: drift {}", model.name(), traj.norm_drift());
        assert!(traj.samples.windows(2).all(|w| w[0].0 < w[1].0));
    }
}

#[test]
fn second_differences_of_f_match_the_hessian_along_geodesics() {
    let m = catalog::model("schwarzschild-exterior").unwrap();
    let f = m.field("r^2*sin(theta) + 0.3*t*r", &[]).unwrap();
    let s0 = GeodesicState::new([0.0, 7.0, 1.2, 0.1], vec![1.2, 0.15, 0.02, 0.05]);
    let h = 1e-2;
    let traj = integrate_geodesic(&m, &s0, (0.0, 5.0), h).unwrap();
    let values: Vec<f64> = traj.samples.iter().map(|(_, s)| f.value(&s.position).unwrap()).collect();
    for i in (2..values.len() - 2).step_by(25) {
        let fd = (-values[i + 2] + 16.0 * values[i + 1] - 30.0 * values[i] + 16.0 * values[i - 1] - values[i - 2])
            / (12.0 * h * h);
        let state = &traj.samples[i].1;
        let hess = covariant_hessian(&f, &m, &state.position).unwrap();
        let v = &state.velocity.components;
        let exact = common::bilinear(&hess, v, v);
        assert!((fd - exact).abs() <= 1e-5, "λ = {}: {fd} vs {exact}", traj.samples[i].0);
    }
}

#[test]
fn random_spacelike_flat_geodesics_respect_the_margin() {
    let m = catalog::model("minkowski-cartesian").unwrap();
    let f = catalog::canonical_field(&m, 1.0).unwrap();
    let mut rng = common::rng(47);
    let mut done = 0;
    while done < 100 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        if -v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3] < 1e-3 {
            continue;
        }
        let traj = integrate_geodesic(&m, &GeodesicState::new(x, v), (0.0, 2.0), 0.05).unwrap();
        let report = convexity_along_curve(&f, &m, &traj, 1.0, 1e-10).unwrap();
        assert_eq!(report.initial_class, CausalCharacter::Spacelike);
        assert!(report.min_margin >= -1e-10, "{}", report.min_margin);
        assert!(!report.violated);
        done += 1;
    }
}

#[test]
fn loops_cannot_be_convex_geodesics() {
    let m = catalog::model("minkowski-cartesian").unwrap();
    let f = catalog::canonical_field(&m, 1.0).unwrap();
    let circle = ExpressionCurve::new(&["0", "R*cos(2*pi*s)", "R*sin(2*pi*s)", "0"], &[("R".into(), 1.0)]).unwrap();
    let probe = closed_curve_probe(&f, &m, &circle, 1.0, 100).unwrap();
    let LoopVerdict::Obstructed { min_margin, at } = probe.verdict else {
        panic!("{:?}", probe.verdict)
    };
    assert!((min_margin + 4.0 * PI * PI).abs() < 1e-9);
    assert!((0.0..1.0).contains(&at));
    assert!(probe.mean_second_derivative.abs() < 1e-9);

    // A tilted ellipse with varying f∘γ: the mean of the second derivative
    // over a period still vanishes.
    let ellipse = ExpressionCurve::new(&["0.3*sin(2*pi*s)", "2*cos(2*pi*s)", "sin(2*pi*s)", "0.5"], &[]).unwrap();
    let probe = closed_curve_probe(&f, &m, &ellipse, 1.0, 200).unwrap();
    assert!(matches!(probe.verdict, LoopVerdict::Obstructed { .. }));
    assert!(probe.mean_second_derivative.abs() < 1e-9);
}
