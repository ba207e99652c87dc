//! One line per acceptance criterion, at the stated tolerances. Exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use spacetime_convex::catalog;
use spacetime_convex::convexity::{certify_region, ConvexityQuery, Verdict};
use spacetime_convex::foliation::{
    barrier_scan, mean_curvature, null_expansions, schwarzschild_trk, slice_laplacian, slice_restricted_hessian,
    LevelSetFrame, SliceSpec,
};
use spacetime_convex::geodesics::{
    closed_curve_probe, convexity_along_curve, integrate_geodesic, ExpressionCurve, GeodesicState, LoopVerdict,
};
use spacetime_convex::geometry::{covariant_hessian, eval_metric, Point};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn barrier() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [0.5, 1.0, 2.0] {
        worst = worst.max(schwarzschild_trk(1.5 * m, m).unwrap().abs());
    }
    let scan = barrier_scan(1.0, 0.5, 1.9, 100).unwrap();
    let above = scan.samples.iter().filter(|(r, _)| *r > 1.5).all(|(_, k)| *k < 0.0);
    let below = scan.samples.iter().filter(|(r, _)| *r < 1.5).all(|(_, k)| *k > 0.0);
    check(
        worst <= 1e-12 && above && below,
        format!("max |TrK(3M/2)| = {worst:.1e}; TrK<0 above 1.5: {above}; TrK>0 below 1.5: {below}"),
    )
}

fn level_set_vs_closed_form() -> Outcome {
    let m = catalog::model("schwarzschild-interior").unwrap();
    let f = m.field("r", &[]).unwrap();
    let g = m.field("-r", &[]).unwrap();
    let (mut gap, mut flipped_gap): (f64, f64) = (0.0, 0.0);
    for i in 0..50 {
        let r = 0.1 + 1.8 * (i as f64 + 0.5) / 50.0;
        let p = Point::from([0.0, r, 1.2, 0.3]);
        let closed = schwarzschild_trk(r, 1.0).unwrap();
        gap = gap.max((mean_curvature(&f, &m, &p).unwrap() - closed).abs());
        flipped_gap = flipped_gap.max((mean_curvature(&g, &m, &p).unwrap() - closed).abs());
    }
    let at_one = mean_curvature(&f, &m, &Point::from([0.0, 1.0, 1.2, 0.3])).unwrap();
    check(
        gap <= 1e-8,
        format!(
            "f = r: max gap {gap:.3e} (TrK(r=1) = {at_one:+.6}, closed form +1); \
             f = -r: max gap {flipped_gap:.1e}"
        ),
    )
}

fn canonical_certification() -> Outcome {
    let m = catalog::model("minkowski-cartesian").unwrap();
    let region = vec![(-1.0, 1.0); 4];
    let mut worst: f64 = 0.0;
    let mut all_certified = true;
    for alpha in [0.25, 0.5, 1.0] {
        let f = catalog::canonical_field(&m, alpha).unwrap();
        let cert = certify_region(&m, &f, &ConvexityQuery::new(region.clone(), 5)).unwrap();
        all_certified &= cert.verdict == Verdict::Certified;
        match cert.c_interval {
            Some(iv) => worst = worst.max((iv.lo - alpha).abs()).max((iv.hi - 1.0).abs()),
            None => worst = f64::INFINITY,
        }
    }
    let f = catalog::canonical_field(&m, 1.2).unwrap();
    let violated = certify_region(&m, &f, &ConvexityQuery::new(region, 5)).unwrap().verdict == Verdict::Violated;
    check(
        all_certified && worst <= 1e-9 && violated,
        format!("alpha in {{0.25, 0.5, 1}}: max endpoint gap {worst:.1e}; alpha = 1.2 violated: {violated}"),
    )
}

fn milne() -> Outcome {
    let m = catalog::model("milne").unwrap();
    let f = catalog::canonical_field(&m, 1.0).unwrap();
    let (chi, theta, phi) = (0.6, 1.1, 0.7);
    let (mut trk_gap, mut metric_gap): (f64, f64) = (0.0, 0.0);
    for tau in [0.5, 1.0, 2.0] {
        let p = Point::from([tau, chi, theta, phi]);
        trk_gap = trk_gap.max((mean_curvature(&f, &m, &p).unwrap() - 3.0 / tau).abs());
        let metric = eval_metric(&m, &p).unwrap();
        let basis: Vec<Vec<f64>> = (1..4)
            .map(|k| (0..4).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        let induced = LevelSetFrame::induced_metric(&metric, &basis);
        let s = f64::sinh(chi);
        let unit = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[1.0, s * s, (s * theta.sin()).powi(2)]));
        metric_gap = metric_gap.max((induced - unit * (tau * tau)).abs().max());
    }
    check(
        trk_gap <= 1e-8 && metric_gap <= 1e-8,
        format!("max |TrK - 3/tau| = {trk_gap:.1e}; max induced-metric gap {metric_gap:.1e}"),
    )
}

fn proposition_one() -> Outcome {
    let m = catalog::model("minkowski-cartesian").unwrap();
    let f = catalog::canonical_field(&m, 1.0).unwrap();
    let mut rng = common::rng(5);
    let mut min_margin = f64::INFINITY;
    let mut count = 0;
    while count < 100 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        if -v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3] < 1e-3 {
            continue;
        }
        let traj = integrate_geodesic(&m, &GeodesicState::new(x, v), (0.0, 2.0), 0.05).unwrap();
        min_margin = min_margin.min(convexity_along_curve(&f, &m, &traj, 1.0, 1e-10).unwrap().min_margin);
        count += 1;
    }
    let circle = ExpressionCurve::new(&["0", "cos(2*pi*s)", "sin(2*pi*s)", "0"], &[]).unwrap();
    let probe = closed_curve_probe(&f, &m, &circle, 1.0, 100).unwrap();
    let second = probe.samples.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    let loop_ok = match probe.verdict {
        LoopVerdict::Obstructed { min_margin, .. } => (min_margin + 4.0 * PI * PI).abs() < 1e-9,
        LoopVerdict::Unobstructed { .. } => false,
    };
    check(
        min_margin >= -1e-10 && loop_ok && second < 1e-9,
        format!(
            "min margin over 100 geodesics {min_margin:.1e}; circle margin {:.10} (target -4pi^2), max |(f o gamma)''| {second:.1e}",
            probe.verdict.min_margin()
        ),
    )
}

fn slice_probes() -> Outcome {
    let m = catalog::model("minkowski-cartesian").unwrap();
    let f = catalog::canonical_field(&m, 1.0).unwrap();
    let p = Point::from([0.0, 0.4, -0.3, 0.8]);
    let t0 = SliceSpec::new(0, 0.0);
    let identity_gap = (slice_restricted_hessian(&f, &m, t0, &p).unwrap().hessian - DMatrix::identity(3, 3)).abs().max();
    let laplacian_gap = (slice_laplacian(&f, &m, t0, &p).unwrap() - 3.0).abs();
    let milne = catalog::model("milne").unwrap();
    let g = catalog::canonical_field(&milne, 1.0).unwrap();
    let milne_norm = slice_restricted_hessian(&g, &milne, SliceSpec::new(0, 1.0), &Point::from([1.0, 0.5, 1.0, 2.0]))
        .unwrap()
        .hessian
        .abs()
        .max();
    check(
        identity_gap <= 1e-10 && laplacian_gap <= 1e-10 && milne_norm <= 1e-10,
        format!("t=0: |D^2 f - I| = {identity_gap:.1e}, |lap - 3| = {laplacian_gap:.1e}; Milne |D^2 f| = {milne_norm:.1e}"),
    )
}

fn hygiene() -> Outcome {
    let mut rng = common::rng(3);
    let mut worst: f64 = 0.0;
    for model in catalog::builtin_models() {
        let f = model.field(&common::generic_field_source(&model), &[]).unwrap();
        let n = model.dimension();
        for _ in 0..20 {
            let p = common::safe_point(&model, &mut rng);
            let metric = eval_metric(&model, &p).unwrap();
            let gamma = common::fd_christoffels(&model, &p);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        worst = worst.max(common::relative_gap(metric.christoffels.get(a, b, c), gamma[a][b][c]));
                    }
                }
            }
            let h = covariant_hessian(&f, &model, &p).unwrap();
            let value = |x: &[f64]| f.value(x).unwrap();
            let d2 = common::fd_hessian(&value, &p);
            let d1 = common::fd_gradient(&value, &p);
            for a in 0..n {
                for b in 0..n {
                    let oracle = d2[(a, b)] - (0..n).map(|l| gamma[l][a][b] * d1[l]).sum::<f64>();
                    worst = worst.max(common::relative_gap(h[(a, b)], oracle));
                }
            }
        }
    }

    let s = catalog::model("schwarzschild-exterior").unwrap();
    let s0 = GeodesicState::new([0.0, 8.0, 1.3, 0.2], vec![1.3, -0.2, 0.01, 0.03]);
    let drift = integrate_geodesic(&s, &s0, (0.0, 10.0), 1e-3).unwrap().norm_drift();

    let ut = 2f64.sqrt();
    let omega = 6f64.powf(-1.5);
    let orbit = GeodesicState::new([0.0, 6.0, PI / 2.0, 0.0], vec![ut, 0.02, 0.0, omega * ut]);
    let period = 2.0 * PI / omega / ut;
    let end = |k: usize| {
        integrate_geodesic(&s, &orbit, (0.0, period), period / k as f64)
            .unwrap()
            .last()
            .position
            .to_vec()
    };
    let (a, b, c) = (end(100), end(200), end(400));
    let gap = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let ratio = gap(&a, &b) / gap(&b, &c);
    check(
        worst <= 1e-6 && drift <= 1e-8 && (12.0..=20.0).contains(&ratio),
        format!("AD vs FD max relative gap {worst:.1e}; norm drift {drift:.1e}; RK4 halving factor {ratio:.2}"),
    )
}

fn null_expansion() -> Outcome {
    let flat = catalog::model("minkowski-spherical").unwrap();
    let e = null_expansions(&flat, [0.0, 2.0]).unwrap();
    let gap = (e.theta_plus - 1.0).abs().max((e.theta_minus + 1.0).abs());
    let interior = catalog::model("schwarzschild-interior").unwrap();
    let t = null_expansions(&interior, [0.0, 1.0]).unwrap();
    let product = t.theta_plus * t.theta_minus;
    check(
        gap <= 1e-8 && product > 0.0,
        format!(
            "R=2: ({:+.3}, {:+.3}), gap {gap:.1e}; interior r=1: theta+ theta- = {product:.3} ({:?})",
            e.theta_plus, e.theta_minus, t.trapping
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("barrier reproduction", barrier),
        ("level-set mean curvature vs closed form", level_set_vs_closed_form),
        ("canonical certification", canonical_certification),
        ("Milne foliation", milne),
        ("spacelike geodesic margins and loop probe", proposition_one),
        ("slice Hessian and Laplacian probes", slice_probes),
        ("numerical hygiene", hygiene),
        ("null expansions", null_expansion),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {} {}: {}: {}",
            k + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            name,
            outcome.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
