#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spacetime_convex::catalog;
use spacetime_convex::geometry::{Point, SpacetimeModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the interior of the model's default region, shrunk by 5%
/// on each side.
pub fn safe_point(model: &SpacetimeModel, rng: &mut impl Rng) -> Point {
    let region = model.default_region().expect("builtin models carry a region");
    Point::new(
        region
            .iter()
            .map(|&(lo, hi)| {
                let pad = 0.05 * (hi - lo);
                rng.random_range(lo + pad..hi - pad)
            })
            .collect(),
    )
}

const FD_STEP: f64 = 1e-3;

/// Fourth-order central difference of a scalar function along axis `k`.
pub fn fd_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], k: usize) -> f64 {
    let at = |s: f64| {
        let mut y = x.to_vec();
        y[k] += s * FD_STEP;
        f(&y)
    };
    (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * FD_STEP)
}

pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    (0..x.len()).map(|k| fd_partial(f, x, k)).collect()
}

/// Nested fourth-order differences, symmetrised.
pub fn fd_hessian(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let inner = |y: &[f64]| fd_partial(f, y, j);
            h[(i, j)] = fd_partial(&inner, x, i);
        }
    }
    (&h + h.transpose()) * 0.5
}

/// Metric components evaluated from their expressions, no derivatives.
pub fn metric_value(model: &SpacetimeModel, x: &[f64]) -> DMatrix<f64> {
    let n = model.dimension();
    DMatrix::from_fn(n, n, |i, j| model.component(i, j).eval(x, model.parameter_values()).unwrap())
}

/// `Γ^μ_{νρ}` from finite-difference metric derivatives, indexed `[μ][ν][ρ]`.
pub fn fd_christoffels(model: &SpacetimeModel, x: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let n = model.dimension();
    let g_inv = metric_value(model, x).try_inverse().unwrap();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|l| {
            DMatrix::from_fn(n, n, |i, j| {
                let comp = |y: &[f64]| model.component(i, j).eval(y, model.parameter_values()).unwrap();
                fd_partial(&comp, x, l)
            })
        })
        .collect();
    (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    (0..n)
                        .map(|rho| {
                            (0..n)
                                .map(|s| {
                                    g_inv[(mu, s)] * 0.5 * (dg[nu][(s, rho)] + dg[rho][(s, nu)] - dg[s][(nu, rho)])
                                })
                                .sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// A generic smooth field touching every coordinate.
pub fn generic_field_source(model: &SpacetimeModel) -> String {
    let c = model.coordinates();
    format!("{}*{} + sin({})*{}^2 + exp(0.3*{})", c[0], c[1], c[2], c[3], c[1])
}

pub fn builtin_models() -> Vec<SpacetimeModel> {
    catalog::builtin_models()
}

pub fn bilinear(h: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += h[(i, j)] * x[i] * y[j];
        }
    }
    s
}
