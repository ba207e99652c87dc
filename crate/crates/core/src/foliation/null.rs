use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::geometry::{eval_metric, Point, SpacetimeModel};

const STRUCTURE_TOLERANCE: f64 = 1e-12;
const MARGINAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trapping {
    Untrapped,
    /// Both expansions negative.
    FutureTrapped,
    /// Both expansions positive.
    PastTrapped,
    MarginallyOuterTrapped,
    MarginallyInnerTrapped,
    /// Both expansions vanish.
    MarginallyInnerAndOuterTrapped,
}

/// Expansions of the two future null normals of the round sphere through `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct NullExpansions {
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub area_radius: f64,
    /// `ℓ±` in base components, normalised by `g(ℓ±, t̂) = −1`.
    pub l_plus: [f64; 2],
    pub l_minus: [f64; 2],
    pub trapping: Trapping,
}

fn classify(plus: f64, minus: f64) -> Trapping {
    let zero = |x: f64| x.abs() <= MARGINAL_TOLERANCE;
    match (zero(plus), zero(minus)) {
        (true, true) => Trapping::MarginallyInnerAndOuterTrapped,
        (true, false) => Trapping::MarginallyOuterTrapped,
        (false, true) => Trapping::MarginallyInnerTrapped,
        _ if plus < 0.0 && minus < 0.0 => Trapping::FutureTrapped,
        _ if plus > 0.0 && minus > 0.0 => Trapping::PastTrapped,
        _ => Trapping::Untrapped,
    }
}

/// `θ± = (2/R) ℓ±^a ∂_a R` for a model in block form
/// `γ_ab(y) dy^a dy^b + R(y)² dΩ²`.
///
/// `ℓ± = t̂ ± ŝ` where `t̂` is the declared future direction normalised to
/// `γ(t̂, t̂) = −1` and `ŝ` is the unit spacelike direction orthogonal to it,
/// oriented along the base coordinate it was seeded from.
pub fn null_expansions(model: &SpacetimeModel, y: [f64; 2]) -> Result<NullExpansions> {
    let block = model
        .block_form()
        .ok_or_else(|| Error::NotBlockForm(model.name().to_owned()))?;
    let n = model.dimension();
    let [a, b] = block.base;
    let mut coords = vec![0.0; n];
    for &(k, v) in &block.sphere_point {
        coords[k] = v;
    }
    coords[a] = y[0];
    coords[b] = y[1];
    let p = Point::new(coords);
    let metric = eval_metric(model, &p)?;

    let sphere: Vec<usize> = (0..n).filter(|k| *k != a && *k != b).collect();
    for &base in &block.base {
        for &z in &sphere {
            if metric.g[(base, z)].abs() > STRUCTURE_TOLERANCE {
                return Err(Error::NotBlockForm(format!(
                    "{}: g mixes base and sphere directions",
                    model.name()
                )));
            }
        }
    }
    for &z in &sphere {
        for &i in &block.base {
            for &j in &block.base {
                if metric.dg[z][(i, j)].abs() > STRUCTURE_TOLERANCE {
                    return Err(Error::NotBlockForm(format!(
                        "{}: the 2D Lorentzian block depends on {}",
                        model.name(),
                        model.coordinates()[z]
                    )));
                }
            }
        }
    }

    let params = model.parameter_values();
    let radius = block.area_radius.eval_jet(&p, params, false)?;
    if !(radius.value > 0.0) {
        return Err(Error::OutOfDomain(format!("area radius {} is not positive", radius.value)));
    }
    let gamma = Matrix2::new(metric.g[(a, a)], metric.g[(a, b)], metric.g[(b, a)], metric.g[(b, b)]);
    let inner = |u: [f64; 2], v: [f64; 2]| {
        gamma[(0, 0)] * u[0] * v[0] + gamma[(0, 1)] * (u[0] * v[1] + u[1] * v[0]) + gamma[(1, 1)] * u[1] * v[1]
    };

    let future = [block.future[0].eval(&p, params)?, block.future[1].eval(&p, params)?];
    let q = inner(future, future);
    if !(q < 0.0) {
        return Err(Error::InvalidModel(format!(
            "{}: declared future vector is not timelike at {:?}",
            model.name(),
            p.coordinates()
        )));
    }
    let s = 1.0 / (-q).sqrt();
    let t_hat = [future[0] * s, future[1] * s];

    let mut best: Option<([f64; 2], f64, usize)> = None;
    for seed in 0..2 {
        let mut e = [0.0; 2];
        e[seed] = 1.0;
        let proj = inner(e, t_hat);
        let r = [e[0] + proj * t_hat[0], e[1] + proj * t_hat[1]];
        let norm = inner(r, r);
        if best.is_none_or(|(_, bn, _)| norm > bn) {
            best = Some((r, norm, seed));
        }
    }
    let (r, norm, seed) = best.expect("two seeds");
    let sign = if r[seed] < 0.0 { -1.0 } else { 1.0 };
    let scale = sign / norm.sqrt();
    let s_hat = [r[0] * scale, r[1] * scale];

    let l_plus = [t_hat[0] + s_hat[0], t_hat[1] + s_hat[1]];
    let l_minus = [t_hat[0] - s_hat[0], t_hat[1] - s_hat[1]];
    let d_r = [radius.gradient[a], radius.gradient[b]];
    let expansion = |l: [f64; 2]| 2.0 / radius.value * (l[0] * d_r[0] + l[1] * d_r[1]);
    let (theta_plus, theta_minus) = (expansion(l_plus), expansion(l_minus));
    Ok(NullExpansions {
        theta_plus,
        theta_minus,
        area_radius: radius.value,
        l_plus,
        l_minus,
        trapping: classify(theta_plus, theta_minus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn minkowski_sphere_expands_out_and_contracts_in() {
        let m = catalog::model("minkowski-spherical").unwrap();
        let e = null_expansions(&m, [0.0, 2.0]).unwrap();
        assert!((e.theta_plus - 1.0).abs() < 1e-12);
        assert!((e.theta_minus + 1.0).abs() < 1e-12);
        assert_eq!(e.trapping, Trapping::Untrapped);
    }

    #[test]
    fn cylinder_is_marginal_both_ways() {
        let m = catalog::model("flat-cylinder").unwrap();
        let e = null_expansions(&m, [0.3, -0.7]).unwrap();
        assert_eq!((e.theta_plus, e.theta_minus), (0.0, 0.0));
        assert_eq!(e.trapping, Trapping::MarginallyInnerAndOuterTrapped);
    }

    #[test]
    fn interior_spheres_are_trapped() {
        let m = catalog::model("schwarzschild-interior").unwrap();
        let e = null_expansions(&m, [0.0, 1.0]).unwrap();
        assert!(e.theta_plus * e.theta_minus > 0.0);
        assert_eq!(e.trapping, Trapping::FutureTrapped);
    }

    #[test]
    fn models_without_split_are_rejected() {
        let m = catalog::model("minkowski-cartesian").unwrap();
        assert!(matches!(null_expansions(&m, [0.0, 1.0]), Err(Error::NotBlockForm(_))));
    }
}
