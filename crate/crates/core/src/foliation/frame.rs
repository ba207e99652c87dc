use nalgebra::DMatrix;

use crate::dsl::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::{
    check_field, covariant_hessian_from, eval_metric, gradient_invariant_from, gradient_invariant_of, MetricAt, Point, SpacetimeModel,
    TangentVector,
};

/// Unit normal and orthonormal tangent basis of the level set of `f`
/// through a point.
///
/// The normal is oriented so that `f` decreases along it:
/// `n^μ = −ε ∇^μ f / N`, giving `g(n, n) = ε` and `n^μ ∂_μ f = −N`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSetFrame {
    pub point: Point,
    /// +1 for a spacelike gradient (timelike level set), −1 for a timelike one.
    pub epsilon: f64,
    /// `√(ε ∇_μ f ∇^μ f)`.
    pub norm: f64,
    pub unit_normal: TangentVector,
    /// `dimension − 1` vectors, mutually g-orthogonal and orthogonal to the normal.
    pub tangent_basis: Vec<Vec<f64>>,
    /// `g(e_a, e_a)`, each ±1.
    pub basis_signs: Vec<f64>,
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

impl LevelSetFrame {
    pub fn at(f: &ScalarField, model: &SpacetimeModel, p: &Point) -> Result<Self> {
        check_field(f, model)?;
        let metric = eval_metric(model, p)?;
        Self::from_metric(&metric, &f.jet(p)?.gradient)
    }

    /// Frame for the level set with covector `df` at `metric.point`.
    ///
    /// The tangent basis comes from Gram–Schmidt on the coordinate directions,
    /// at each step taking the candidate with the largest rejection `|g(v, v)|`
    /// (lowest index on ties), with one re-orthogonalisation pass.
    pub fn from_metric(metric: &MetricAt, df: &[f64]) -> Result<Self> {
        let n = metric.dimension();
        let grad = gradient_invariant_of(df, metric)?;
        let normal: Vec<f64> = grad.raised.iter().map(|v| -grad.epsilon * v / grad.norm).collect();

        let mut chosen: Vec<(Vec<f64>, f64)> = vec![(normal.clone(), grad.epsilon)];
        let reject = |v: &mut Vec<f64>, chosen: &[(Vec<f64>, f64)]| {
            for _ in 0..2 {
                for (e, sign) in chosen {
                    let proj = sign * metric.inner(v, e);
                    axpy(v, -proj, e);
                }
            }
        };

        let mut remaining: Vec<usize> = (0..n).collect();
        for _ in 0..n - 1 {
            let mut best: Option<(usize, Vec<f64>, f64)> = None;
            for (slot, &k) in remaining.iter().enumerate() {
                let mut v = vec![0.0; n];
                v[k] = 1.0;
                reject(&mut v, &chosen);
                let q = metric.inner(&v, &v);
                if best.as_ref().is_none_or(|(_, _, bq)| q.abs() > bq.abs()) {
                    best = Some((slot, v, q));
                }
            }
            let (slot, mut v, q) = best.expect("candidates remain");
            if q.abs() < 1e-14 {
                return Err(Error::NullGradient {
                    point: metric.point.to_vec(),
                    norm_sq: grad.norm_squared,
                });
            }
            remaining.remove(slot);
            let scale = 1.0 / q.abs().sqrt();
            v.iter_mut().for_each(|x| *x *= scale);
            chosen.push((v, q.signum()));
        }

        let (tangent_basis, basis_signs) = chosen.into_iter().skip(1).unzip();
        Ok(Self {
            point: metric.point.clone(),
            epsilon: grad.epsilon,
            norm: grad.norm,
            unit_normal: TangentVector::new(normal, metric.point.clone()),
            tangent_basis,
            basis_signs,
        })
    }

    /// `g(X_a, X_b)` for vectors assumed tangent to the level set.
    pub fn induced_metric(metric: &MetricAt, vectors: &[Vec<f64>]) -> DMatrix<f64> {
        let k = vectors.len();
        DMatrix::from_fn(k, k, |a, b| metric.inner(&vectors[a], &vectors[b]))
    }
}

/// `K(e_a, e_b)` on the frame's tangent basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    pub frame: LevelSetFrame,
    pub matrix: DMatrix<f64>,
}

impl SecondFundamentalForm {
    /// Trace with the induced metric, `Σ_a g(e_a, e_a) K(e_a, e_a)`.
    pub fn trace(&self) -> f64 {
        self.frame
            .basis_signs
            .iter()
            .enumerate()
            .map(|(a, s)| s * self.matrix[(a, a)])
            .sum()
    }
}

fn bilinear(h: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut sum = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            sum += h[(mu, nu)] * x[mu] * y[nu];
        }
    }
    sum
}

/// `K(X, Y) = X^μ Y^ν ∇_μ∇_ν f / √(ε ∇f·∇f)` on the level-set tangent basis.
pub fn second_fundamental_form(f: &ScalarField, model: &SpacetimeModel, p: &Point) -> Result<SecondFundamentalForm> {
    check_field(f, model)?;
    let metric = eval_metric(model, p)?;
    let jet = f.jet(p)?;
    let frame = LevelSetFrame::from_metric(&metric, &jet.gradient)?;
    let h = covariant_hessian_from(&jet, &metric);
    let k = frame.tangent_basis.len();
    let matrix = DMatrix::from_fn(k, k, |a, b| {
        bilinear(&h, &frame.tangent_basis[a], &frame.tangent_basis[b]) / frame.norm
    });
    // exact symmetry
    let matrix = (&matrix + matrix.transpose()) * 0.5;
    Ok(SecondFundamentalForm { frame, matrix })
}

/// `Tr K = h^{μν} ∇_μ∇_ν f / N` with `h^{μν} = g^{μν} − ε n^μ n^ν`.
pub fn mean_curvature(f: &ScalarField, model: &SpacetimeModel, p: &Point) -> Result<f64> {
    check_field(f, model)?;
    let metric = eval_metric(model, p)?;
    let jet = f.jet(p)?;
    let grad = gradient_invariant_from(&jet, &metric)?;
    let h = covariant_hessian_from(&jet, &metric);
    let n = metric.dimension();
    let normal: Vec<f64> = grad.raised.iter().map(|v| -grad.epsilon * v / grad.norm).collect();
    let mut trace = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            let induced_inverse = metric.g_inverse[(mu, nu)] - grad.epsilon * normal[mu] * normal[nu];
            trace += induced_inverse * h[(mu, nu)];
        }
    }
    Ok(trace / grad.norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn normal_orientation_and_orthogonality() {
        let m = catalog::model("minkowski-cartesian").unwrap();
        let f = catalog::canonical_field(&m, 1.0).unwrap();
        let p = Point::from([2.0, 0.3, -0.4, 0.1]);
        let metric = eval_metric(&m, &p).unwrap();
        let df = f.jet(&p).unwrap().gradient;
        let frame = LevelSetFrame::from_metric(&metric, &df).unwrap();
        let n = &frame.unit_normal.components;
        assert_eq!(frame.epsilon, -1.0);
        assert!((metric.inner(n, n) + 1.0).abs() < 1e-12);
        let along: f64 = n.iter().zip(&df).map(|(a, b)| a * b).sum();
        assert!(along < 0.0);
        for (a, e) in frame.tangent_basis.iter().enumerate() {
            assert!(metric.inner(e, n).abs() < 1e-10);
            assert!((metric.inner(e, e) - frame.basis_signs[a]).abs() < 1e-12);
            for e2 in &frame.tangent_basis[a + 1..] {
                assert!(metric.inner(e, e2).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn timelike_level_set_has_lorentzian_tangent_basis() {
        let m = catalog::model("minkowski-cartesian").unwrap();
        let f = m.field("x + 0.2*t", &[]).unwrap();
        let frame = LevelSetFrame::at(&f, &m, &Point::from([0.0; 4])).unwrap();
        assert_eq!(frame.epsilon, 1.0);
        let negatives = frame.basis_signs.iter().filter(|s| **s < 0.0).count();
        assert_eq!(negatives, 1);
    }

    #[test]
    fn flat_time_slices_have_no_extrinsic_curvature() {
        let m = catalog::model("minkowski-cartesian").unwrap();
        let f = m.field("t", &[]).unwrap();
        let p = Point::from([0.5, 1.0, 2.0, 3.0]);
        let k = second_fundamental_form(&f, &m, &p).unwrap();
        assert_eq!(k.matrix, DMatrix::zeros(3, 3));
        assert_eq!(mean_curvature(&f, &m, &p).unwrap(), 0.0);
    }
}
