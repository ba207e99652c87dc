use nalgebra::{DMatrix, DVector};

use super::model::{Point, SpacetimeModel, TangentVector};
use crate::dsl::{Jet2, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::{self, Inertia, InverseFailure, SIGNATURE_TOLERANCE};

/// Relative tolerance used to call a vector or covector null.
pub const NULL_TOLERANCE: f64 = 1e-10;

/// Connection coefficients `Γ^μ_{νρ}`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffels {
    n: usize,
    data: Vec<f64>,
}

impl Christoffels {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, mu: usize, nu: usize, rho: usize) -> f64 {
        self.data[(mu * self.n + nu) * self.n + rho]
    }

    /// `Γ^μ_{νρ} V^ν W^ρ` for every μ.
    pub fn contract(&self, v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|mu| {
                let mut sum = 0.0;
                for nu in 0..n {
                    for rho in 0..n {
                        sum += self.get(mu, nu, rho) * v[nu] * w[rho];
                    }
                }
                sum
            })
            .collect()
    }

    /// Levi-Civita connection from the inverse metric and first derivatives
    /// `dg[λ] = ∂_λ g`. Symmetry in the lower indices is exact.
    pub fn from_metric(g_inverse: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Self {
        let n = g_inverse.nrows();
        let mut data = vec![0.0; n * n * n];
        for nu in 0..n {
            for rho in nu..n {
                // Γ_{σνρ} = ½(∂_ν g_{σρ} + ∂_ρ g_{σν} − ∂_σ g_{νρ})
                let lowered: Vec<f64> = (0..n)
                    .map(|sigma| 0.5 * (dg[nu][(sigma, rho)] + dg[rho][(sigma, nu)] - dg[sigma][(nu, rho)]))
                    .collect();
                for mu in 0..n {
                    let value: f64 = (0..n).map(|sigma| g_inverse[(mu, sigma)] * lowered[sigma]).sum();
                    data[(mu * n + nu) * n + rho] = value;
                    data[(mu * n + rho) * n + nu] = value;
                }
            }
        }
        Self { n, data }
    }
}

/// Metric, inverse, first derivatives, and connection at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricAt {
    pub point: Point,
    pub g: DMatrix<f64>,
    pub g_inverse: DMatrix<f64>,
    /// `dg[λ]` is the matrix `∂_λ g_{μν}`.
    pub dg: Vec<DMatrix<f64>>,
    pub christoffels: Christoffels,
}

impl MetricAt {
    pub fn dimension(&self) -> usize {
        self.g.nrows()
    }

    /// `g_{μν} V^μ W^ν`.
    pub fn inner(&self, v: &[f64], w: &[f64]) -> f64 {
        let n = self.dimension();
        let mut sum = 0.0;
        for mu in 0..n {
            for nu in 0..n {
                sum += self.g[(mu, nu)] * v[mu] * w[nu];
            }
        }
        sum
    }

    /// `g^{μν} ω_ν`.
    pub fn raise(&self, covector: &[f64]) -> Vec<f64> {
        (&self.g_inverse * DVector::from_column_slice(covector))
            .iter()
            .copied()
            .collect()
    }
}

/// Evaluate the metric of `model` at `p`, with exact first derivatives and
/// Christoffel symbols.
pub fn eval_metric(model: &SpacetimeModel, p: &Point) -> Result<MetricAt> {
    model.check_point(p)?;
    let n = model.dimension();
    let params = model.parameter_values();
    let mut g = DMatrix::zeros(n, n);
    let mut dg = vec![DMatrix::zeros(n, n); n];
    for i in 0..n {
        for j in i..n {
            let jet = model.component(i, j).eval_jet(p, params, false)?;
            g[(i, j)] = jet.value;
            g[(j, i)] = jet.value;
            for (l, d) in jet.gradient.iter().enumerate() {
                dg[l][(i, j)] = *d;
                dg[l][(j, i)] = *d;
            }
        }
    }

    let g_inverse = linalg::checked_symmetric_inverse(&g).map_err(|failure| Error::SingularMetric {
        point: p.to_vec(),
        reason: match failure {
            InverseFailure::SmallDeterminant(d) => format!("|det g| = {:e} is below tolerance", d.abs()),
            InverseFailure::IllConditioned(c) => format!("condition number {c:e} exceeds 1e12"),
        },
    })?;

    let inertia = Inertia::of(&g, SIGNATURE_TOLERANCE);
    if !inertia.is_lorentzian() {
        return Err(Error::WrongSignature {
            point: p.to_vec(),
            negative: inertia.negative,
            zero: inertia.zero,
            positive: inertia.positive,
        });
    }

    let christoffels = Christoffels::from_metric(&g_inverse, &dg);
    Ok(MetricAt {
        point: p.clone(),
        g,
        g_inverse,
        dg,
        christoffels,
    })
}

/// `∇_μ∇_ν f = ∂_μ∂_ν f − Γ^λ_{μν} ∂_λ f` from a field jet and the metric.
pub fn covariant_hessian_from(jet: &Jet2, metric: &MetricAt) -> DMatrix<f64> {
    let n = metric.dimension();
    let mut h = DMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu..n {
            let correction: f64 = (0..n)
                .map(|l| metric.christoffels.get(l, mu, nu) * jet.gradient[l])
                .sum();
            let value = jet.hessian(mu, nu) - correction;
            h[(mu, nu)] = value;
            h[(nu, mu)] = value;
        }
    }
    h
}

pub fn covariant_hessian(f: &ScalarField, model: &SpacetimeModel, p: &Point) -> Result<DMatrix<f64>> {
    check_field(f, model)?;
    let metric = eval_metric(model, p)?;
    Ok(covariant_hessian_from(&f.jet(p)?, &metric))
}

pub(crate) fn check_field(f: &ScalarField, model: &SpacetimeModel) -> Result<()> {
    if f.dimension() != model.dimension() {
        return Err(Error::DimensionMismatch {
            expected: model.dimension(),
            got: f.dimension(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalCharacter {
    Timelike,
    Null,
    Spacelike,
}

impl CausalCharacter {
    pub fn as_str(self) -> &'static str {
        match self {
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Null => "null",
            CausalCharacter::Spacelike => "spacelike",
        }
    }
}

/// Classify by the sign of a quadratic form value `q`, where `scale` is the
/// sum of the absolute values of its terms.
fn classify_quadratic(q: f64, scale: f64) -> CausalCharacter {
    if q.abs() <= NULL_TOLERANCE * scale {
        CausalCharacter::Null
    } else if q < 0.0 {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Spacelike
    }
}

fn quadratic_with_scale(m: &DMatrix<f64>, v: &[f64]) -> (f64, f64) {
    let n = v.len();
    let (mut q, mut scale) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let term = m[(i, j)] * v[i] * v[j];
            q += term;
            scale += term.abs();
        }
    }
    (q, scale)
}

/// Causal character of `v` from the sign of `g(v, v)`, with a null band of
/// relative width [`NULL_TOLERANCE`].
pub fn classify_vector(metric: &MetricAt, v: &TangentVector) -> Result<CausalCharacter> {
    let n = metric.dimension();
    if v.components.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.components.len(),
        });
    }
    let (q, scale) = quadratic_with_scale(&metric.g, &v.components);
    Ok(classify_quadratic(q, scale))
}

/// Sign and magnitude of `∇_μ f ∇^μ f`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientInvariant {
    /// +1 for a spacelike gradient, −1 for a timelike one.
    pub epsilon: f64,
    /// `√(ε ∇_μ f ∇^μ f)`.
    pub norm: f64,
    /// `∇_μ f ∇^μ f`.
    pub norm_squared: f64,
    /// `∂_μ f`.
    pub covector: Vec<f64>,
    /// `∇^μ f`.
    pub raised: Vec<f64>,
}

pub fn gradient_invariant_from(jet: &Jet2, metric: &MetricAt) -> Result<GradientInvariant> {
    gradient_invariant_of(&jet.gradient, metric)
}

/// [`GradientInvariant`] of the covector `df` at `metric.point`.
pub fn gradient_invariant_of(df: &[f64], metric: &MetricAt) -> Result<GradientInvariant> {
    let (s, scale) = quadratic_with_scale(&metric.g_inverse, df);
    if s.abs() <= NULL_TOLERANCE * scale.max(1.0) {
        return Err(Error::NullGradient {
            point: metric.point.to_vec(),
            norm_sq: s,
        });
    }
    let epsilon = if s > 0.0 { 1.0 } else { -1.0 };
    Ok(GradientInvariant {
        epsilon,
        norm: (epsilon * s).sqrt(),
        norm_squared: s,
        covector: df.to_vec(),
        raised: metric.raise(df),
    })
}

pub fn gradient_invariant(f: &ScalarField, model: &SpacetimeModel, p: &Point) -> Result<GradientInvariant> {
    check_field(f, model)?;
    let metric = eval_metric(model, p)?;
    gradient_invariant_from(&f.jet(p)?, &metric)
}
