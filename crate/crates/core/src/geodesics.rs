//! Fixed-step geodesic integration and convexity margins along curves.

use crate::dsl::{Expr, ScalarField, Symbols};
use crate::error::{Error, Result};
use crate::geometry::{
    check_field, classify_vector, covariant_hessian_from, eval_metric, CausalCharacter, MetricAt, Point,
    SpacetimeModel, TangentVector,
};

pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicState {
    pub position: Point,
    pub velocity: TangentVector,
}

impl GeodesicState {
    pub fn new(position: impl Into<Point>, velocity: Vec<f64>) -> Self {
        let position = position.into();
        Self {
            velocity: TangentVector::new(velocity, position.clone()),
            position,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// `(λ, state)` with `λ` strictly increasing.
    pub samples: Vec<(f64, GeodesicState)>,
    /// `g(γ′, γ′)` at each sample.
    pub norm_history: Vec<f64>,
    pub step_size: f64,
    /// Set when integration stopped early at a singular locus or chart edge.
    pub truncated: bool,
}

impl Trajectory {
    /// `max_i |g(γ′,γ′)_i − g(γ′,γ′)_0|`.
    pub fn norm_drift(&self) -> f64 {
        let first = self.norm_history.first().copied().unwrap_or(0.0);
        self.norm_history.iter().map(|q| (q - first).abs()).fold(0.0, f64::max)
    }

    /// `C` in `drift = C·h⁴`.
    pub fn drift_constant(&self) -> f64 {
        self.norm_drift() / self.step_size.powi(4)
    }

    pub fn last(&self) -> &GeodesicState {
        &self.samples.last().expect("trajectories are nonempty").1
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GeodesicError {
    #[error("geodesic left the regular region at lambda = {lambda}: {reason}")]
    SingularRegionEntered {
        lambda: f64,
        reason: Box<Error>,
        trajectory: Box<Trajectory>,
    },
    #[error(transparent)]
    Other(#[from] Error),
}

fn acceleration(metric: &MetricAt, v: &[f64]) -> Vec<f64> {
    metric.christoffels.contract(v, v).into_iter().map(|a| -a).collect()
}

fn leaves_regular_region(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularMetric { .. } | Error::OutsideChart { .. } | Error::WrongSignature { .. }
    )
}

/// Classical RK4 on `ẍ^μ = −Γ^μ_{νρ} ẋ^ν ẋ^ρ` from `span.0` to `span.1`.
///
/// The step is shrunk to `span / ⌈span / h⌉` so the last sample lands on `span.1`.
pub fn integrate_geodesic(
    model: &SpacetimeModel,
    s0: &GeodesicState,
    span: (f64, f64),
    h: f64,
) -> std::result::Result<Trajectory, GeodesicError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::StepSizeInvalid(h).into());
    }
    let (l0, l1) = span;
    if !(l1 > l0) || !l0.is_finite() || !l1.is_finite() {
        return Err(Error::InvalidQuery(format!("need lambda_0 < lambda_1, got [{l0}, {l1}]")).into());
    }
    let n = model.dimension();
    if s0.position.len() != n || s0.velocity.components.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s0.velocity.components.len().min(s0.position.len()),
        }
        .into());
    }
    let steps = ((l1 - l0) / h).ceil().max(1.0) as usize;
    let h = (l1 - l0) / steps as f64;

    let metric0 = eval_metric(model, &s0.position)?;
    let mut trajectory = Trajectory {
        samples: vec![(l0, s0.clone())],
        norm_history: vec![metric0.inner(&s0.velocity.components, &s0.velocity.components)],
        step_size: h,
        truncated: false,
    };
    let mut x = s0.position.to_vec();
    let mut v = s0.velocity.components.clone();
    let mut a = acceleration(&metric0, &v);

    let shifted = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> { base.iter().zip(k).map(|(b, k)| b + s * k).collect() };

    for step in 1..=steps {
        let lambda_prev = l0 + (step - 1) as f64 * h;
        let stage = |x: &[f64], v: &[f64]| -> Result<Vec<f64>> {
            let metric = eval_metric(model, &Point::from(x))?;
            Ok(acceleration(&metric, v))
        };
        let result = (|| -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, f64)> {
            let (k1x, k1v) = (v.clone(), a.clone());
            let (x2, v2) = (shifted(&x, &k1x, 0.5 * h), shifted(&v, &k1v, 0.5 * h));
            let k2v = stage(&x2, &v2)?;
            let k2x = v2;
            let (x3, v3) = (shifted(&x, &k2x, 0.5 * h), shifted(&v, &k2v, 0.5 * h));
            let k3v = stage(&x3, &v3)?;
            let k3x = v3;
            let (x4, v4) = (shifted(&x, &k3x, h), shifted(&v, &k3v, h));
            let k4v = stage(&x4, &v4)?;
            let k4x = v4;
            let combine = |base: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
                (0..n)
                    .map(|i| base[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            };
            let x_new = combine(&x, &k1x, &k2x, &k3x, &k4x);
            let v_new = combine(&v, &k1v, &k2v, &k3v, &k4v);
            let metric = eval_metric(model, &Point::from(x_new.as_slice()))?;
            let norm = metric.inner(&v_new, &v_new);
            let a_new = acceleration(&metric, &v_new);
            Ok((x_new, v_new, a_new, norm))
        })();

        match result {
            Ok((x_new, v_new, a_new, norm)) => {
                x = x_new;
                v = v_new;
                a = a_new;
                let lambda = if step == steps { l1 } else { l0 + step as f64 * h };
                trajectory
                    .samples
                    .push((lambda, GeodesicState::new(x.clone(), v.clone())));
                trajectory.norm_history.push(norm);
            }
            Err(e) if leaves_regular_region(&e) => {
                trajectory.truncated = true;
                return Err(GeodesicError::SingularRegionEntered {
                    lambda: lambda_prev,
                    reason: Box::new(e),
                    trajectory: Box::new(trajectory),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(trajectory)
}

/// Per-sample `m(λ) = γ′^μγ′^ν∇_μ∇_ν f − c g(γ′, γ′)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginReport {
    pub margins: Vec<(f64, f64)>,
    pub min_margin: f64,
    pub argmin_index: usize,
    pub argmin_lambda: f64,
    /// `min_margin < −tolerance`.
    pub violated: bool,
    pub tolerance: f64,
    pub initial_class: CausalCharacter,
}

/// Margin of the convexity inequality with `V = γ′` along a trajectory.
///
/// Along a geodesic the first term equals `d²(f∘γ)/dλ²`.
pub fn convexity_along_curve(
    f: &ScalarField,
    model: &SpacetimeModel,
    trajectory: &Trajectory,
    c: f64,
    tolerance: f64,
) -> Result<MarginReport> {
    check_field(f, model)?;
    if trajectory.samples.is_empty() {
        return Err(Error::InvalidQuery("empty trajectory".into()));
    }
    let mut margins = Vec::with_capacity(trajectory.samples.len());
    let mut initial_class = CausalCharacter::Null;
    for (i, (lambda, state)) in trajectory.samples.iter().enumerate() {
        let metric = eval_metric(model, &state.position)?;
        if i == 0 {
            initial_class = classify_vector(&metric, &state.velocity)?;
        }
        let h = covariant_hessian_from(&f.jet(&state.position)?, &metric);
        let v = &state.velocity.components;
        let mut hvv = 0.0;
        for mu in 0..v.len() {
            for nu in 0..v.len() {
                hvv += h[(mu, nu)] * v[mu] * v[nu];
            }
        }
        margins.push((*lambda, hvv - c * metric.inner(v, v)));
    }
    let (argmin_index, &(argmin_lambda, min_margin)) = margins
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("nonempty");
    Ok(MarginReport {
        violated: min_margin < -tolerance,
        margins,
        min_margin,
        argmin_index,
        argmin_lambda,
        tolerance,
        initial_class,
    })
}

/// A curve `s ↦ x(s)` on `[0, 1]` with its first two derivatives.
pub trait ParametrizedCurve {
    fn dimension(&self) -> usize;
    /// `(x, x′, x″)` at `s`.
    fn derivatives(&self, s: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)>;
}

/// A curve given by one expression in `s` per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpressionCurve {
    components: Vec<Expr>,
    values: Vec<f64>,
}

impl ExpressionCurve {
    /// Parse each component over the variable `s`. `pi` is always bound.
    pub fn new<S: AsRef<str>>(components: &[S], parameters: &[(String, f64)]) -> Result<Self> {
        let mut parameters = parameters.to_vec();
        if !parameters.iter().any(|(n, _)| n == "pi") {
            parameters.push(("pi".into(), std::f64::consts::PI));
        }
        let symbols = Symbols::new(["s".to_owned()], parameters.iter().map(|(n, _)| n.clone()));
        let components = components
            .iter()
            .map(|c| crate::dsl::parse(c.as_ref(), &symbols))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            components,
            values: parameters.iter().map(|(_, v)| *v).collect(),
        })
    }
}

impl ParametrizedCurve for ExpressionCurve {
    fn dimension(&self) -> usize {
        self.components.len()
    }

    fn derivatives(&self, s: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let mut x = Vec::with_capacity(self.components.len());
        let mut dx = Vec::with_capacity(self.components.len());
        let mut ddx = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let jet = c.eval_jet(&[s], &self.values, true)?;
            x.push(jet.value);
            dx.push(jet.gradient[0]);
            ddx.push(jet.hessian(0, 0));
        }
        Ok((x, dx, ddx))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoopVerdict {
    /// Somewhere on the loop `d²(f∘γ)/ds² < c g(γ′, γ′)`: the loop cannot be a
    /// geodesic along which `f` satisfies the convexity inequality.
    Obstructed { min_margin: f64, at: f64 },
    Unobstructed { min_margin: f64 },
}

impl LoopVerdict {
    pub fn min_margin(&self) -> f64 {
        match self {
            LoopVerdict::Obstructed { min_margin, .. } | LoopVerdict::Unobstructed { min_margin } => *min_margin,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopProbe {
    pub verdict: LoopVerdict,
    /// `(s, d²(f∘γ)/ds², g(γ′, γ′), margin)` at each sample.
    pub samples: Vec<(f64, f64, f64, f64)>,
    /// Mean of `d²(f∘γ)/ds²` over the loop; zero for a closed curve up to quadrature error.
    pub mean_second_derivative: f64,
}

const CLOSURE_TOLERANCE: f64 = 1e-9;

/// Evaluate `d²(f∘γ)/ds² − c g(γ′, γ′)` at `samples` points of a closed loop.
pub fn closed_curve_probe(
    f: &ScalarField,
    model: &SpacetimeModel,
    curve: &dyn ParametrizedCurve,
    c: f64,
    samples: usize,
) -> Result<LoopProbe> {
    check_field(f, model)?;
    let n = model.dimension();
    if curve.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: curve.dimension(),
        });
    }
    if samples < 3 {
        return Err(Error::InvalidQuery(format!("need at least 3 samples, got {samples}")));
    }
    let (start, _, _) = curve.derivatives(0.0)?;
    let (end, _, _) = curve.derivatives(1.0)?;
    let gap = start.iter().zip(&end).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > CLOSURE_TOLERANCE {
        return Err(Error::NotClosed(format!("endpoints differ by {gap:e}")));
    }

    let mut rows = Vec::with_capacity(samples);
    let mut extent: f64 = 0.0;
    for i in 0..samples {
        let s = i as f64 / samples as f64;
        let (x, dx, ddx) = curve.derivatives(s)?;
        extent = extent.max(x.iter().zip(&start).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        let p = Point::from(x);
        let metric = eval_metric(model, &p)?;
        let jet = f.jet(&p)?;
        let mut second = 0.0;
        for mu in 0..n {
            second += jet.gradient[mu] * ddx[mu];
            for nu in 0..n {
                second += jet.hessian(mu, nu) * dx[mu] * dx[nu];
            }
        }
        let q = metric.inner(&dx, &dx);
        rows.push((s, second, q, second - c * q));
    }
    if extent <= CLOSURE_TOLERANCE {
        return Err(Error::NotClosed("loop has zero extent".into()));
    }

    let (at, min_margin) = rows
        .iter()
        .map(|r| (r.0, r.3))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("samples");
    let verdict = if min_margin < 0.0 {
        LoopVerdict::Obstructed { min_margin, at }
    } else {
        LoopVerdict::Unobstructed { min_margin }
    };
    let mean_second_derivative = rows.iter().map(|r| r.1).sum::<f64>() / samples as f64;
    Ok(LoopProbe {
        verdict,
        samples: rows,
        mean_second_derivative,
    })
}
