//! Pointwise and sampled-region checks of the spacetime-convexity condition
//! `V^μV^ν∇_μ∇_ν f ≥ c g_{μν}V^μV^ν` together with the Lorentzian-signature
//! requirement on the Hessian.
//!
//! At a single point the admissible constants form the superlevel set
//! `{c : λ_min(H − cG) ≥ −tol}` of a concave function of `c`, hence an
//! interval. It is located by a golden-section search for the maximum of
//! `λ_min(H − cG)` followed by bisection on both sides.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dsl::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::{check_field, covariant_hessian_from, eval_metric, Point, SpacetimeModel};
use crate::linalg::{min_eigenvalue, Inertia, SIGNATURE_TOLERANCE};

pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_C_CEILING: f64 = 1e3;

const GOLDEN_ITERATIONS: usize = 120;
const BISECTION_ITERATIONS: usize = 80;

/// Closed interval `[lo, hi]` of admissible constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CInterval {
    pub lo: f64,
    pub hi: f64,
    /// The upper end was clipped at the search ceiling.
    pub ceiling_hit: bool,
}

impl CInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, c: f64) -> bool {
        self.lo <= c && c <= self.hi
    }

    pub fn intersect(&self, other: &CInterval) -> Option<CInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(CInterval {
            lo,
            hi,
            ceiling_hit: self.ceiling_hit && other.ceiling_hit,
        })
    }
}

fn psd_margin(h: &DMatrix<f64>, g: &DMatrix<f64>, c: f64) -> f64 {
    min_eigenvalue(&(h - g * c))
}

/// The set `{c ∈ (0, ceiling] : H − cG ⪰ −tol·I}`, or `None` if empty.
///
/// `lo` is reported as `0.0` when every small positive `c` is admissible.
/// Values `c ≤ tolerance` are not distinguishable from zero, so a set that
/// ends there counts as empty.
pub fn admissible_c_interval(
    h: &DMatrix<f64>,
    g: &DMatrix<f64>,
    tolerance: f64,
    ceiling: f64,
) -> Result<Option<CInterval>> {
    if h.shape() != g.shape() || !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: g.nrows(),
            got: h.nrows(),
        });
    }
    if !Inertia::of(g, SIGNATURE_TOLERANCE).is_lorentzian() {
        return Err(Error::NonLorentzianMetric);
    }
    if !(ceiling > 0.0) {
        return Err(Error::InvalidQuery(format!("c ceiling must be positive, got {ceiling}")));
    }
    let phi = |c: f64| psd_margin(h, g, c);
    let feasible = |c: f64| phi(c) >= -tolerance;

    // Golden-section search for the maximiser of the concave margin.
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, ceiling);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (phi(x1), phi(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = phi(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = phi(x1);
        }
    }
    let mut best = if f1 >= f2 { x1 } else { x2 };
    for candidate in [0.0, ceiling] {
        if phi(candidate) > phi(best) {
            best = candidate;
        }
    }
    if !feasible(best) {
        return Ok(None);
    }

    let lo = if feasible(0.0) {
        0.0
    } else {
        let (mut out, mut inside) = (0.0, best);
        for _ in 0..BISECTION_ITERATIONS {
            let mid = 0.5 * (out + inside);
            if feasible(mid) {
                inside = mid;
            } else {
                out = mid;
            }
        }
        inside
    };
    let (hi, ceiling_hit) = if feasible(ceiling) {
        (ceiling, true)
    } else {
        let (mut inside, mut out) = (best, ceiling);
        for _ in 0..BISECTION_ITERATIONS {
            let mid = 0.5 * (inside + out);
            if feasible(mid) {
                inside = mid;
            } else {
                out = mid;
            }
        }
        (inside, false)
    };
    if hi <= tolerance {
        return Ok(None);
    }
    Ok(Some(CInterval { lo, hi, ceiling_hit }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignatureKind {
    Lorentzian,
    Riemannian,
    Degenerate,
    Indefinite,
}

impl SignatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SignatureKind::Lorentzian => "Lorentzian",
            SignatureKind::Riemannian => "Riemannian",
            SignatureKind::Degenerate => "degenerate",
            SignatureKind::Indefinite => "indefinite",
        }
    }
}

/// Eigenvalue sign counts of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HessianSignature {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    pub kind: SignatureKind,
}

impl HessianSignature {
    pub fn is_lorentzian(&self) -> bool {
        self.kind == SignatureKind::Lorentzian
    }
}

pub fn hessian_signature(h: &DMatrix<f64>) -> HessianSignature {
    let i = Inertia::of(h, SIGNATURE_TOLERANCE);
    let kind = if i.zero > 0 {
        SignatureKind::Degenerate
    } else if i.is_lorentzian() {
        SignatureKind::Lorentzian
    } else if i.negative == 0 {
        SignatureKind::Riemannian
    } else {
        SignatureKind::Indefinite
    };
    HessianSignature {
        negative: i.negative,
        zero: i.zero,
        positive: i.positive,
        kind,
    }
}

/// Sampled region over which the condition is checked.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityQuery {
    /// Per-coordinate `[lo, hi]`.
    pub region: Vec<(f64, f64)>,
    pub samples_per_axis: usize,
    pub psd_tolerance: f64,
    pub c_search_ceiling: f64,
}

impl ConvexityQuery {
    pub fn new(region: Vec<(f64, f64)>, samples_per_axis: usize) -> Self {
        Self {
            region,
            samples_per_axis,
            psd_tolerance: DEFAULT_PSD_TOLERANCE,
            c_search_ceiling: DEFAULT_C_CEILING,
        }
    }

    pub fn validate(&self, model: &SpacetimeModel) -> Result<()> {
        if self.samples_per_axis < 2 {
            return Err(Error::InvalidQuery(format!(
                "samples_per_axis must be at least 2, got {}",
                self.samples_per_axis
            )));
        }
        if !(self.psd_tolerance >= 0.0) {
            return Err(Error::InvalidQuery("psd tolerance must be non-negative".into()));
        }
        if !(self.c_search_ceiling > 0.0) {
            return Err(Error::InvalidQuery("c ceiling must be positive".into()));
        }
        model.check_region(&self.region)
    }

    pub fn grid_size(&self) -> usize {
        self.samples_per_axis.pow(self.region.len() as u32)
    }

    /// Grid points in row-major order (last coordinate varies fastest).
    pub fn grid_points(&self) -> Vec<Point> {
        let n = self.region.len();
        let k = self.samples_per_axis;
        let axis = |d: usize, i: usize| {
            let (lo, hi) = self.region[d];
            if i + 1 == k {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (k - 1) as f64
            }
        };
        (0..self.grid_size())
            .map(|mut index| {
                let mut coords = vec![0.0; n];
                for d in (0..n).rev() {
                    coords[d] = axis(d, index % k);
                    index /= k;
                }
                Point::new(coords)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Violated,
    Degenerate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Violated => "violated",
            Verdict::Degenerate => "degenerate",
        }
    }
}

/// Summary of the per-point admissible intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct PerPointStats {
    pub samples: usize,
    pub empty_points: usize,
    pub min_lo: f64,
    pub max_lo: f64,
    pub min_hi: f64,
    pub max_hi: f64,
}

/// Result of a sampled-region check. The verdict only covers the grid
/// points; `samples_per_axis` records the resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityCertificate {
    pub verdict: Verdict,
    pub c_interval: Option<CInterval>,
    /// First grid point at which the running intersection became empty.
    pub witness: Option<Point>,
    pub stats: PerPointStats,
    pub lorentzian_hessian_everywhere: bool,
    pub first_non_lorentzian: Option<(Point, HessianSignature)>,
    /// Points where the inequality admits some c > 0 but the Hessian is not Lorentzian.
    pub inequality_without_signature: usize,
    /// Points where the Hessian is Lorentzian but no c > 0 is admissible.
    pub signature_without_inequality: usize,
    pub samples_per_axis: usize,
    pub psd_tolerance: f64,
    pub c_search_ceiling: f64,
}

impl ConvexityCertificate {
    pub fn method(&self) -> &'static str {
        "sampled"
    }
}

struct PointOutcome {
    interval: Option<CInterval>,
    signature: HessianSignature,
}

/// Check both clauses of the convexity definition on every grid point of
/// `query` and intersect the admissible intervals.
pub fn certify_region(
    model: &SpacetimeModel,
    f: &ScalarField,
    query: &ConvexityQuery,
) -> Result<ConvexityCertificate> {
    check_field(f, model)?;
    query.validate(model)?;
    let points = query.grid_points();

    let outcomes: Vec<Result<PointOutcome>> = points
        .par_iter()
        .map(|p| {
            let metric = eval_metric(model, p)?;
            let h = covariant_hessian_from(&f.jet(p)?, &metric);
            Ok(PointOutcome {
                interval: admissible_c_interval(&h, &metric.g, query.psd_tolerance, query.c_search_ceiling)?,
                signature: hessian_signature(&h),
            })
        })
        .collect();

    let mut running: Option<Option<CInterval>> = None;
    let mut witness = None;
    let mut stats = PerPointStats {
        samples: points.len(),
        empty_points: 0,
        min_lo: f64::INFINITY,
        max_lo: f64::NEG_INFINITY,
        min_hi: f64::INFINITY,
        max_hi: f64::NEG_INFINITY,
    };
    let mut first_non_lorentzian = None;
    let (mut inequality_without_signature, mut signature_without_inequality) = (0, 0);

    for (p, outcome) in points.iter().zip(outcomes) {
        let outcome = outcome.map_err(|e| Error::AtGridPoint {
            point: p.to_vec(),
            source: Box::new(e),
        })?;
        let lorentzian = outcome.signature.is_lorentzian();
        if !lorentzian && first_non_lorentzian.is_none() {
            first_non_lorentzian = Some((p.clone(), outcome.signature));
        }
        match outcome.interval {
            Some(iv) => {
                stats.min_lo = stats.min_lo.min(iv.lo);
                stats.max_lo = stats.max_lo.max(iv.lo);
                stats.min_hi = stats.min_hi.min(iv.hi);
                stats.max_hi = stats.max_hi.max(iv.hi);
                if !lorentzian {
                    inequality_without_signature += 1;
                }
            }
            None => {
                stats.empty_points += 1;
                if lorentzian {
                    signature_without_inequality += 1;
                }
            }
        }
        let next = match running {
            None => outcome.interval,
            Some(None) => None,
            Some(Some(acc)) => outcome.interval.and_then(|iv| acc.intersect(&iv)),
        };
        if next.is_none() && witness.is_none() {
            witness = Some(p.clone());
        }
        running = Some(next);
    }

    let c_interval = running.flatten();
    let lorentzian_hessian_everywhere = first_non_lorentzian.is_none();
    let verdict = match c_interval {
        None => Verdict::Violated,
        Some(iv) if iv.lo > 0.0 && lorentzian_hessian_everywhere => Verdict::Certified,
        Some(_) => Verdict::Degenerate,
    };
    Ok(ConvexityCertificate {
        verdict,
        c_interval,
        witness,
        stats,
        lorentzian_hessian_everywhere,
        first_non_lorentzian,
        inequality_without_signature,
        signature_without_inequality,
        samples_per_axis: query.samples_per_axis,
        psd_tolerance: query.psd_tolerance,
        c_search_ceiling: query.c_search_ceiling,
    })
}
