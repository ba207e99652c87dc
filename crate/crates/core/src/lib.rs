//! Numerical certification of spacetime convex functions.
//!
//! A smooth `f` on a Lorentzian manifold is *spacetime convex* when its
//! covariant Hessian has Lorentzian signature and
//! `V^μ V^ν ∇_μ∇_ν f ≥ c g_{μν} V^μ V^ν` for every tangent vector and some
//! constant `c > 0`. This crate evaluates metrics and fields given as text
//! expressions with exact second-order forward-mode derivatives, certifies
//! the inequality over sampled regions, and probes the geometric
//! consequences: level-set extrinsic curvature, the mean-curvature barrier
//! inside the Schwarzschild horizon, null expansions, slice Hessians and
//! convexity along geodesics.
//!
//! Conventions: signature (−,+,…,+), geometric units, and level-set normals
//! oriented so that `f` decreases along them.

pub mod catalog;
pub mod convexity;
pub mod dsl;
pub mod error;
pub mod foliation;
pub mod geodesics;
pub mod geometry;
pub mod linalg;

pub use catalog::{builtin_models, canonical_field, BuiltinField};
pub use convexity::{
    admissible_c_interval, certify_region, hessian_signature, CInterval, ConvexityCertificate, ConvexityQuery,
    HessianSignature, Verdict,
};
pub use dsl::{eval_jet2, parse, Expr, Jet2, ScalarField, Symbols};
pub use error::{Error, Result, Span};
pub use foliation::{
    barrier_scan, mean_curvature, null_expansions, schwarzschild_trk, second_fundamental_form,
    slice_laplacian, slice_restricted_hessian, BarrierScanResult, LevelSetFrame, NullExpansions, SliceSpec,
};
pub use geodesics::{
    closed_curve_probe, convexity_along_curve, integrate_geodesic, GeodesicError, GeodesicState, LoopVerdict,
    MarginReport, Trajectory,
};
pub use geometry::{
    classify_vector, covariant_hessian, eval_metric, gradient_invariant, CausalCharacter, MetricAt, Point,
    SpacetimeModel, TangentVector,
};
