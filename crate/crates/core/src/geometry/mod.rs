//! Pointwise metric evaluation, connection, covariant Hessians and causal
//! classification on an arbitrary chart.
//!
//! Signature convention is (−,+,…,+) throughout.

mod metric;
mod model;

pub use metric::{
    classify_vector, covariant_hessian, covariant_hessian_from, eval_metric, gradient_invariant,
    gradient_invariant_from, gradient_invariant_of, CausalCharacter, Christoffels, GradientInvariant, MetricAt, NULL_TOLERANCE,
};
pub(crate) use metric::check_field;
pub use model::{
    BlockForm, CoordinateBound, ModelBuilder, Point, SingularLocus, SpacetimeModel, TangentVector,
    SINGULAR_GUARD,
};
