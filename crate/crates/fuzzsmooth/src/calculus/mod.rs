//! Derivatives, singular points, class membership, distance and Lipschitz constants.

mod classify;
pub(crate) mod deriv;
mod lipschitz;
mod metric;

pub use classify::{
    class_membership, class_membership_tol, classify_points, classify_points_tol, is_continuous, Branch, ClassFlags,
    SingularKind, SingularPoint,
};
pub use deriv::{left_deriv, numeric_slope, one_sided, probe, right_deriv, DerivativeProbe, ExtendedSlope, Side};
pub use lipschitz::lipschitz_estimate;
pub use metric::{sup_metric, MetricResult};
