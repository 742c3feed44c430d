//! Level-wise calculus for fuzzy numbers.
//!
//! A fuzzy number is stored through its lower and upper cut functions, each a
//! chain of closed-form segments over levels in `[0, 1]`. Sup-min convolution
//! is exact in this form, and membership derivatives follow from cut
//! derivatives. On top of that sit checks for smoothing kernels and a
//! certified smoothing approximation.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod calculus;
pub mod convolve;
pub mod cutcore;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod io;
pub mod smoother;
pub mod tol;

pub use approx::{
    approximate, preservation_report, verify_smoothness, Approximation, DifferentiabilityReport, ErrorReport, Schedule,
};
pub use calculus::{
    class_membership, classify_points, left_deriv, lipschitz_estimate, right_deriv, sup_metric, Branch, ClassFlags,
    ExtendedSlope, MetricResult, Side, SingularKind, SingularPoint,
};
pub use convolve::{
    convolve, endpoint_value, predicted_derivative, scale, CutKind, Endpoint, EndpointSpec, Prediction, Rule,
};
pub use cutcore::{from_membership_pieces, CutCurve, FuzzyNum, Interval, Piece, Segment, Shape};
pub use error::{FuzzyError, Result};
pub use expr::Expr;
pub use io::FuzzyDocument;
pub use smoother::{check_smoother_conditions, core_preserving_shift, synthesize, ConditionReport, Theorem};
