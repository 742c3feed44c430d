//! Smoothers: the conditions that make `u∇w` differentiable, parametric families and synthesis.

mod check;
mod families;
mod synth;

pub use check::{check_smoother_conditions, Condition, ConditionCheck, ConditionReport, Theorem, Verdict};
pub use families::{family, generated, parabola, plateau, truncated_parabola, Family};
pub use synth::{core_preserving_shift, synthesize, SynthesisOptions};
