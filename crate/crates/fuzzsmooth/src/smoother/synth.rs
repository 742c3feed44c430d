//! Smoother synthesis from the singular set of `u`.
//!
//! Each branch of the smoother is a chain of half-cosine steps between knot
//! levels. A step from level `L` to `L + ΔL` over `[x, x + Δx]` has membership
//! `L + ΔL (1 - cos(π s)) / 2` with `s = (t - x)/Δx`, so its slope vanishes at
//! both knots. Every level at which a condition asks for a zero slope becomes a
//! knot.

use std::f64::consts::PI;

use crate::calculus::{classify_points, Branch};
use crate::cutcore::{CutCurve, FuzzyNum, Segment, Shape};
use crate::error::{FuzzyError, Result};
use crate::expr::{self, Expr};
use crate::tol;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SynthesisOptions {
    /// Shift the result so that its core is `{0}`.
    pub preserve_core: bool,
    /// Widen steps so the membership slope never exceeds this.
    pub lipschitz_cap: Option<f64>,
}

/// Levels in `(base, 1)` at which the smoother needs zero slope, per branch.
fn required_levels(u: &FuzzyNum) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = (u.support(), u.core());
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for p in classify_points(u) {
        match p.branch {
            Branch::Left => lower.push(p.level),
            Branch::Right => upper.push(p.level),
            Branch::CoreEndpoint => {}
        }
        let on_lower = p.x > s.lo && (p.x < c.lo || tol::same_x(p.x, c.lo));
        let on_upper = p.x < s.hi && (p.x > c.hi || tol::same_x(p.x, c.hi));
        if on_lower && p.left_limit < p.level - tol::LEVEL {
            lower.push(p.left_limit);
        }
        if on_upper && p.right_limit < p.level - tol::LEVEL {
            upper.push(p.right_limit);
        }
    }
    (lower, upper)
}

/// Knot levels: the base level, the required levels strictly between it and 1, then 1.
fn knots(base: f64, mut required: Vec<f64>) -> Vec<f64> {
    required.retain(|&a| a > base && a < 1.0);
    required.sort_by(f64::total_cmp);
    required.dedup();
    let mut ks = vec![base];
    ks.extend(required);
    ks.push(1.0);
    ks
}

/// Abscissa widths of the steps between consecutive knots.
fn widths(knots: &[f64], half: f64, cap: Option<f64>) -> Vec<f64> {
    let n = (knots.len() - 1) as f64;
    knots
        .windows(2)
        .map(|w| {
            let even = half / n;
            match cap {
                Some(k) => even.max((w[1] - w[0]) * PI / (2.0 * k)),
                None => even,
            }
        })
        .collect()
}

/// `acos(1 - 2k·d)` where `d` is a level distance expression.
fn arc(k: f64, d: Expr) -> Expr {
    expr::acos(expr::sub(Expr::Const(1.0), expr::scale(2.0 * k, d)))
}

/// Cut segments of one branch. `dir` is `1` on the lower branch (abscissae grow toward the core)
/// and `-1` on the upper branch. The outermost knot sits at `-dir·Σ widths`, the core at 0.
fn branch(knots: &[f64], widths: &[f64], dir: f64) -> CutCurve {
    let shape = if dir > 0.0 {
        Shape::Increasing
    } else {
        Shape::Decreasing
    };
    let mut pos = vec![0.0; knots.len()];
    for i in (0..widths.len()).rev() {
        pos[i] = pos[i + 1] - dir * widths[i];
    }
    let mut segs = Vec::with_capacity(2 * widths.len() + 1);
    if knots[0] > 0.0 {
        segs.push(Segment::constant(0.0, knots[0], pos[0]));
    }
    for i in 0..widths.len() {
        let (lo, hi) = (knots[i], knots[i + 1]);
        let mid = 0.5 * (lo + hi);
        let k = 1.0 / (hi - lo);
        let amp = dir * widths[i] / PI;
        let from_lo = expr::add(
            Expr::Const(pos[i]),
            expr::scale(amp, arc(k, expr::sub(Expr::Var, Expr::Const(lo)))),
        );
        let from_hi = expr::sub(
            Expr::Const(pos[i + 1]),
            expr::scale(amp, arc(k, expr::sub(Expr::Const(hi), Expr::Var))),
        );
        segs.push(Segment::new(lo, mid, from_lo, shape));
        segs.push(Segment::new(mid, hi, from_hi, shape));
    }
    CutCurve::new(segs).expect("knots increase strictly")
}

/// Builds a smoother for `u` whose support has width about `p`.
///
/// Each half of the support gets `p/2`, split evenly between the steps of that
/// branch; a Lipschitz cap can widen steps beyond that.
pub fn synthesize(u: &FuzzyNum, p: f64, opts: SynthesisOptions) -> Result<FuzzyNum> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(FuzzyError::Precondition(format!("scale p = {p} must be positive")));
    }
    if let Some(k) = opts.lipschitz_cap {
        if !(k > 0.0) {
            return Err(FuzzyError::Precondition(format!("Lipschitz cap {k} must be positive")));
        }
    }
    let (a0, b0) = u.base_levels();
    let (lower, upper) = required_levels(u);
    let half = 0.5 * p;
    let top = |b: f64| b >= 1.0 - tol::LEVEL;
    let w = if top(a0) && top(b0) {
        if opts.preserve_core {
            return Err(FuzzyError::Precondition(
                "u is crisp; its only smoothers are crisp intervals, which cannot have core {0}".into(),
            ));
        }
        FuzzyNum::crisp(-half, half)
    } else {
        let side = |base: f64, req: Vec<f64>, dir: f64| {
            if top(base) {
                CutCurve::constant(0.0)
            } else {
                let ks = knots(base, req);
                branch(&ks, &widths(&ks, half, opts.lipschitz_cap), dir)
            }
        };
        FuzzyNum::new(side(a0, lower, 1.0), side(b0, upper, -1.0))
    };
    Ok(if opts.preserve_core {
        core_preserving_shift(&w)
    } else {
        w
    })
}

fn shift_curve(c: &CutCurve, by: f64) -> CutCurve {
    if by == 0.0 {
        return c.clone();
    }
    c.map(
        |s| s.with_expr(expr::sub(s.expr().clone(), Expr::Const(by)), s.shape()),
        |x| x - by,
    )
}

/// `[w⁻(α) - w⁻(1), w⁺(α) - w⁺(1)]`, which has core `{0}`.
pub fn core_preserving_shift(w: &FuzzyNum) -> FuzzyNum {
    let c = w.core();
    FuzzyNum::new(shift_curve(w.left(), c.lo), shift_curve(w.right(), c.hi))
}
