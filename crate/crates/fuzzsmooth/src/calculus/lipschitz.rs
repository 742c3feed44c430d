use super::classify::is_continuous;
use crate::cutcore::{CutCurve, FuzzyNum, Shape};
use crate::tol;

const GRID: usize = 256;
const GOLDEN_STEPS: usize = 80;

/// Smallest `|g'|` over a segment: grid search, then golden-section refinement.
fn min_abs_deriv(s: &crate::cutcore::Segment) -> f64 {
    let (lo, hi) = (s.lo(), s.hi());
    let at = |a: f64| {
        let d = if a >= hi { s.deriv(hi) } else { s.deriv(a) };
        d.abs()
    };
    let mut best_k = 0;
    let mut best = at(lo);
    for k in 1..=GRID {
        let a = lo + (hi - lo) * k as f64 / GRID as f64;
        let d = at(a);
        if d < best {
            best = d;
            best_k = k;
        }
    }
    let step = (hi - lo) / GRID as f64;
    let (mut a, mut b) = (
        (lo + step * (best_k as f64 - 1.0)).max(lo),
        (lo + step * (best_k as f64 + 1.0)).min(hi),
    );
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..GOLDEN_STEPS {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if at(c) < at(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.min(at(0.5 * (a + b)))
}

/// Steepest membership slope contributed by one branch, `1 / min |g'|` over the levels above `base`.
fn branch_slope(curve: &CutCurve, base: f64) -> f64 {
    curve
        .segments()
        .iter()
        .filter(|s| s.hi() > base + tol::LEVEL && s.shape() != Shape::Constant)
        .map(|s| {
            let m = min_abs_deriv(s);
            if m == 0.0 {
                f64::INFINITY
            } else {
                1.0 / m
            }
        })
        .fold(0.0, f64::max)
}

/// Smallest `K` with `|u(x) - u(y)| ≤ K |x - y|`, read off the cut derivatives.
///
/// Returns `inf` when `u` is not continuous on its support.
pub fn lipschitz_estimate(u: &FuzzyNum) -> f64 {
    if !is_continuous(u) {
        return f64::INFINITY;
    }
    let (a0, b0) = u.base_levels();
    branch_slope(u.left(), a0).max(branch_slope(u.right(), b0))
}
