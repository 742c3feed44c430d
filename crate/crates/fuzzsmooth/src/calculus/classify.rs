use super::deriv::{symbolic_slope, Side};
use crate::cutcore::{CutCurve, FuzzyNum, Shape};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKind {
    /// Continuous, but the one-sided slopes differ or are infinite.
    Kink,
    /// The membership function is discontinuous.
    Jump,
}

/// Where a point sits relative to the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
    CoreEndpoint,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Left => "left",
            Branch::Right => "right",
            Branch::CoreEndpoint => "core-endpoint",
        }
    }
}

/// A point of the open support where the membership function is not differentiable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub x: f64,
    pub kind: SingularKind,
    pub branch: Branch,
    /// `u(x)`.
    pub level: f64,
    pub left_limit: f64,
    pub right_limit: f64,
    pub left_slope: f64,
    pub right_slope: f64,
}

impl SingularPoint {
    /// The one-sided limit that matters for the branch: from the left on the
    /// left branch and at the lower core end, from the right otherwise.
    pub fn limit(&self) -> f64 {
        match self.branch {
            Branch::Left => self.left_limit,
            Branch::Right => self.right_limit,
            Branch::CoreEndpoint => self.left_limit.min(self.right_limit),
        }
    }
}

/// Membership in the four classes of fuzzy numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassFlags {
    /// Strictly monotone and differentiable on both open branches.
    pub in_ft: bool,
    /// Differentiable on both open branches.
    pub in_fn: bool,
    /// Continuous on the support.
    pub in_fc: bool,
    /// Continuous on the support and differentiable on its interior.
    pub in_fd: bool,
}

/// Candidate abscissae inside the open support: cut breakpoints (both sides of a jump) and core ends.
///
/// Abscissae within the abscissa tolerance of each other form one cluster,
/// returned as its extreme members.
fn candidates(u: &FuzzyNum) -> Vec<(f64, f64)> {
    let s = u.support();
    let mut xs = u.breakpoint_abscissae();
    xs.extend([u.core().lo, u.core().hi]);
    xs.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for x in xs {
        match clusters.last_mut() {
            Some(c) if tol::same_x(c.1, x) => c.1 = x,
            _ => clusters.push((x, x)),
        }
    }
    let outside = |x: f64| x <= s.lo || x >= s.hi || tol::same_x(x, s.lo) || tol::same_x(x, s.hi);
    clusters.retain(|&(a, b)| !outside(a) && !outside(b));
    clusters
}

/// Non-differentiable points of the open support, with slopes compared at tolerance `tol_slope`.
pub fn classify_points_tol(u: &FuzzyNum, tol_slope: f64) -> Vec<SingularPoint> {
    let c = u.core();
    candidates(u)
        .into_iter()
        .filter_map(|(a, b)| {
            // The value of an upper semicontinuous function on the cluster is its largest.
            let (ma, mb) = (u.membership(a), u.membership(b));
            let (x, level) = if mb > ma { (b, mb) } else { (a, ma) };
            let (left_limit, right_limit) = (u.limit_left(a), u.limit_right(b));
            let left_slope = symbolic_slope(u, a, Side::Left);
            let right_slope = symbolic_slope(u, b, Side::Right);
            let jump = !tol::same_level(left_limit, level) || !tol::same_level(right_limit, level);
            let smooth = left_slope.is_finite()
                && right_slope.is_finite()
                && tol::same_slope(left_slope, right_slope, tol_slope);
            let kind = if jump {
                SingularKind::Jump
            } else if !smooth {
                SingularKind::Kink
            } else {
                return None;
            };
            let branch = if tol::same_x(x, c.lo) || tol::same_x(x, c.hi) {
                Branch::CoreEndpoint
            } else if x < c.lo {
                Branch::Left
            } else {
                Branch::Right
            };
            Some(SingularPoint {
                x,
                kind,
                branch,
                level,
                left_limit,
                right_limit,
                left_slope,
                right_slope,
            })
        })
        .collect()
}

pub fn classify_points(u: &FuzzyNum) -> Vec<SingularPoint> {
    classify_points_tol(u, tol::SLOPE)
}

/// A cut function is strictly monotone above `base` when no flat segment sits there.
fn strictly_monotone_above(curve: &CutCurve, base: f64) -> bool {
    curve
        .segments()
        .iter()
        .filter(|s| s.hi() > base + tol::LEVEL)
        .all(|s| s.shape() != Shape::Constant)
}

/// No cut function jumps at a level in `(0, 1)`.
fn cuts_continuous(curve: &CutCurve) -> bool {
    let segs = curve.segments();
    segs.windows(2).enumerate().all(|(i, w)| {
        let below = curve.points()[i + 1];
        tol::same_x(below, w[1].eval(w[0].hi()))
    })
}

/// Continuity through the cuts: lower cut strictly increasing on `[α₀, 1]`, upper strictly decreasing on `[β₀, 1]`.
pub fn is_continuous(u: &FuzzyNum) -> bool {
    let (a0, b0) = u.base_levels();
    strictly_monotone_above(u.left(), a0) && strictly_monotone_above(u.right(), b0)
}

pub fn class_membership(u: &FuzzyNum) -> ClassFlags {
    class_membership_tol(u, tol::SLOPE)
}

pub fn class_membership_tol(u: &FuzzyNum, tol_slope: f64) -> ClassFlags {
    let singular = classify_points_tol(u, tol_slope);
    let in_fc = is_continuous(u);
    let in_fn = singular.iter().all(|p| p.branch == Branch::CoreEndpoint);
    let in_ft = in_fn && cuts_continuous(u.left()) && cuts_continuous(u.right());
    let in_fd = in_fc && singular.is_empty();
    ClassFlags {
        in_ft,
        in_fn,
        in_fc,
        in_fd,
    }
}
