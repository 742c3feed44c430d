use crate::calculus::deriv::slope_from;
use crate::calculus::{is_continuous, numeric_slope, Side};
use crate::cutcore::FuzzyNum;
use crate::tol;

/// Interior grid points probed in addition to the breakpoints.
pub const GRID_PROBES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessProbe {
    pub x: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    /// The membership function is discontinuous at `x`.
    pub jump: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentiabilityReport {
    pub probes: Vec<SmoothnessProbe>,
    /// Every probe passes and the cut functions have no flat stretch above the base levels.
    pub in_fd: bool,
    pub continuous: bool,
}

impl DifferentiabilityReport {
    pub fn failures(&self) -> impl Iterator<Item = &SmoothnessProbe> {
        self.probes.iter().filter(|p| !p.pass)
    }
}

fn probe_at(u: &FuzzyNum, x: f64) -> SmoothnessProbe {
    let (m, lam, rho) = (u.membership(x), u.limit_left(x), u.limit_right(x));
    let jump = !tol::same_level(lam, m) || !tol::same_level(rho, m);
    let slope = |side, limit| {
        let v = slope_from(u, x, side, m, limit);
        if v.is_nan() {
            numeric_slope(u, x, side)
        } else {
            v
        }
    };
    let (left_slope, right_slope) = (slope(Side::Left, lam), slope(Side::Right, rho));
    let pass = !jump
        && left_slope.is_finite()
        && right_slope.is_finite()
        && tol::same_slope(left_slope, right_slope, tol::SLOPE);
    SmoothnessProbe {
        x,
        left_slope,
        right_slope,
        jump,
        pass,
    }
}

/// Compares one-sided derivatives at every breakpoint in the open support and on an evenly spaced interior grid.
pub fn verify_smoothness(u: &FuzzyNum) -> DifferentiabilityReport {
    let s = u.support();
    let mut xs = u.breakpoint_abscissae();
    xs.extend([u.core().lo, u.core().hi]);
    let n = GRID_PROBES as f64;
    xs.extend((1..=GRID_PROBES).map(|k| s.lo + s.width() * k as f64 / (n + 1.0)));
    xs.retain(|&x| x > s.lo && x < s.hi && !tol::same_x(x, s.lo) && !tol::same_x(x, s.hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let probes: Vec<SmoothnessProbe> = xs.into_iter().map(|x| probe_at(u, x)).collect();
    let continuous = is_continuous(u);
    let in_fd = continuous && !u.is_degenerate() && probes.iter().all(|p| p.pass);
    DifferentiabilityReport {
        probes,
        in_fd,
        continuous,
    }
}
