use crate::cutcore::{CutCurve, FuzzyNum};
use crate::error::{FuzzyError, Result};
use crate::tol;

/// Which one-sided derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// A one-sided derivative of a membership function; `value` may be `±inf` at jumps and vertical tangents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedSlope {
    pub value: f64,
    pub side: Side,
}

impl ExtendedSlope {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.value.abs() <= tol::ZERO_SLOPE
    }
}

/// Both derivative routes at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeProbe {
    pub symbolic: f64,
    pub numeric: f64,
    pub agree: bool,
}

fn in_support(u: &FuzzyNum, x: f64) -> Result<()> {
    if u.support().contains(x) {
        Ok(())
    } else {
        Err(FuzzyError::Precondition(format!(
            "x = {x} lies outside the support [{}, {}]",
            u.support().lo,
            u.support().hi
        )))
    }
}

pub fn left_deriv(u: &FuzzyNum, x: f64) -> Result<ExtendedSlope> {
    one_sided(u, x, Side::Left)
}

pub fn right_deriv(u: &FuzzyNum, x: f64) -> Result<ExtendedSlope> {
    one_sided(u, x, Side::Right)
}

/// One-sided derivative at `x`; the closed-form route, with the numeric one as a fallback.
pub fn one_sided(u: &FuzzyNum, x: f64, side: Side) -> Result<ExtendedSlope> {
    in_support(u, x)?;
    let mut value = symbolic_slope(u, x, side);
    if value.is_nan() {
        value = numeric_slope(u, x, side);
    }
    Ok(ExtendedSlope { value, side })
}

/// Runs both routes and reports whether they agree within `tol_slope`.
pub fn probe(u: &FuzzyNum, x: f64, side: Side, tol_slope: f64) -> Result<DerivativeProbe> {
    in_support(u, x)?;
    let symbolic = symbolic_slope(u, x, side);
    let numeric = numeric_slope(u, x, side);
    let agree = if symbolic.is_infinite() || numeric.is_infinite() {
        symbolic == numeric
    } else {
        (symbolic - numeric).abs() <= tol_slope * (1.0 + symbolic.abs())
    };
    Ok(DerivativeProbe {
        symbolic,
        numeric,
        agree,
    })
}

fn is_break(curve: &CutCurve, level: f64) -> bool {
    curve.breaks().any(|b| b == level)
}

fn gap(a: f64, b: f64) -> bool {
    a - b > tol::ABSCISSA * (1.0 + a.abs().max(b.abs()))
}

/// Membership slope from a derivative of the lower cut function.
fn from_lower(d: f64) -> f64 {
    let d = d.abs();
    if d == 0.0 {
        f64::INFINITY
    } else if d.is_infinite() {
        0.0
    } else {
        1.0 / d
    }
}

/// Membership slope from a derivative of the upper cut function.
fn from_upper(d: f64) -> f64 {
    let s = from_lower(d);
    if s == 0.0 {
        0.0
    } else {
        -s
    }
}

/// Closed-form one-sided slope, read off the cut function at the level `u(x)`.
pub(crate) fn symbolic_slope(u: &FuzzyNum, x: f64, side: Side) -> f64 {
    let limit = match side {
        Side::Left => u.limit_left(x),
        Side::Right => u.limit_right(x),
    };
    slope_from(u, x, side, u.membership(x), limit)
}

/// [`symbolic_slope`] with the membership `m` and the one-sided limit on `side` already known.
pub(crate) fn slope_from(u: &FuzzyNum, x: f64, side: Side, m: f64, limit: f64) -> f64 {
    let (s, c) = (u.support(), u.core());
    let (left, right) = (u.left(), u.right());
    match side {
        Side::Left => {
            let lam = limit;
            if !tol::same_level(lam, m) {
                return if lam < m { f64::INFINITY } else { f64::NEG_INFINITY };
            }
            if x <= s.lo {
                0.0
            } else if x <= c.lo {
                if is_break(left, m) && gap(x, left.eval(m)) {
                    return 0.0;
                }
                from_lower(left.deriv_below(m))
            } else if x <= c.hi {
                0.0
            } else {
                if is_break(right, m) && gap(x, right.eval_strong(m)) {
                    return 0.0;
                }
                from_upper(right.deriv_above(m))
            }
        }
        Side::Right => {
            let rho = limit;
            if !tol::same_level(rho, m) {
                return if rho < m { f64::NEG_INFINITY } else { f64::INFINITY };
            }
            if x >= s.hi {
                0.0
            } else if x >= c.hi {
                if is_break(right, m) && gap(right.eval(m), x) {
                    return 0.0;
                }
                from_upper(right.deriv_below(m))
            } else if x >= c.lo {
                0.0
            } else {
                if is_break(left, m) && gap(left.eval_strong(m), x) {
                    return 0.0;
                }
                from_lower(left.deriv_above(m))
            }
        }
    }
}

const NTAB: usize = 12;
const SAFE: f64 = 2.0;
const H_MAX: f64 = 1e-3;
const H_MIN: f64 = 1e-9;
/// Finite-difference estimates beyond this are read as a vertical tangent.
const STEEP: f64 = 1e7;

/// One-sided finite differences with Richardson extrapolation on a halving step ladder.
pub fn numeric_slope(u: &FuzzyNum, x: f64, side: Side) -> f64 {
    let dir = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
    };
    let f0 = u.membership(x);
    let quotient = |h: f64| (u.membership(x + dir * h) - f0) / (dir * h);

    let near = |h: f64| u.membership(x + dir * h) - f0;
    let (d1, d2) = (near(1e-8), near(1e-10));
    if d2.abs() > 1e-9 && d2.abs() > 0.5 * d1.abs() {
        return f64::INFINITY.copysign(d2 * dir);
    }

    let mut h = H_MAX * (1.0 + x.abs()).min(10.0);
    for b in u.breakpoint_abscissae().into_iter().chain([u.core().lo, u.core().hi]) {
        let dist = dir * (b - x);
        if dist > tol::ABSCISSA * (1.0 + x.abs()) {
            h = h.min(0.45 * dist);
        }
    }
    let h = h.max(H_MIN);

    let mut table = [[0.0f64; NTAB]; NTAB];
    let mut hh = h;
    table[0][0] = quotient(hh);
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        hh *= 0.5;
        table[0][i] = quotient(hh);
        let mut fac = 2.0;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= 2.0;
            let e = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    if best.abs() > STEEP {
        f64::INFINITY.copysign(best)
    } else {
        best
    }
}
