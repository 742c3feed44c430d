//! Conversion from a piecewise membership function to cut form.

use super::curve::{CutCurve, Segment, Shape};
use super::fuzzy::FuzzyNum;
use crate::error::{FuzzyError, Result};
use crate::expr::{invert_monotone, Expr};
use crate::tol;

/// One monotone piece of a membership function on an interval of abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    /// Membership as a function of `x`.
    pub expr: Expr,
}

impl Piece {
    /// A piece on the closed interval `[lo, hi]`.
    pub fn new(lo: f64, hi: f64, expr: Expr) -> Piece {
        Piece {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
            expr,
        }
    }

    /// A single point carrying membership `value`.
    pub fn point(x: f64, value: f64) -> Piece {
        Piece::new(x, x, Expr::Const(value))
    }

    pub fn open_lo(mut self) -> Piece {
        self.lo_closed = false;
        self
    }

    pub fn open_hi(mut self) -> Piece {
        self.hi_closed = false;
        self
    }

    fn start(&self) -> f64 {
        self.expr.eval(self.lo)
    }

    fn end(&self) -> f64 {
        self.expr.eval(self.hi)
    }

    fn shape(&self) -> Shape {
        let (a, b) = (self.start(), self.end());
        if (b - a).abs() <= tol::LEVEL {
            Shape::Constant
        } else if b > a {
            Shape::Increasing
        } else {
            Shape::Decreasing
        }
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

const PIECE_PROBES: usize = 32;

fn invalid(msg: String) -> FuzzyError {
    FuzzyError::Invalid(msg)
}

fn check_piece(p: &Piece) -> Result<()> {
    if !(p.lo <= p.hi) || !p.lo.is_finite() || !p.hi.is_finite() {
        return Err(FuzzyError::Structural(format!(
            "piece [{}, {}] has bad bounds",
            p.lo, p.hi
        )));
    }
    if p.is_point() && !(p.lo_closed && p.hi_closed) {
        return Err(FuzzyError::Structural(format!(
            "point piece at {} must be closed",
            p.lo
        )));
    }
    let shape = p.shape();
    let mut prev = p.start();
    for k in 0..=PIECE_PROBES {
        let x = p.lo + (p.hi - p.lo) * k as f64 / PIECE_PROBES as f64;
        let v = p.expr.eval(x);
        if !(-tol::LEVEL..=1.0 + tol::LEVEL).contains(&v) {
            return Err(invalid(format!("membership {v} at x = {x} is outside [0, 1]")));
        }
        let step = v - prev;
        let bad = match shape {
            Shape::Increasing => step < -tol::LEVEL,
            Shape::Decreasing => step > tol::LEVEL,
            Shape::Constant => step.abs() > tol::LEVEL,
        };
        if bad {
            return Err(invalid(format!(
                "piece on [{}, {}] is not monotone near x = {x}",
                p.lo, p.hi
            )));
        }
        prev = v;
    }
    Ok(())
}

/// Builds the cut form of the membership function given by `pieces`.
///
/// Pieces must tile a closed interval (the support) without gaps. Each piece
/// is inverted symbolically where possible, otherwise by bisection.
pub fn from_membership_pieces(pieces: &[Piece]) -> Result<FuzzyNum> {
    if pieces.is_empty() {
        return Err(FuzzyError::Structural("no membership pieces".into()));
    }
    for p in pieces {
        check_piece(p)?;
    }
    let mut ps = pieces.to_vec();
    ps.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    check_tiling(&ps)?;

    let c1 =
        core_start(&ps).ok_or_else(|| invalid("clause (i): membership never reaches 1, the core is empty".into()))?;
    let c2 = core_end(&ps).expect("core start found implies core end");
    for p in &ps {
        let inside = p.lo >= c1 && p.hi <= c2;
        if inside && (1.0 - p.start() > tol::LEVEL || 1.0 - p.end() > tol::LEVEL) {
            return Err(invalid(format!(
                "membership drops below 1 on [{}, {}] inside the core",
                p.lo, p.hi
            )));
        }
    }

    let left_pieces: Vec<&Piece> = ps
        .iter()
        .filter(|p| p.hi <= c1 && !(p.is_point() && p.lo == c1))
        .collect();
    let right_pieces: Vec<&Piece> = ps
        .iter()
        .rev()
        .filter(|p| p.lo >= c2 && !(p.is_point() && p.lo == c2))
        .collect();
    let left = branch_curve(&left_pieces, c1, Side::Left)?;
    let right = branch_curve(&right_pieces, c2, Side::Right)?;
    FuzzyNum::checked(left, right)
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

fn check_tiling(ps: &[Piece]) -> Result<()> {
    let first = &ps[0];
    if !first.lo_closed && first.start() > tol::LEVEL {
        return Err(invalid(format!(
            "membership is not upper semicontinuous at {}",
            first.lo
        )));
    }
    let last = &ps[ps.len() - 1];
    if !last.hi_closed && last.end() > tol::LEVEL {
        return Err(invalid(format!(
            "membership is not upper semicontinuous at {}",
            last.hi
        )));
    }
    for w in ps.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if !tol::same_x(a.hi, b.lo) {
            if a.hi < b.lo {
                return Err(FuzzyError::Structural(format!("gap between {} and {}", a.hi, b.lo)));
            }
            return Err(FuzzyError::Structural(format!(
                "pieces overlap on [{}, {}]",
                b.lo, a.hi
            )));
        }
        let x = a.hi;
        let covering = ps
            .iter()
            .filter(|p| (p.lo == x && p.lo_closed) || (p.hi == x && p.hi_closed))
            .map(|p| if p.lo == x { p.start() } else { p.end() })
            .collect::<Vec<_>>();
        let Some(&value) = covering.first() else {
            return Err(FuzzyError::Structural(format!("membership is undefined at {x}")));
        };
        if covering.iter().any(|v| (v - value).abs() > tol::LEVEL) {
            return Err(invalid(format!("pieces disagree on the membership at {x}")));
        }
        let limit = a.end().max(b.start());
        if !a.is_point() && !b.is_point() && value < limit - tol::LEVEL {
            return Err(invalid(format!("membership is not upper semicontinuous at {x}")));
        }
    }
    Ok(())
}

fn reaches_one(v: f64) -> bool {
    v >= 1.0 - tol::LEVEL
}

fn core_start(ps: &[Piece]) -> Option<f64> {
    ps.iter().find_map(|p| {
        if reaches_one(p.start()) {
            Some(p.lo)
        } else if reaches_one(p.end()) {
            Some(p.hi)
        } else {
            None
        }
    })
}

fn core_end(ps: &[Piece]) -> Option<f64> {
    ps.iter().rev().find_map(|p| {
        if reaches_one(p.end()) {
            Some(p.hi)
        } else if reaches_one(p.start()) {
            Some(p.lo)
        } else {
            None
        }
    })
}

fn snap_level(v: f64) -> f64 {
    if v > 1.0 - tol::LEVEL {
        1.0
    } else if v < tol::LEVEL {
        0.0
    } else {
        v
    }
}

/// Walks a branch from the support end toward the core, emitting level segments.
fn branch_curve(pieces: &[&Piece], core_end: f64, side: Side) -> Result<CutCurve> {
    let mut segs: Vec<Segment> = Vec::new();
    let mut cur = 0.0;
    let (rising, shape) = match side {
        Side::Left => (Shape::Increasing, Shape::Increasing),
        Side::Right => (Shape::Decreasing, Shape::Decreasing),
    };
    for p in pieces {
        let (outer_x, outer_v, inner_v) = match side {
            Side::Left => (p.lo, p.start(), p.end()),
            Side::Right => (p.hi, p.end(), p.start()),
        };
        let (outer_v, inner_v) = (snap_level(outer_v), snap_level(inner_v));
        if outer_v < cur - tol::LEVEL {
            return Err(invalid(format!(
                "membership is not unimodal: it falls from {cur} to {outer_v} at {outer_x}"
            )));
        }
        if outer_v > cur + tol::LEVEL {
            segs.push(Segment::constant(cur, outer_v, outer_x));
            cur = outer_v;
        }
        let piece_shape = if p.is_point() { Shape::Constant } else { p.shape() };
        if piece_shape != Shape::Constant && piece_shape != rising {
            return Err(invalid(format!(
                "membership is not unimodal: piece on [{}, {}] runs the wrong way",
                p.lo, p.hi
            )));
        }
        if piece_shape == rising && inner_v > cur + tol::LEVEL {
            let g = invert_monotone(&p.expr, p.lo, p.hi);
            segs.push(Segment::new(cur, inner_v, g, shape));
            cur = inner_v;
        }
    }
    if cur < 1.0 {
        segs.push(Segment::constant(cur, 1.0, core_end));
    }
    CutCurve::new(segs)
}
