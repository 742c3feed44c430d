//! Parametric smoother families.

use crate::cutcore::{from_membership_pieces, CutCurve, FuzzyNum, Piece, Segment, Shape};
use crate::error::{FuzzyError, Result};
use crate::expr::{self, Expr};
use crate::tol;

/// A parametric smoother.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Membership `1 - (t/p)²` on `[-p, p]`.
    Parabola { p: f64 },
    /// Cuts `[-p f(α), p f(α)]` for a decreasing generator `f` with `f(0) = 1`, `f(1) = 0`.
    Generated { p: f64, f: Expr },
    /// The parabola cut down to base levels `l` and `r`.
    TruncatedParabola { l: f64, r: f64, p: f64 },
    /// Rising generator `f` on `[pa, pb]`, core `[pb, pc]`, falling generator `g` on `[pc, pd]`.
    Plateau {
        l: f64,
        r: f64,
        p: f64,
        knots: [f64; 4],
        f: Expr,
        g: Expr,
    },
}

pub fn family(spec: &Family) -> Result<FuzzyNum> {
    match spec {
        Family::Parabola { p } => parabola(*p),
        Family::Generated { p, f } => generated(*p, f),
        Family::TruncatedParabola { l, r, p } => truncated_parabola(*l, *r, *p),
        Family::Plateau { l, r, p, knots, f, g } => plateau(*l, *r, *p, *knots, f, g),
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(FuzzyError::Precondition(format!("scale p = {p} must be positive")))
    }
}

fn one_minus_a() -> Expr {
    expr::sub(Expr::Const(1.0), Expr::Var)
}

/// Cut pair `[-p·f, p·f]` with no checks on `f`.
fn symmetric(p: f64, f: &Expr) -> FuzzyNum {
    let left = Segment::new(0.0, 1.0, expr::scale(-p, f.clone()), Shape::Increasing);
    let right = Segment::new(0.0, 1.0, expr::scale(p, f.clone()), Shape::Decreasing);
    FuzzyNum::new(
        CutCurve::new(vec![left]).expect("one segment"),
        CutCurve::new(vec![right]).expect("one segment"),
    )
}

/// The parabola `w_p`, with cuts `[-p√(1-α), p√(1-α)]`.
pub fn parabola(p: f64) -> Result<FuzzyNum> {
    check_p(p)?;
    Ok(symmetric(p, &expr::sqrt(one_minus_a())))
}

const GENERATOR_PROBES: usize = 64;

fn reject(hypothesis: &str) -> FuzzyError {
    FuzzyError::Precondition(format!("generator rejected: {hypothesis}"))
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

/// Strict monotonicity on `[0, 1]` by sampling, `dir = 1` rising, `-1` falling.
fn strictly_monotone(f: &Expr, dir: f64) -> bool {
    let mut prev = f.eval(0.0);
    (1..=GENERATOR_PROBES).all(|k| {
        let v = f.eval(k as f64 / GENERATOR_PROBES as f64);
        let ok = v.is_finite() && dir * (v - prev) > 0.0;
        prev = v;
        ok
    })
}

/// One-sided derivative of a generator at an end of `[0, 1]`, read from inside.
fn end_slope(f: &Expr, at: f64, shape: Shape) -> f64 {
    Segment::new(0.0, 1.0, f.clone(), shape).deriv(at)
}

/// The cuts `[-p f(α), p f(α)]`.
///
/// `f` must satisfy `f(0) = 1`, `f(1) = 0`, be strictly decreasing and have
/// `f'(α) → -∞` as `α → 1`.
pub fn generated(p: f64, f: &Expr) -> Result<FuzzyNum> {
    check_p(p)?;
    if !near(f.eval(0.0), 1.0) {
        return Err(reject("f(0) = 1"));
    }
    if !near(f.eval(1.0), 0.0) {
        return Err(reject("f(1) = 0"));
    }
    if !strictly_monotone(f, -1.0) {
        return Err(reject("f strictly decreasing"));
    }
    let d = end_slope(f, 1.0, Shape::Decreasing);
    if d != f64::NEG_INFINITY {
        return Err(reject("f'(α) → -∞ as α → 1"));
    }
    Ok(symmetric(p, f))
}

fn check_base(name: &str, v: f64) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(FuzzyError::Precondition(format!(
            "base level {name} = {v} must lie in [0, 1)"
        )))
    }
}

fn truncated_branch(p: f64, base: f64, sign: f64) -> CutCurve {
    let shape = if sign < 0.0 {
        Shape::Increasing
    } else {
        Shape::Decreasing
    };
    let tail = Segment::new(base, 1.0, expr::scale(sign * p, expr::sqrt(one_minus_a())), shape);
    let segs = if base > 0.0 {
        let edge = (sign * p) * (1.0 - base).sqrt();
        vec![Segment::constant(0.0, base, edge), tail]
    } else {
        vec![tail]
    };
    CutCurve::new(segs).expect("contiguous layout")
}

/// `1 - (t/p)²` on `[-p√(1-l), p√(1-r)]`, so the base levels are `l` and `r`.
pub fn truncated_parabola(l: f64, r: f64, p: f64) -> Result<FuzzyNum> {
    check_p(p)?;
    check_base("l", l)?;
    check_base("r", r)?;
    Ok(FuzzyNum::new(truncated_branch(p, l, -1.0), truncated_branch(p, r, 1.0)))
}

/// Membership `f((t-pa)/(pb-pa))` on `[pa, pb]`, `1` on `[pb, pc]` and `g((t-pc)/(pd-pc))` on `[pc, pd]`.
///
/// `f` rises from `l` to `1` with `f'(1) = 0`; `g` falls from `1` to `r` with `g'(0) = 0`.
pub fn plateau(l: f64, r: f64, p: f64, knots: [f64; 4], f: &Expr, g: &Expr) -> Result<FuzzyNum> {
    check_p(p)?;
    check_base("l", l)?;
    check_base("r", r)?;
    let [a, b, c, d] = knots;
    if !(a < b && b < c && c < d) {
        return Err(FuzzyError::Precondition(format!(
            "knots {a}, {b}, {c}, {d} must increase strictly"
        )));
    }
    if !near(f.eval(0.0), l) || !near(f.eval(1.0), 1.0) {
        return Err(reject("f(0) = l and f(1) = 1"));
    }
    if !strictly_monotone(f, 1.0) {
        return Err(reject("f increasing"));
    }
    if end_slope(f, 1.0, Shape::Increasing).abs() > tol::ZERO_SLOPE {
        return Err(reject("f'(1) = 0"));
    }
    if !near(g.eval(0.0), 1.0) || !near(g.eval(1.0), r) {
        return Err(reject("g(0) = 1 and g(1) = r"));
    }
    if !strictly_monotone(g, -1.0) {
        return Err(reject("g decreasing"));
    }
    if end_slope(g, 0.0, Shape::Decreasing).abs() > tol::ZERO_SLOPE {
        return Err(reject("g'(0) = 0"));
    }
    let (pa, pb, pc, pd) = (p * a, p * b, p * c, p * d);
    let rescale = |lo: f64, hi: f64| {
        let k = 1.0 / (hi - lo);
        expr::scale(k, expr::sub(Expr::Var, Expr::Const(lo)))
    };
    let pieces = [
        Piece::new(pa, pb, f.substitute(&rescale(pa, pb))),
        Piece::new(pb, pc, Expr::Const(1.0)),
        Piece::new(pc, pd, g.substitute(&rescale(pc, pd))),
    ];
    from_membership_pieces(&pieces)
}
