//! Inversion of monotone pieces.
//!
//! Tries to peel the expression layer by layer (affine maps, squares, square
//! roots, trig and inverse trig), then falls back to quadratic solving and
//! finally to a bisection node. Every symbolic candidate is checked against
//! the original before it is accepted.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use super::{acos, add, asin, cos, mul, pow, scale, sin, sqrt, sub, Expr, InverseFn, Ratio};

const SAMPLES: usize = 33;
const CHECK_TOL: f64 = 1e-9;

/// Returns `g` with `f(g(y)) = y` for `y` between `f(lo)` and `f(hi)`, where `f` is monotone on `[lo, hi]`.
pub fn invert_monotone(f: &Expr, lo: f64, hi: f64) -> Expr {
    let candidates = [peel(f, Expr::Var, lo, hi), quadratic(f, lo, hi)];
    for g in candidates.into_iter().flatten() {
        if accepts(f, &g, lo, hi) {
            return g;
        }
    }
    Expr::Inverse(Box::new(InverseFn {
        f: f.clone(),
        lo,
        hi,
        arg: Expr::Var,
    }))
}

fn accepts(f: &Expr, g: &Expr, lo: f64, hi: f64) -> bool {
    let (ya, yb) = (f.eval(lo), f.eval(hi));
    let span = (hi - lo).abs().max(1.0);
    (0..=SAMPLES).all(|k| {
        let y = ya + (yb - ya) * k as f64 / SAMPLES as f64;
        let t = g.eval(y);
        t.is_finite()
            && t >= lo - CHECK_TOL * span
            && t <= hi + CHECK_TOL * span
            && (f.eval(t) - y).abs() <= CHECK_TOL * (1.0 + y.abs())
    })
}

fn range_over(e: &Expr, lo: f64, hi: f64) -> (f64, f64) {
    (0..=SAMPLES).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), k| {
        let v = e.eval(lo + (hi - lo) * k as f64 / SAMPLES as f64);
        (a.min(v), b.max(v))
    })
}

/// Solves `e(t) = target` for `t`, with `t` ranging over `[lo, hi]`.
fn peel(e: &Expr, target: Expr, lo: f64, hi: f64) -> Option<Expr> {
    let slack = 1e-12;
    match e {
        Expr::Var => Some(target),
        Expr::Add(a, b) if b.is_const() => peel(a, sub(target, (**b).clone()), lo, hi),
        Expr::Add(a, b) if a.is_const() => peel(b, sub(target, (**a).clone()), lo, hi),
        Expr::Sub(a, b) if b.is_const() => peel(a, add(target, (**b).clone()), lo, hi),
        Expr::Sub(a, b) if a.is_const() => peel(b, sub((**a).clone(), target), lo, hi),
        Expr::Scale(k, a) if *k != 0.0 => peel(a, scale(1.0 / k, target), lo, hi),
        Expr::Mul(a, b) if a.is_const() => peel(&Expr::Scale(a.eval(0.0), b.clone()), target, lo, hi),
        Expr::Mul(a, b) if b.is_const() => peel(&Expr::Scale(b.eval(0.0), a.clone()), target, lo, hi),
        Expr::Pow(a, r) => {
            let (min, max) = range_over(a, lo, hi);
            match (r.num, r.den) {
                (1, 2) => peel(a, pow(target, Ratio::integer(2)), lo, hi),
                (-1, 1) => peel(a, pow(target, Ratio::integer(-1)), lo, hi),
                (2, 1) if min >= -slack => peel(a, sqrt(target), lo, hi),
                (2, 1) if max <= slack => peel(a, scale(-1.0, sqrt(target)), lo, hi),
                _ => None,
            }
        }
        Expr::Sqrt(a) => peel(a, pow(target, Ratio::integer(2)), lo, hi),
        Expr::Sin(a) => {
            let (min, max) = range_over(a, lo, hi);
            (min >= -FRAC_PI_2 - slack && max <= FRAC_PI_2 + slack)
                .then(|| peel(a, asin(target), lo, hi))
                .flatten()
        }
        Expr::Cos(a) => {
            let (min, max) = range_over(a, lo, hi);
            (min >= -slack && max <= PI + slack)
                .then(|| peel(a, acos(target), lo, hi))
                .flatten()
        }
        Expr::Asin(a) => peel(a, sin(target), lo, hi),
        Expr::Acos(a) => peel(a, cos(target), lo, hi),
        _ => None,
    }
}

/// Vertex-form root of `c2 t^2 + c1 t + c0 = y`, keeping the branch that lands in `[lo, hi]`.
fn quadratic(f: &Expr, lo: f64, hi: f64) -> Option<Expr> {
    let [c0, c1, c2] = f.as_quadratic()?;
    if c2 == 0.0 {
        if c1 == 0.0 {
            return None;
        }
        return Some(scale(1.0 / c1, sub(Expr::Var, Expr::Const(c0))));
    }
    let h = -c1 / (2.0 * c2);
    let k = c0 - c2 * h * h;
    let mid = 0.5 * (lo + hi);
    let sign = if mid >= h { 1.0 } else { -1.0 };
    let radicand = scale(1.0 / c2, sub(Expr::Var, Expr::Const(k)));
    Some(add(Expr::Const(h), mul(Expr::Const(sign), sqrt(radicand))))
}
