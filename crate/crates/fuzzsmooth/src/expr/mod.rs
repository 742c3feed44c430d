//! Closed-form scalar expressions in a single variable.
//!
//! Cut functions are stored as [`Expr`] trees in the level variable, membership
//! pieces as trees in the abscissa. The same node set serves both; the variable
//! is printed as `a` or `x` depending on context.

mod invert;
mod parse;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

pub use invert::invert_monotone;
pub use parse::{parse_expr, ParseError};

/// Slack allowed when a square root or inverse trig argument leaves its domain by rounding.
const DOMAIN_SLACK: f64 = 1e-12;

/// Exponent `num/den` of a rational power; `den` is 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: i32,
    pub den: u8,
}

impl Ratio {
    pub fn new(num: i32, den: u8) -> Option<Self> {
        match den {
            1 => Some(Ratio { num, den }),
            2 if num % 2 == 0 => Some(Ratio { num: num / 2, den: 1 }),
            2 => Some(Ratio { num, den }),
            _ => None,
        }
    }

    pub fn integer(num: i32) -> Self {
        Ratio { num, den: 1 }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

/// Inverse of a monotone function `f` on `[lo, hi]` applied to `arg`, evaluated by bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseFn {
    pub f: Expr,
    pub lo: f64,
    pub hi: f64,
    pub arg: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Scale(f64, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Ratio),
    Sqrt(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Asin(Box<Expr>),
    Acos(Box<Expr>),
    Inverse(Box<InverseFn>),
}

fn hull(vals: &[f64]) -> (f64, f64) {
    vals.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)))
}

/// Range of `cos` over `[lo, hi]`. `sin` uses it after a quarter-turn shift.
fn cos_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo >= 2.0 * PI {
        return (-1.0, 1.0);
    }
    let (mut l, mut h) = hull(&[lo.cos(), hi.cos()]);
    // extrema of cos sit at multiples of π
    let mut k = (lo / PI).ceil();
    while k * PI <= hi {
        if (k as i64) % 2 == 0 {
            h = 1.0;
        } else {
            l = -1.0;
        }
        k += 1.0;
    }
    (l, h)
}

fn clamp_unit(v: f64) -> f64 {
    if v > 1.0 && v - 1.0 <= DOMAIN_SLACK {
        1.0
    } else if v < -1.0 && -1.0 - v <= DOMAIN_SLACK {
        -1.0
    } else {
        v
    }
}

/// Also maps `-0.0` to `0.0`, so a square root at its branch point is `+0`.
fn clamp_nonneg(v: f64) -> f64 {
    if (-DOMAIN_SLACK..=0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn is_const(&self) -> bool {
        !self.has_var()
    }

    pub fn has_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Inverse(inv) => inv.arg.has_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_var() || b.has_var(),
            Expr::Scale(_, a)
            | Expr::Pow(a, _)
            | Expr::Sqrt(a)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Asin(a)
            | Expr::Acos(a) => a.has_var(),
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Add(a, b) => a.eval(t) + b.eval(t),
            Expr::Sub(a, b) => a.eval(t) - b.eval(t),
            Expr::Scale(k, a) => k * a.eval(t),
            Expr::Mul(a, b) => a.eval(t) * b.eval(t),
            Expr::Pow(a, r) => {
                let base = a.eval(t);
                if r.den == 1 {
                    base.powi(r.num)
                } else {
                    clamp_nonneg(base).sqrt().powi(r.num)
                }
            }
            Expr::Sqrt(a) => clamp_nonneg(a.eval(t)).sqrt(),
            Expr::Sin(a) => a.eval(t).sin(),
            Expr::Cos(a) => a.eval(t).cos(),
            Expr::Asin(a) => clamp_unit(a.eval(t)).asin(),
            Expr::Acos(a) => clamp_unit(a.eval(t)).acos(),
            Expr::Inverse(inv) => inv.solve(inv.arg.eval(t)),
        }
    }

    /// Enclosure of the values on `[lo, hi]` by interval evaluation.
    ///
    /// Exact (up to rounding) when the variable occurs once under monotone
    /// operations; wider otherwise. `None` when an operation leaves its domain.
    pub fn range(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let r = match self {
            Expr::Const(c) => (*c, *c),
            Expr::Var => (lo, hi),
            Expr::Add(a, b) => {
                let ((al, ah), (bl, bh)) = (a.range(lo, hi)?, b.range(lo, hi)?);
                (al + bl, ah + bh)
            }
            Expr::Sub(a, b) => {
                let ((al, ah), (bl, bh)) = (a.range(lo, hi)?, b.range(lo, hi)?);
                (al - bh, ah - bl)
            }
            Expr::Scale(k, a) => {
                let (al, ah) = a.range(lo, hi)?;
                hull(&[k * al, k * ah])
            }
            Expr::Mul(a, b) => {
                let ((al, ah), (bl, bh)) = (a.range(lo, hi)?, b.range(lo, hi)?);
                hull(&[al * bl, al * bh, ah * bl, ah * bh])
            }
            Expr::Pow(a, r) => {
                let (al, ah) = a.range(lo, hi)?;
                if r.den == 1 {
                    if al >= 0.0 || ah <= 0.0 {
                        hull(&[al.powi(r.num), ah.powi(r.num)])
                    } else if r.num < 0 {
                        return None;
                    } else if r.num % 2 == 0 {
                        (0.0, al.powi(r.num).max(ah.powi(r.num)))
                    } else {
                        (al.powi(r.num), ah.powi(r.num))
                    }
                } else {
                    let (sl, sh) = (clamp_nonneg(al).sqrt(), clamp_nonneg(ah).sqrt());
                    hull(&[sl.powi(r.num), sh.powi(r.num)])
                }
            }
            Expr::Sqrt(a) => {
                let (al, ah) = a.range(lo, hi)?;
                (clamp_nonneg(al).sqrt(), clamp_nonneg(ah).sqrt())
            }
            Expr::Sin(a) => {
                let (al, ah) = a.range(lo, hi)?;
                cos_range(al - FRAC_PI_2, ah - FRAC_PI_2)
            }
            Expr::Cos(a) => {
                let (al, ah) = a.range(lo, hi)?;
                cos_range(al, ah)
            }
            Expr::Asin(a) => {
                let (al, ah) = a.range(lo, hi)?;
                (clamp_unit(al).asin(), clamp_unit(ah).asin())
            }
            Expr::Acos(a) => {
                let (al, ah) = a.range(lo, hi)?;
                (clamp_unit(ah).acos(), clamp_unit(al).acos())
            }
            Expr::Inverse(inv) => {
                let (al, ah) = inv.arg.range(lo, hi)?;
                hull(&[inv.solve(al), inv.solve(ah)])
            }
        };
        (!r.0.is_nan() && !r.1.is_nan() && r.0 <= r.1).then_some(r)
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Scale(k, a) => scale(*k, a.derivative()),
            Expr::Mul(a, b) => add(mul(a.derivative(), (**b).clone()), mul((**a).clone(), b.derivative())),
            Expr::Pow(a, r) => {
                let lowered = Ratio::new(r.num - i32::from(r.den), r.den).expect("den is 1 or 2");
                let outer = scale(r.as_f64(), pow((**a).clone(), lowered));
                mul(outer, a.derivative())
            }
            Expr::Sqrt(a) => mul(
                scale(0.5, pow((**a).clone(), Ratio { num: -1, den: 2 })),
                a.derivative(),
            ),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.derivative()),
            Expr::Cos(a) => mul(scale(-1.0, Expr::Sin(a.clone())), a.derivative()),
            Expr::Asin(a) => mul(a.derivative(), one_minus_square_inv_sqrt(a)),
            Expr::Acos(a) => scale(-1.0, mul(a.derivative(), one_minus_square_inv_sqrt(a))),
            Expr::Inverse(inv) => {
                let fprime_at = inv.f.derivative().substitute(self);
                mul(pow(fprime_at, Ratio::integer(-1)), inv.arg.derivative())
            }
        }
    }

    /// Replaces every occurrence of the variable by `e`.
    pub fn substitute(&self, e: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => e.clone(),
            Expr::Add(a, b) => add(a.substitute(e), b.substitute(e)),
            Expr::Sub(a, b) => sub(a.substitute(e), b.substitute(e)),
            Expr::Scale(k, a) => scale(*k, a.substitute(e)),
            Expr::Mul(a, b) => mul(a.substitute(e), b.substitute(e)),
            Expr::Pow(a, r) => pow(a.substitute(e), *r),
            Expr::Sqrt(a) => Expr::Sqrt(Box::new(a.substitute(e))),
            Expr::Sin(a) => Expr::Sin(Box::new(a.substitute(e))),
            Expr::Cos(a) => Expr::Cos(Box::new(a.substitute(e))),
            Expr::Asin(a) => Expr::Asin(Box::new(a.substitute(e))),
            Expr::Acos(a) => Expr::Acos(Box::new(a.substitute(e))),
            Expr::Inverse(inv) => Expr::Inverse(Box::new(InverseFn {
                f: inv.f.clone(),
                lo: inv.lo,
                hi: inv.hi,
                arg: inv.arg.substitute(e),
            })),
        }
    }

    /// Coefficients `[c0, c1, c2]` when the expression is a polynomial of degree at most two.
    pub fn as_quadratic(&self) -> Option<[f64; 3]> {
        fn mul_poly(p: [f64; 3], q: [f64; 3]) -> Option<[f64; 3]> {
            let mut out = [0.0; 5];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in q.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            if out[3] != 0.0 || out[4] != 0.0 {
                return None;
            }
            Some([out[0], out[1], out[2]])
        }
        match self {
            Expr::Const(c) => Some([*c, 0.0, 0.0]),
            Expr::Var => Some([0.0, 1.0, 0.0]),
            Expr::Add(a, b) => {
                let (p, q) = (a.as_quadratic()?, b.as_quadratic()?);
                Some([p[0] + q[0], p[1] + q[1], p[2] + q[2]])
            }
            Expr::Sub(a, b) => {
                let (p, q) = (a.as_quadratic()?, b.as_quadratic()?);
                Some([p[0] - q[0], p[1] - q[1], p[2] - q[2]])
            }
            Expr::Scale(k, a) => {
                let p = a.as_quadratic()?;
                Some([k * p[0], k * p[1], k * p[2]])
            }
            Expr::Mul(a, b) => mul_poly(a.as_quadratic()?, b.as_quadratic()?),
            Expr::Pow(a, r) if r.den == 1 && (0..=2).contains(&r.num) => {
                let p = a.as_quadratic()?;
                match r.num {
                    0 => Some([1.0, 0.0, 0.0]),
                    1 => Some(p),
                    _ => mul_poly(p, p),
                }
            }
            _ if self.is_const() => Some([self.eval(0.0), 0.0, 0.0]),
            _ => None,
        }
    }

    /// Prints the expression with the variable named `var`.
    pub fn display(&self, var: char) -> ExprDisplay<'_> {
        ExprDisplay { expr: self, var }
    }
}

impl InverseFn {
    /// The `t` in `[lo, hi]` with `f(t) = y`.
    pub fn solve(&self, y: f64) -> f64 {
        let (flo, fhi) = (self.f.eval(self.lo), self.f.eval(self.hi));
        let increasing = fhi >= flo;
        let (ymin, ymax) = if increasing { (flo, fhi) } else { (fhi, flo) };
        let slack = DOMAIN_SLACK * (1.0 + ymin.abs().max(ymax.abs()));
        if y < ymin - slack || y > ymax + slack {
            return f64::NAN;
        }
        if y <= ymin {
            return if increasing { self.lo } else { self.hi };
        }
        if y >= ymax {
            return if increasing { self.hi } else { self.lo };
        }
        let (mut a, mut b) = (self.lo, self.hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let below = if increasing {
                self.f.eval(mid) < y
            } else {
                self.f.eval(mid) > y
            };
            if below {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

fn one_minus_square_inv_sqrt(a: &Expr) -> Expr {
    let inner = sub(Expr::Const(1.0), pow(a.clone(), Ratio::integer(2)));
    pow(inner, Ratio { num: -1, den: 2 })
}

/// Sum with constant folding.
pub fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (Expr::Const(x), _) if *x == 0.0 => b,
        (_, Expr::Const(y)) if *y == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

/// Difference with constant folding.
pub fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (_, Expr::Const(y)) if *y == 0.0 => a,
        (Expr::Const(x), _) if *x == 0.0 => scale(-1.0, b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

/// Scalar multiple with constant folding.
pub fn scale(k: f64, a: Expr) -> Expr {
    match a {
        _ if k == 1.0 => a,
        Expr::Const(c) => Expr::Const(k * c),
        _ if k == 0.0 => Expr::Const(0.0),
        other => Expr::Scale(k, Box::new(other)),
    }
}

/// Product with constant folding.
pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), None) => scale(x, b),
        (None, Some(y)) => scale(y, a),
        (None, None) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

/// Rational power with constant folding.
pub fn pow(a: Expr, r: Ratio) -> Expr {
    match (&a, r) {
        (_, Ratio { num: 1, den: 1 }) => a,
        (_, Ratio { num: 0, den: 1 }) => Expr::Const(1.0),
        (Expr::Const(_), _) => Expr::Const(Expr::Pow(Box::new(a), r).eval(0.0)),
        _ => Expr::Pow(Box::new(a), r),
    }
}

pub fn sqrt(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(clamp_nonneg(c).sqrt()),
        other => Expr::Sqrt(Box::new(other)),
    }
}

pub fn sin(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(c.sin()),
        other => Expr::Sin(Box::new(other)),
    }
}

pub fn cos(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(c.cos()),
        other => Expr::Cos(Box::new(other)),
    }
}

pub fn asin(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(clamp_unit(c).asin()),
        other => Expr::Asin(Box::new(other)),
    }
}

pub fn acos(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(clamp_unit(c).acos()),
        other => Expr::Acos(Box::new(other)),
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    var: char,
}

/// Shortest round-trip decimal (at most 17 significant digits), with negative
/// zero printed as `0` and exponent notation for very small or large magnitudes.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() && (x.abs() < 1e-4 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_ATOM: u8 = 3;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_SUM,
        Expr::Scale(..) | Expr::Mul(..) => PREC_PRODUCT,
        Expr::Const(c) if *c < 0.0 => PREC_PRODUCT,
        _ => PREC_ATOM,
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, var: char, min_prec: u8) -> fmt::Result {
    let wrap = precedence(e) < min_prec;
    if wrap {
        f.write_str("(")?;
    }
    match e {
        Expr::Const(c) => f.write_str(&format_number(*c))?,
        Expr::Var => write!(f, "{var}")?,
        Expr::Add(a, b) => {
            write_expr(f, a, var, PREC_SUM)?;
            f.write_str(" + ")?;
            write_expr(f, b, var, PREC_SUM)?;
        }
        Expr::Sub(a, b) => {
            write_expr(f, a, var, PREC_SUM)?;
            f.write_str(" - ")?;
            write_expr(f, b, var, PREC_PRODUCT)?;
        }
        Expr::Scale(k, a) => {
            f.write_str(&format_number(*k))?;
            f.write_str("*")?;
            write_expr(f, a, var, PREC_PRODUCT)?;
        }
        Expr::Mul(a, b) => {
            write_expr(f, a, var, PREC_PRODUCT)?;
            f.write_str("*")?;
            // A leading literal on the right would be re-read as a scale factor.
            let right_prec = if matches!(**b, Expr::Scale(..)) {
                PREC_ATOM
            } else {
                PREC_PRODUCT
            };
            write_expr(f, b, var, right_prec)?;
        }
        Expr::Pow(a, r) => {
            write_expr(f, a, var, PREC_ATOM)?;
            match (r.num, r.den) {
                (n, 1) if n >= 0 => write!(f, "^{n}")?,
                (n, 1) => write!(f, "^({n})")?,
                (n, d) => write!(f, "^({n}/{d})")?,
            }
        }
        Expr::Sqrt(a) => write_call(f, "sqrt", a, var)?,
        Expr::Sin(a) => write_call(f, "sin", a, var)?,
        Expr::Cos(a) => write_call(f, "cos", a, var)?,
        Expr::Asin(a) => write_call(f, "asin", a, var)?,
        Expr::Acos(a) => write_call(f, "acos", a, var)?,
        Expr::Inverse(inv) => {
            f.write_str("inv(")?;
            write_expr(f, &inv.f, 'x', PREC_SUM)?;
            write!(f, ", {}, {}", format_number(inv.lo), format_number(inv.hi))?;
            if !matches!(inv.arg, Expr::Var) {
                f.write_str(", ")?;
                write_expr(f, &inv.arg, var, PREC_SUM)?;
            }
            f.write_str(")")?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, a: &Expr, var: char) -> fmt::Result {
    write!(f, "{name}(")?;
    write_expr(f, a, var, PREC_SUM)?;
    f.write_str(")")
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.var, PREC_SUM)
    }
}
