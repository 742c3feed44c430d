//! Sup-min convolution, scalar multiples and the derivative rules for convolutions.
//!
//! In cut form `u∇v` is level-wise interval addition, so both cut functions of
//! the result are exact sums of closed forms over the merged breakpoints.

use crate::calculus::{one_sided, ExtendedSlope, Side};
use crate::cutcore::{check_level, CutCurve, FuzzyNum, Segment, Shape};
use crate::error::Result;
use crate::expr;
use crate::tol;

fn merged_breaks(a: &CutCurve, b: &CutCurve) -> Vec<f64> {
    let mut breaks: Vec<f64> = a.breaks().chain(b.breaks()).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

fn sum_shape(a: Shape, b: Shape) -> Shape {
    if a == Shape::Constant {
        b
    } else {
        a
    }
}

fn add_curves(a: &CutCurve, b: &CutCurve) -> CutCurve {
    let breaks = merged_breaks(a, b);
    let segments = breaks
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let (sa, sb) = (&a.segments()[a.index_below(mid)], &b.segments()[b.index_below(mid)]);
            Segment::new(
                w[0],
                w[1],
                expr::add(sa.expr().clone(), sb.expr().clone()),
                sum_shape(sa.shape(), sb.shape()),
            )
        })
        .collect();
    let points = breaks.iter().map(|&l| a.eval(l) + b.eval(l)).collect();
    CutCurve::with_points(segments, points).expect("merged partition of two valid layouts")
}

/// `u∇v`, computed as `[u]_α + [v]_α` at every level.
pub fn convolve(u: &FuzzyNum, v: &FuzzyNum) -> FuzzyNum {
    FuzzyNum::new(add_curves(u.left(), v.left()), add_curves(u.right(), v.right()))
}

fn scale_curve(r: f64, c: &CutCurve) -> CutCurve {
    let flip = |s: Shape| match s {
        Shape::Increasing if r < 0.0 => Shape::Decreasing,
        Shape::Decreasing if r < 0.0 => Shape::Increasing,
        s => s,
    };
    c.map(
        |s| s.with_expr(expr::scale(r, s.expr().clone()), flip(s.shape())),
        |p| r * p,
    )
}

/// The scalar multiple `r·v`. Negative factors swap the cut functions; `0·v` is the crisp zero.
pub fn scale(r: f64, v: &FuzzyNum) -> FuzzyNum {
    if r == 0.0 {
        FuzzyNum::singleton(0.0)
    } else if r > 0.0 {
        FuzzyNum::new(scale_curve(r, v.left()), scale_curve(r, v.right()))
    } else {
        FuzzyNum::new(scale_curve(r, v.right()), scale_curve(r, v.left()))
    }
}

/// Which end of a level set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// Level set or strong level set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    Cut,
    Strong,
}

/// An endpoint of `[u]_α` or of the strong cut `[u]_α^s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointSpec {
    pub endpoint: Endpoint,
    pub kind: CutKind,
    pub level: f64,
}

impl EndpointSpec {
    pub fn new(endpoint: Endpoint, kind: CutKind, level: f64) -> EndpointSpec {
        EndpointSpec { endpoint, kind, level }
    }

    /// The abscissa this endpoint names for `u`.
    pub fn locate(&self, u: &FuzzyNum) -> Result<f64> {
        check_level(self.level)?;
        let curve = match self.endpoint {
            Endpoint::Lower => u.left(),
            Endpoint::Upper => u.right(),
        };
        Ok(match self.kind {
            CutKind::Cut => curve.eval(self.level),
            CutKind::Strong => curve.eval_strong(self.level),
        })
    }
}

/// Membership of `u∇v` at the endpoint named by `spec`: `min(u(u^∓(α)), v(v^∓(α)))`.
pub fn endpoint_value(u: &FuzzyNum, v: &FuzzyNum, spec: EndpointSpec) -> Result<f64> {
    let (xu, xv) = (spec.locate(u)?, spec.locate(v)?);
    Ok(u.membership(xu).min(v.membership(xv)))
}

/// Which rule produced a predicted slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// One factor has zero slope, so the convolution has zero slope.
    ZeroAbsorption,
    /// Both slopes share a sign: `(φ⁻¹ + ψ⁻¹)⁻¹`.
    Harmonic,
    /// The other factor does not constrain this side, so one slope passes through.
    Dominance,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::ZeroAbsorption => "zero-absorption",
            Rule::Harmonic => "harmonic",
            Rule::Dominance => "dominance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    Predicted {
        slope: ExtendedSlope,
        rule: Rule,
    },
    /// No rule's premises hold.
    Unpredicted,
}

impl Prediction {
    pub fn slope(&self) -> Option<f64> {
        match self {
            Prediction::Predicted { slope, .. } => Some(slope.value),
            Prediction::Unpredicted => None,
        }
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            Prediction::Predicted { rule, .. } => Some(*rule),
            Prediction::Unpredicted => None,
        }
    }
}

/// What the rules need to know about one factor at its endpoint.
#[derive(Debug, Clone, Copy)]
struct Factor {
    /// One-sided slope on the requested side.
    slope: f64,
    /// Membership at the endpoint.
    value: f64,
    /// Membership limit from outside the cut (left of a lower end, right of an upper end).
    outer_limit: f64,
    /// The cut function is continuous at the level.
    continuous: bool,
}

fn factor(u: &FuzzyNum, spec: EndpointSpec, side: Side) -> Result<Factor> {
    let x = spec.locate(u)?;
    let (curve, outer_limit) = match spec.endpoint {
        Endpoint::Lower => (u.left(), u.limit_left(x)),
        Endpoint::Upper => (u.right(), u.limit_right(x)),
    };
    let a = spec.level;
    Ok(Factor {
        slope: one_sided(u, x, side)?.value,
        value: u.membership(x),
        outer_limit,
        continuous: a >= 1.0 || tol::same_x(curve.eval(a), curve.eval_strong(a)),
    })
}

fn is_zero(s: f64) -> bool {
    s.abs() <= tol::ZERO_SLOPE
}

fn harmonic(a: f64, b: f64) -> f64 {
    1.0 / (1.0 / a + 1.0 / b)
}

/// Slope of `u∇v` on `side` at the endpoint named by `spec`, when one of the convolution rules applies.
///
/// The rules are one-directional, so anything outside their premises comes
/// back as [`Prediction::Unpredicted`] rather than as an estimate.
pub fn predicted_derivative(u: &FuzzyNum, v: &FuzzyNum, spec: EndpointSpec, side: Side) -> Result<Prediction> {
    let fu = factor(u, spec, side)?;
    let fv = factor(v, spec, side)?;
    Ok(match spec.kind {
        CutKind::Cut => cut_rules(spec, side, fu, fv),
        CutKind::Strong => match strong_rules(spec, side, fu, fv) {
            Some(p) => p,
            // Without a cut jump at the level the strong endpoints are the ordinary ones.
            None if fu.continuous && fv.continuous => cut_rules(spec, side, fu, fv),
            None => Prediction::Unpredicted,
        },
    })
}

/// Side pointing out of the cut: left at a lower end, right at an upper end.
fn outward(endpoint: Endpoint) -> Side {
    match endpoint {
        Endpoint::Lower => Side::Left,
        Endpoint::Upper => Side::Right,
    }
}

fn cut_rules(spec: EndpointSpec, side: Side, fu: Factor, fv: Factor) -> Prediction {
    let hit = |value: f64, rule: Rule| Prediction::Predicted {
        slope: ExtendedSlope { value, side },
        rule,
    };
    let a = spec.level;
    // Branch slopes are positive at a lower end and negative at an upper end.
    let sign = match spec.endpoint {
        Endpoint::Lower => 1.0,
        Endpoint::Upper => -1.0,
    };
    let steep = |s: f64| s.is_finite() && sign * s > tol::ZERO_SLOPE;

    if side == outward(spec.endpoint) {
        if is_zero(fu.slope) || is_zero(fv.slope) {
            return hit(0.0, Rule::ZeroAbsorption);
        }
        if steep(fu.slope) && steep(fv.slope) {
            return hit(harmonic(fu.slope, fv.slope), Rule::Harmonic);
        }
        for (this, other) in [(fu, fv), (fv, fu)] {
            if this.slope.is_finite() && other.outer_limit < a - tol::LEVEL {
                return hit(this.slope, Rule::Dominance);
            }
        }
    } else {
        // Inward side: the sum sits at level min(u(x_u), v(x_v)), and the factor
        // carrying the smaller value decides.
        for (this, other) in [(fu, fv), (fv, fu)] {
            if is_zero(this.slope) && other.value >= this.value - tol::LEVEL {
                return hit(0.0, Rule::ZeroAbsorption);
            }
        }
        if tol::same_level(fu.value, fv.value) && steep(fu.slope) && steep(fv.slope) {
            return hit(harmonic(fu.slope, fv.slope), Rule::Harmonic);
        }
        for (this, other) in [(fu, fv), (fv, fu)] {
            if this.slope.is_finite() && other.value > this.value + tol::LEVEL {
                return hit(this.slope, Rule::Dominance);
            }
        }
    }
    Prediction::Unpredicted
}

/// Zero-slope rules stated for strong-cut endpoints.
fn strong_rules(spec: EndpointSpec, side: Side, fu: Factor, fv: Factor) -> Option<Prediction> {
    let hit = Prediction::Predicted {
        slope: ExtendedSlope { value: 0.0, side },
        rule: Rule::ZeroAbsorption,
    };
    let absorbs =
        |f: Factor| is_zero(f.slope) && (side == outward(spec.endpoint) || tol::same_level(f.value, spec.level));
    (absorbs(fu) || absorbs(fv)).then_some(hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn tri() -> FuzzyNum {
        let l = Segment::new(0.0, 1.0, parse_expr("a - 1", 'a').unwrap(), Shape::Increasing);
        let r = Segment::new(0.0, 1.0, parse_expr("1 - a", 'a').unwrap(), Shape::Decreasing);
        FuzzyNum::new(CutCurve::new(vec![l]).unwrap(), CutCurve::new(vec![r]).unwrap())
    }

    #[test]
    fn identity_and_scaling() {
        let u = tri();
        let z = FuzzyNum::singleton(0.0);
        let c = convolve(&u, &z);
        for k in 0..=10 {
            let a = k as f64 / 10.0;
            assert_eq!(c.alpha_cut(a).unwrap(), u.alpha_cut(a).unwrap());
        }
        let s = scale(2.0, &u);
        assert_eq!(s.alpha_cut(0.25).unwrap().lo, 2.0 * (0.25 - 1.0));
        let n = scale(-1.0, &u);
        assert!(n.validate().is_valid());
        assert_eq!(n.alpha_cut(0.5).unwrap().lo, -0.5);
        assert_eq!(scale(0.0, &u), FuzzyNum::singleton(0.0));
    }

    #[test]
    fn harmonic_of_equal_slopes_halves() {
        let u = tri();
        let c = convolve(&u, &u);
        let spec = EndpointSpec::new(Endpoint::Lower, CutKind::Cut, 0.5);
        let p = predicted_derivative(&u, &u, spec, Side::Left).unwrap();
        assert_eq!(p.rule(), Some(Rule::Harmonic));
        assert!((p.slope().unwrap() - 0.5).abs() < 1e-12);
        let x = spec.locate(&c).unwrap();
        assert!((crate::calculus::left_deriv(&c, x).unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn endpoint_value_at_core_is_one() {
        let u = tri();
        let spec = EndpointSpec::new(Endpoint::Upper, CutKind::Cut, 1.0);
        assert_eq!(endpoint_value(&u, &u, spec).unwrap(), 1.0);
    }
}
