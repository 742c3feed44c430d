use crate::error::{FuzzyError, Result};
use crate::expr::Expr;

/// Declared monotonicity of a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Increasing,
    Decreasing,
    Constant,
}

impl Shape {
    pub fn keyword(self) -> &'static str {
        match self {
            Shape::Increasing => "inc",
            Shape::Decreasing => "dec",
            Shape::Constant => "const",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Shape> {
        match s {
            "inc" => Some(Shape::Increasing),
            "dec" => Some(Shape::Decreasing),
            "const" => Some(Shape::Constant),
            _ => None,
        }
    }
}

/// One closed-form piece of a cut function over the level interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    lo: f64,
    hi: f64,
    expr: Expr,
    deriv: Expr,
    shape: Shape,
}

impl Segment {
    pub fn new(lo: f64, hi: f64, expr: Expr, shape: Shape) -> Segment {
        let deriv = expr.derivative();
        Segment {
            lo,
            hi,
            expr,
            deriv,
            shape,
        }
    }

    pub fn constant(lo: f64, hi: f64, value: f64) -> Segment {
        Segment::new(lo, hi, Expr::Const(value), Shape::Constant)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        self.expr.eval(alpha)
    }

    /// Derivative of the closed form at `alpha`, approached from inside the segment.
    ///
    /// Where the symbolic derivative is undefined (`0 * inf` and the like) the
    /// value is read off a short inward sequence instead. The sign always
    /// follows the declared shape.
    pub fn deriv(&self, alpha: f64) -> f64 {
        match self.shape {
            Shape::Constant => 0.0,
            Shape::Increasing => self.raw_deriv(alpha).abs(),
            Shape::Decreasing => -self.raw_deriv(alpha).abs(),
        }
    }

    fn raw_deriv(&self, alpha: f64) -> f64 {
        let d = self.deriv.eval(alpha);
        if !d.is_nan() {
            return d;
        }
        let inward = if alpha >= self.hi { -1.0 } else { 1.0 };
        let width = self.hi - self.lo;
        let probes: Vec<f64> = [1e-6, 1e-8, 1e-10]
            .iter()
            .map(|h| self.deriv.eval(alpha + inward * h * width))
            .collect();
        if probes.iter().any(|p| p.is_nan()) {
            return f64::NAN;
        }
        // A square-root singularity grows tenfold per step here; a finite derivative barely moves.
        let growing = probes[2].abs() > 3.0 * probes[1].abs() && probes[1].abs() > 3.0 * probes[0].abs();
        if growing {
            f64::INFINITY.copysign(probes[2])
        } else {
            probes[2]
        }
    }

    pub(crate) fn with_expr(&self, expr: Expr, shape: Shape) -> Segment {
        Segment::new(self.lo, self.hi, expr, shape)
    }
}

/// A monotone cut function on `[0, 1]` made of closed-form segments.
///
/// `points[i]` is the value at the `i`-th breakpoint. For a valid curve it is
/// the limit from below (from above at level 0), so a jump between segments
/// keeps both one-sided values: the stored point value and the next
/// segment's closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CutCurve {
    segments: Vec<Segment>,
    points: Vec<f64>,
}

impl CutCurve {
    /// Builds a curve whose breakpoint values follow the continuity conventions.
    pub fn new(segments: Vec<Segment>) -> Result<CutCurve> {
        check_layout(&segments)?;
        let mut points = Vec::with_capacity(segments.len() + 1);
        points.push(segments[0].eval(0.0));
        points.extend(segments.iter().map(|s| s.eval(s.hi)));
        let curve = CutCurve { segments, points };
        curve.check_finite()?;
        Ok(curve)
    }

    /// Builds a curve with explicitly stored breakpoint values.
    pub fn with_points(segments: Vec<Segment>, points: Vec<f64>) -> Result<CutCurve> {
        check_layout(&segments)?;
        if points.len() != segments.len() + 1 {
            return Err(FuzzyError::Structural(format!(
                "{} segments need {} breakpoint values, got {}",
                segments.len(),
                segments.len() + 1,
                points.len()
            )));
        }
        let curve = CutCurve { segments, points };
        curve.check_finite()?;
        Ok(curve)
    }

    pub fn constant(value: f64) -> CutCurve {
        CutCurve::new(vec![Segment::constant(0.0, 1.0, value)]).expect("single constant segment")
    }

    fn check_finite(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if !p.is_finite() {
                return Err(FuzzyError::Structural(format!("non-finite value at breakpoint {i}")));
            }
        }
        for s in &self.segments {
            for a in [s.lo, s.hi] {
                if !s.eval(a).is_finite() {
                    return Err(FuzzyError::Structural(format!(
                        "segment [{}, {}] is not finite at level {a}",
                        s.lo, s.hi
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Breakpoint levels, `0` and `1` included.
    pub fn breaks(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(0.0).chain(self.segments.iter().map(|s| s.hi))
    }

    /// Whether the stored point values follow the continuity conventions.
    pub fn has_conventional_points(&self) -> bool {
        self.points[0] == self.segments[0].eval(0.0)
            && self
                .segments
                .iter()
                .zip(&self.points[1..])
                .all(|(s, p)| *p == s.eval(s.hi))
    }

    /// Index of the segment whose half-open range `(lo, hi]` holds `alpha`; level 0 maps to the first.
    pub fn index_below(&self, alpha: f64) -> usize {
        let i = self.segments.partition_point(|s| s.hi < alpha);
        i.min(self.segments.len() - 1)
    }

    /// Index of the segment whose half-open range `[lo, hi)` holds `alpha`; level 1 maps to the last.
    pub fn index_above(&self, alpha: f64) -> usize {
        let i = self.segments.partition_point(|s| s.hi <= alpha);
        i.min(self.segments.len() - 1)
    }

    /// Value at `alpha`, using stored values at breakpoints.
    pub fn eval(&self, alpha: f64) -> f64 {
        let i = self.index_below(alpha);
        let s = &self.segments[i];
        if alpha == s.hi {
            self.points[i + 1]
        } else if alpha == s.lo {
            self.points[i]
        } else {
            s.eval(alpha)
        }
    }

    /// Limit from above at `alpha < 1`; the stored value at level 1.
    pub fn eval_strong(&self, alpha: f64) -> f64 {
        if alpha >= 1.0 {
            return self.points[self.segments.len()];
        }
        self.segments[self.index_above(alpha)].eval(alpha)
    }

    /// Limit from below at `alpha > 0`.
    pub fn eval_below(&self, alpha: f64) -> f64 {
        if alpha <= 0.0 {
            return self.eval(0.0);
        }
        self.segments[self.index_below(alpha)].eval(alpha)
    }

    /// Derivative from below at `alpha > 0`.
    pub fn deriv_below(&self, alpha: f64) -> f64 {
        self.segments[self.index_below(alpha)].deriv(alpha)
    }

    /// Derivative from above at `alpha < 1`.
    pub fn deriv_above(&self, alpha: f64) -> f64 {
        self.segments[self.index_above(alpha)].deriv(alpha)
    }

    /// Applies `f` to every segment expression and `g` to every stored value.
    pub(crate) fn map(&self, f: impl Fn(&Segment) -> Segment, g: impl Fn(f64) -> f64) -> CutCurve {
        CutCurve {
            segments: self.segments.iter().map(f).collect(),
            points: self.points.iter().map(|p| g(*p)).collect(),
        }
    }
}

fn check_layout(segments: &[Segment]) -> Result<()> {
    let err = |m: String| Err(FuzzyError::Structural(m));
    let Some(first) = segments.first() else {
        return err("a cut curve needs at least one segment".into());
    };
    if first.lo != 0.0 {
        return err(format!("first segment starts at level {} instead of 0", first.lo));
    }
    let last = segments.last().expect("nonempty");
    if last.hi != 1.0 {
        return err(format!("last segment ends at level {} instead of 1", last.hi));
    }
    for (i, s) in segments.iter().enumerate() {
        if !(s.lo < s.hi) {
            return err(format!("segment {i} has empty level interval [{}, {}]", s.lo, s.hi));
        }
        if i > 0 && segments[i - 1].hi != s.lo {
            return err(format!(
                "segment {i} starts at {} but the previous one ends at {}",
                s.lo,
                segments[i - 1].hi
            ));
        }
    }
    Ok(())
}
