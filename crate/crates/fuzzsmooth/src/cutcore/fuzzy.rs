use super::curve::{CutCurve, Segment, Shape};
use crate::error::{FuzzyError, Result};
use crate::tol;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A fuzzy number stored through its two cut functions.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNum {
    left: CutCurve,
    right: CutCurve,
}

pub(crate) fn check_level(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(FuzzyError::LevelOutOfRange(alpha))
    }
}

/// Bisection limit shared by every level search.
const MAX_BISECT: usize = 200;

/// Levels this close to a breakpoint are snapped onto it.
const SNAP: f64 = 1e-13;

impl FuzzyNum {
    /// Pairs two cut curves. Semantic validity is checked by [`FuzzyNum::validate`].
    pub fn new(left: CutCurve, right: CutCurve) -> FuzzyNum {
        FuzzyNum { left, right }
    }

    /// Pairs two cut curves and rejects anything that fails validation.
    pub fn checked(left: CutCurve, right: CutCurve) -> Result<FuzzyNum> {
        let u = FuzzyNum::new(left, right);
        let report = u.validate();
        match report.first_failure() {
            None => Ok(u),
            Some(c) => Err(FuzzyError::Invalid(c.to_string())),
        }
    }

    /// The crisp number `x`.
    pub fn singleton(x: f64) -> FuzzyNum {
        FuzzyNum::crisp(x, x)
    }

    /// The indicator of `[a, b]`.
    pub fn crisp(a: f64, b: f64) -> FuzzyNum {
        FuzzyNum::new(CutCurve::constant(a), CutCurve::constant(b))
    }

    pub fn left(&self) -> &CutCurve {
        &self.left
    }

    pub fn right(&self) -> &CutCurve {
        &self.right
    }

    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        check_level(alpha)?;
        Ok(Interval::new(self.left.eval(alpha), self.right.eval(alpha)))
    }

    /// Closure of `{x : u(x) > alpha}` for `alpha < 1`; the core at `alpha = 1`.
    pub fn strong_cut(&self, alpha: f64) -> Result<Interval> {
        check_level(alpha)?;
        Ok(Interval::new(
            self.left.eval_strong(alpha),
            self.right.eval_strong(alpha),
        ))
    }

    pub fn support(&self) -> Interval {
        Interval::new(self.left.eval(0.0), self.right.eval(0.0))
    }

    pub fn core(&self) -> Interval {
        Interval::new(self.left.eval(1.0), self.right.eval(1.0))
    }

    pub fn is_degenerate(&self) -> bool {
        let s = self.support();
        s.lo == s.hi
    }

    /// Membership at the two support endpoints, `(u(u⁻(0)), u(u⁺(0)))`.
    pub fn base_levels(&self) -> (f64, f64) {
        let s = self.support();
        (self.membership(s.lo), self.membership(s.hi))
    }

    /// `sup{α : u⁻(α) ≤ x}`, or `< x` when `strict`. Requires `x ≥ u⁻(0)`.
    fn level_on_left(&self, x: f64, strict: bool) -> f64 {
        let ok = |v: f64| if strict { v < x } else { v <= x };
        search_level(&self.left, x, ok)
    }

    /// `sup{α : u⁺(α) ≥ x}`, or `> x` when `strict`. Requires `x ≤ u⁺(0)`.
    fn level_on_right(&self, x: f64, strict: bool) -> f64 {
        let ok = |v: f64| if strict { v > x } else { v >= x };
        search_level(&self.right, x, ok)
    }

    /// Membership grade at `x`.
    pub fn membership(&self, x: f64) -> f64 {
        let (s, c) = (self.support(), self.core());
        if !s.contains(x) {
            return 0.0;
        }
        if c.contains(x) {
            1.0
        } else if x < c.lo {
            self.level_on_left(x, false)
        } else {
            self.level_on_right(x, false)
        }
    }

    /// `lim_{y→x−} u(y)`.
    pub fn limit_left(&self, x: f64) -> f64 {
        let (s, c) = (self.support(), self.core());
        if x <= s.lo || x > s.hi {
            0.0
        } else if x <= c.lo {
            self.level_on_left(x, true)
        } else if x <= c.hi {
            1.0
        } else {
            self.membership(x)
        }
    }

    /// `lim_{y→x+} u(y)`.
    pub fn limit_right(&self, x: f64) -> f64 {
        let (s, c) = (self.support(), self.core());
        if x < s.lo || x >= s.hi {
            0.0
        } else if x < c.lo {
            self.membership(x)
        } else if x < c.hi {
            1.0
        } else {
            self.level_on_right(x, true)
        }
    }

    /// `(α, u⁻(α), u⁺(α))` at `n` equally spaced levels.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let a = k as f64 / (n - 1) as f64;
                (a, self.left.eval(a), self.right.eval(a))
            })
            .collect()
    }

    /// Rows `(α, u⁻(α), u⁺(α))` at the requested levels, with every breakpoint level added.
    pub fn sample_levels(&self, grid: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
        if grid.is_empty() {
            return Err(FuzzyError::Precondition("empty level grid".into()));
        }
        for &a in grid {
            check_level(a)?;
        }
        let mut levels: Vec<f64> = grid
            .iter()
            .copied()
            .chain(self.left.breaks())
            .chain(self.right.breaks())
            .collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        Ok(levels
            .into_iter()
            .map(|a| (a, self.left.eval(a), self.right.eval(a)))
            .collect())
    }

    /// Sorted abscissae where either cut function has a breakpoint, both one-sided values included.
    pub fn breakpoint_abscissae(&self) -> Vec<f64> {
        let mut xs = Vec::new();
        for curve in [&self.left, &self.right] {
            xs.extend_from_slice(curve.points());
            xs.extend(curve.segments().iter().map(|s| s.eval(s.lo())));
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| tol::same_x(*a, *b));
        xs
    }

    /// Checks the four defining clauses. Structural problems were already rejected by the curve constructors.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = vec![
            check_curve(&self.left, Clause::LeftCut),
            check_curve(&self.right, Clause::RightCut),
        ];
        let mut zero = ClauseCheck::pass(Clause::ContinuousAtZero);
        for curve in [&self.left, &self.right] {
            let from_above = curve.segments()[0].eval(0.0);
            if !tol::same_x(curve.points()[0], from_above) {
                zero = ClauseCheck::fail(
                    Clause::ContinuousAtZero,
                    0.0,
                    format!(
                        "stored value {} at level 0 differs from the limit from above {from_above}",
                        curve.points()[0]
                    ),
                );
            }
        }
        checks.push(zero);
        let (lo, hi) = (self.left.eval(1.0), self.right.eval(1.0));
        checks.push(if lo <= hi + tol::ABSCISSA * (1.0 + lo.abs()) {
            ClauseCheck::pass(Clause::CoreOrder)
        } else {
            ClauseCheck::fail(Clause::CoreOrder, 1.0, format!("u⁻(1) = {lo} exceeds u⁺(1) = {hi}"))
        });
        ValidationReport { checks }
    }
}

fn search_level(curve: &CutCurve, x: f64, ok: impl Fn(f64) -> bool) -> f64 {
    let segs = curve.segments();
    let pts = curve.points();
    for i in (0..segs.len()).rev() {
        let s = &segs[i];
        if ok(pts[i + 1]) {
            return s.hi();
        }
        if !ok(s.eval(s.lo())) {
            continue;
        }
        let (mut a, mut b) = (s.lo(), s.hi());
        let (mut fa, mut fb) = (s.eval(a) - x, s.eval(b) - x);
        // two false-position steps then one bisection, so the bracket at least halves every three evaluations
        for step in 0..3 * MAX_BISECT {
            let half = 0.5 * (a + b);
            if half <= a || half >= b {
                break;
            }
            let secant = a + fa / (fa - fb) * (b - a);
            let mid = if step % 3 != 2 && secant > a && secant < b {
                secant
            } else {
                half
            };
            let v = s.eval(mid);
            if ok(v) {
                a = mid;
                fa = v - x;
            } else {
                b = mid;
                fb = v - x;
            }
        }
        // A segment that meets `x` at one of its ends with a flat cut would
        // otherwise report a level off that end by the float resolution of the cut.
        return if s.hi() - a <= SNAP || tol::same_x(s.eval(s.hi()), x) {
            s.hi()
        } else if a - s.lo() <= SNAP || tol::same_x(s.eval(s.lo()), x) {
            s.lo()
        } else {
            a
        };
    }
    0.0
}

/// The defining clauses of a fuzzy number in cut form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// Lower cut function is bounded, nondecreasing and left-continuous.
    LeftCut,
    /// Upper cut function is bounded, nonincreasing and left-continuous.
    RightCut,
    /// Both cut functions are right-continuous at level 0.
    ContinuousAtZero,
    /// `u⁻(1) ≤ u⁺(1)`.
    CoreOrder,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::LeftCut => "(i) lower cut bounded, nondecreasing, left-continuous",
            Clause::RightCut => "(ii) upper cut bounded, nonincreasing, left-continuous",
            Clause::ContinuousAtZero => "(iii) cuts right-continuous at 0",
            Clause::CoreOrder => "(iv) u⁻(1) ≤ u⁺(1)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseCheck {
    pub clause: Clause,
    pub passed: bool,
    pub witness: Option<f64>,
    pub detail: String,
}

impl ClauseCheck {
    fn pass(clause: Clause) -> ClauseCheck {
        ClauseCheck {
            clause,
            passed: true,
            witness: None,
            detail: String::new(),
        }
    }

    fn fail(clause: Clause, witness: f64, detail: String) -> ClauseCheck {
        ClauseCheck {
            clause,
            passed: false,
            witness: Some(witness),
            detail,
        }
    }
}

impl std::fmt::Display for ClauseCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {}",
            self.clause.label(),
            if self.passed { "ok" } else { "FAILED" }
        )?;
        if let Some(w) = self.witness {
            write!(f, " at level {w}")?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<ClauseCheck>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ClauseCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

const MONOTONE_PROBES: usize = 16;

fn check_curve(curve: &CutCurve, clause: Clause) -> ClauseCheck {
    let sign = if clause == Clause::LeftCut { 1.0 } else { -1.0 };
    let want = if clause == Clause::LeftCut {
        Shape::Increasing
    } else {
        Shape::Decreasing
    };
    let segs = curve.segments();
    let pts = curve.points();
    for (i, s) in segs.iter().enumerate() {
        if s.shape() != want && s.shape() != Shape::Constant {
            return ClauseCheck::fail(
                clause,
                s.lo(),
                format!("segment on [{}, {}] is tagged {}", s.lo(), s.hi(), s.shape().keyword()),
            );
        }
        if let Some(bad) = monotone_violation(s, sign) {
            return ClauseCheck::fail(clause, bad, format!("not monotone near level {bad}"));
        }
        let below = s.eval(s.hi());
        if !tol::same_x(pts[i + 1], below) {
            return ClauseCheck::fail(
                clause,
                s.hi(),
                format!(
                    "stored value {} at level {} is not the limit from below {below}",
                    pts[i + 1],
                    s.hi()
                ),
            );
        }
        if i + 1 < segs.len() {
            let above = segs[i + 1].eval(s.hi());
            if sign * (above - below) < -tol::ABSCISSA * (1.0 + below.abs()) {
                return ClauseCheck::fail(clause, s.hi(), format!("breaks monotonicity at level {}", s.hi()));
            }
        }
    }
    ClauseCheck::pass(clause)
}

fn monotone_violation(s: &Segment, sign: f64) -> Option<f64> {
    let mut prev = s.eval(s.lo());
    let scale = 1.0 + prev.abs();
    let flat = s.shape() == Shape::Constant;
    for k in 1..=MONOTONE_PROBES {
        let a = s.lo() + (s.hi() - s.lo()) * k as f64 / MONOTONE_PROBES as f64;
        let v = s.eval(a);
        if !v.is_finite() {
            return Some(a);
        }
        let step = sign * (v - prev);
        let bad = if flat {
            step.abs() > tol::ABSCISSA * scale
        } else {
            step < -tol::ABSCISSA * scale
        };
        if bad {
            return Some(a);
        }
        prev = v;
    }
    if !flat && sign * (s.eval(s.hi()) - s.eval(s.lo())) <= 0.0 {
        return Some(s.lo());
    }
    None
}
