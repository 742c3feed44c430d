use std::fmt;

use crate::calculus::{class_membership, classify_points, one_sided, Branch, ClassFlags, Side, SingularPoint};
use crate::cutcore::FuzzyNum;
use crate::tol;

/// The smoother conditions. Paired conditions cover the lower and upper branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Base levels of the smoother equal those of `u`.
    BaseLevels,
    /// Zero slope at the core ends of the smoother where the core ends of `u` are singular.
    CoreLower,
    CoreUpper,
    /// Zero slope at the support ends of the smoother where the strong base cut of `u` is singular.
    BaseLower,
    BaseUpper,
    /// Zero slope at the levels of the singular points on the open branches.
    KinkLower,
    KinkUpper,
    /// Zero slope at the limit levels of the jumps.
    JumpLower,
    JumpUpper,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::BaseLevels,
        Condition::CoreLower,
        Condition::CoreUpper,
        Condition::BaseLower,
        Condition::BaseUpper,
        Condition::KinkLower,
        Condition::KinkUpper,
        Condition::JumpLower,
        Condition::JumpUpper,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::BaseLevels => "(i)",
            Condition::CoreLower => "(ii-1)",
            Condition::CoreUpper => "(ii-2)",
            Condition::BaseLower => "(iii-1)",
            Condition::BaseUpper => "(iii-2)",
            Condition::KinkLower => "(iv-1)",
            Condition::KinkUpper => "(iv-2)",
            Condition::JumpLower => "(v-1)",
            Condition::JumpUpper => "(v-2)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }

    /// Passing or vacuous.
    pub fn holds(self) -> bool {
        self != Verdict::Fail
    }
}

/// The smoothing theorems, from the most to the least demanding on `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `u` continuous and differentiable on its open branches; needs (i) and (ii).
    SmoothBranches,
    /// `u` continuous; needs (i), (ii) and (iv).
    Continuous,
    /// Any `u`; needs (i), (ii), (iv) and (v).
    General,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::SmoothBranches => "smooth-branches",
            Theorem::Continuous => "continuous",
            Theorem::General => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub verdict: Verdict,
    /// The level at which the condition was tested (the failing one, if any).
    pub level: Option<f64>,
    pub detail: String,
}

impl fmt::Display for ConditionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.condition.label(), self.verdict.label())?;
        if let Some(l) = self.level {
            write!(f, " level={l}")?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
    pub u_class: ClassFlags,
    /// The smoother is differentiable with a non-degenerate support.
    pub smoother_in_fd: bool,
    pub theorem: Option<Theorem>,
}

impl ConditionReport {
    pub fn verdict(&self, c: Condition) -> Verdict {
        self.checks
            .iter()
            .find(|k| k.condition == c)
            .map_or(Verdict::NotApplicable, |k| k.verdict)
    }

    pub fn get(&self, c: Condition) -> Option<&ConditionCheck> {
        self.checks.iter().find(|k| k.condition == c)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|k| k.verdict == Verdict::Fail)
    }

    /// Why no theorem applies, for error messages.
    pub fn refusal(&self) -> String {
        if !self.smoother_in_fd {
            return "the smoother is not a differentiable fuzzy number with nondegenerate support".into();
        }
        let names: Vec<String> = self.failures().map(|c| c.to_string()).collect();
        if names.is_empty() {
            "no smoothing theorem applies".into()
        } else {
            format!("failed {}", names.join(", "))
        }
    }
}

/// Which one-sided slope of `w` a condition demands to vanish.
#[derive(Clone, Copy)]
enum Probe {
    /// `w₊'(w⁻(α))`.
    RightAtLower(f64),
    /// `w₋'(w⁺(α))`.
    LeftAtUpper(f64),
    /// `w₋'(w⁻(1))`.
    LeftAtLowerCore,
    /// `w₊'(w⁺(1))`.
    RightAtUpperCore,
}

impl Probe {
    fn run(self, w: &FuzzyNum) -> (f64, f64, String) {
        let (level, x, side, name) = match self {
            Probe::RightAtLower(a) => (a, w.left().eval(a), Side::Right, format!("w'+(w-({a}))")),
            Probe::LeftAtUpper(a) => (a, w.right().eval(a), Side::Left, format!("w'-(w+({a}))")),
            Probe::LeftAtLowerCore => (1.0, w.left().eval(1.0), Side::Left, "w'-(w-(1))".into()),
            Probe::RightAtUpperCore => (1.0, w.right().eval(1.0), Side::Right, "w'+(w+(1))".into()),
        };
        let slope = one_sided(w, x, side).map_or(f64::NAN, |s| s.value);
        (level, slope, format!("{name} = {slope}"))
    }
}

fn zero(slope: f64) -> bool {
    slope.abs() <= tol::ZERO_SLOPE
}

/// Runs a list of zero-slope probes; vacuous when the list is empty.
fn all_zero(cond: Condition, w: &FuzzyNum, probes: &[Probe]) -> ConditionCheck {
    let mut last = None;
    for p in probes {
        let (level, slope, detail) = p.run(w);
        if !zero(slope) {
            return ConditionCheck {
                condition: cond,
                verdict: Verdict::Fail,
                level: Some(level),
                detail,
            };
        }
        last = Some(level);
    }
    ConditionCheck {
        condition: cond,
        verdict: if probes.is_empty() {
            Verdict::NotApplicable
        } else {
            Verdict::Pass
        },
        level: last,
        detail: String::new(),
    }
}

fn inner(u: &FuzzyNum, x: f64) -> bool {
    let s = u.support();
    x > s.lo && x < s.hi && !tol::same_x(x, s.lo) && !tol::same_x(x, s.hi)
}

fn singular_at(points: &[SingularPoint], x: f64) -> bool {
    points.iter().any(|p| tol::same_x(p.x, x))
}

/// Evaluates the smoother conditions for the pair `(u, w)` and picks the first theorem that applies.
pub fn check_smoother_conditions(u: &FuzzyNum, w: &FuzzyNum) -> ConditionReport {
    let points = classify_points(u);
    let (s, c) = (u.support(), u.core());
    let (a0, b0) = u.base_levels();
    let (wa0, wb0) = w.base_levels();
    let mut checks = Vec::with_capacity(9);

    let base_ok = tol::same_level(a0, wa0) && tol::same_level(b0, wb0);
    checks.push(ConditionCheck {
        condition: Condition::BaseLevels,
        verdict: if base_ok { Verdict::Pass } else { Verdict::Fail },
        level: Some(0.0),
        detail: if base_ok {
            String::new()
        } else {
            format!("base levels of u are ({a0}, {b0}), of w ({wa0}, {wb0})")
        },
    });

    let when = |cond: bool, p: Probe| if cond { vec![p] } else { vec![] };
    checks.push(all_zero(
        Condition::CoreLower,
        w,
        &when(inner(u, c.lo) && singular_at(&points, c.lo), Probe::LeftAtLowerCore),
    ));
    checks.push(all_zero(
        Condition::CoreUpper,
        w,
        &when(inner(u, c.hi) && singular_at(&points, c.hi), Probe::RightAtUpperCore),
    ));

    let xs_lo = u.left().eval_strong(a0);
    let xs_hi = u.right().eval_strong(b0);
    checks.push(all_zero(
        Condition::BaseLower,
        w,
        &when(inner(u, xs_lo) && singular_at(&points, xs_lo), Probe::RightAtLower(0.0)),
    ));
    checks.push(all_zero(
        Condition::BaseUpper,
        w,
        &when(inner(u, xs_hi) && singular_at(&points, xs_hi), Probe::LeftAtUpper(0.0)),
    ));

    let kinks = |b: Branch| points.iter().filter(move |p| p.branch == b).map(|p| p.level);
    let lower: Vec<Probe> = kinks(Branch::Left).map(Probe::RightAtLower).collect();
    let upper: Vec<Probe> = kinks(Branch::Right).map(Probe::LeftAtUpper).collect();
    checks.push(all_zero(Condition::KinkLower, w, &lower));
    checks.push(all_zero(Condition::KinkUpper, w, &upper));

    let on_lower = |x: f64| x > s.lo && (x < c.lo || tol::same_x(x, c.lo));
    let on_upper = |x: f64| x < s.hi && (x > c.hi || tol::same_x(x, c.hi));
    let lower: Vec<Probe> = points
        .iter()
        .filter(|p| on_lower(p.x) && p.left_limit < p.level - tol::LEVEL)
        .map(|p| Probe::RightAtLower(p.left_limit))
        .collect();
    let upper: Vec<Probe> = points
        .iter()
        .filter(|p| on_upper(p.x) && p.right_limit < p.level - tol::LEVEL)
        .map(|p| Probe::LeftAtUpper(p.right_limit))
        .collect();
    checks.push(all_zero(Condition::JumpLower, w, &lower));
    checks.push(all_zero(Condition::JumpUpper, w, &upper));

    let u_class = class_membership(u);
    let smoother_in_fd = !w.is_degenerate() && class_membership(w).in_fd;
    let holds = |cs: &[Condition]| {
        cs.iter()
            .all(|&k| checks.iter().any(|c| c.condition == k && c.verdict.holds()))
    };
    use Condition::*;
    let first = [BaseLevels, CoreLower, CoreUpper];
    let theorem = if !smoother_in_fd || !holds(&first) {
        None
    } else if u_class.in_fn && u_class.in_fc {
        Some(Theorem::SmoothBranches)
    } else if u_class.in_fc && holds(&[KinkLower, KinkUpper]) {
        Some(Theorem::Continuous)
    } else if holds(&[KinkLower, KinkUpper, JumpLower, JumpUpper]) {
        Some(Theorem::General)
    } else {
        None
    };

    ConditionReport {
        checks,
        u_class,
        smoother_in_fd,
        theorem,
    }
}
