//! Approximation sequences `u∇(p·ζ)` with certified error bounds.

mod verify;

use crate::calculus::{lipschitz_estimate, sup_metric};
use crate::convolve::{convolve, scale};
use crate::cutcore::FuzzyNum;
use crate::error::{FuzzyError, Result};
use crate::smoother::{check_smoother_conditions, ConditionReport, Theorem};

pub use verify::{verify_smoothness, DifferentiabilityReport, SmoothnessProbe, GRID_PROBES};

/// Default number of steps in `p_n = 1/n`.
pub const DEFAULT_STEPS: usize = 20;

/// Rounding slack allowed on top of the certified gap when comparing distances.
fn slack(scale: f64) -> f64 {
    16.0 * f64::EPSILON * (1.0 + scale.abs())
}

/// A positive, strictly decreasing list of scales.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule(Vec<f64>);

impl Schedule {
    pub fn new(ps: Vec<f64>) -> Result<Schedule> {
        if ps.is_empty() {
            return Err(FuzzyError::Precondition("empty schedule".into()));
        }
        if let Some(p) = ps.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return Err(FuzzyError::Precondition(format!("schedule entry {p} is not positive")));
        }
        if let Some(w) = ps.windows(2).find(|w| w[1] >= w[0]) {
            return Err(FuzzyError::Precondition(format!(
                "schedule must decrease strictly, but {} is followed by {}",
                w[0], w[1]
            )));
        }
        Ok(Schedule(ps))
    }

    /// `1, 1/2, …, 1/n`.
    pub fn harmonic(n: usize) -> Result<Schedule> {
        Schedule::new((1..=n).map(|k| 1.0 / k as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub p: f64,
    pub measured: f64,
    pub certified_gap: f64,
    /// `p·max(|ζ⁺(0)|, |ζ⁻(0)|)`.
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
    /// The measured distance never grows along the schedule.
    pub monotone: bool,
}

impl ErrorReport {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }
}

#[derive(Debug, Clone)]
pub struct Approximation {
    pub schedule: Schedule,
    pub steps: Vec<FuzzyNum>,
    pub report: ErrorReport,
    pub smoothness: Vec<DifferentiabilityReport>,
    pub conditions: ConditionReport,
    pub theorem: Theorem,
}

impl Approximation {
    /// Every step passed the differentiability verifier.
    pub fn all_smooth(&self) -> bool {
        self.smoothness.iter().all(|r| r.in_fd)
    }
}

/// `p·max(|ζ⁺(0)|, |ζ⁻(0)|)`.
pub fn error_bound(zeta: &FuzzyNum, p: f64) -> f64 {
    let s = zeta.support();
    p * s.lo.abs().max(s.hi.abs())
}

/// Builds `u∇(p_n·ζ)` for every scale of the schedule.
///
/// Refuses when no smoothing theorem covers `(u, ζ)`; a failing smoother is
/// never repaired here.
pub fn approximate(u: &FuzzyNum, zeta: &FuzzyNum, schedule: &Schedule) -> Result<Approximation> {
    let conditions = check_smoother_conditions(u, zeta);
    let Some(theorem) = conditions.theorem else {
        return Err(FuzzyError::Refused(conditions.refusal()));
    };
    let mut steps = Vec::with_capacity(schedule.values().len());
    let mut rows = Vec::with_capacity(steps.capacity());
    let mut smoothness = Vec::with_capacity(steps.capacity());
    for &p in schedule.values() {
        let step = convolve(u, &scale(p, zeta));
        let m = sup_metric(u, &step);
        let bound = error_bound(zeta, p);
        rows.push(ErrorRow {
            p,
            measured: m.value,
            certified_gap: m.certified_gap,
            bound,
            satisfied: m.value <= bound + m.certified_gap + slack(bound),
        });
        smoothness.push(verify_smoothness(&step));
        steps.push(step);
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].measured <= w[0].measured + w[0].certified_gap + w[1].certified_gap + slack(w[0].measured));
    Ok(Approximation {
        schedule: schedule.clone(),
        steps,
        report: ErrorReport { rows, monotone },
        smoothness,
        conditions,
        theorem,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreservationRow {
    pub p: f64,
    /// `step⁻(1) = u⁻(1)` and `step⁺(1) = u⁺(1)`, compared exactly.
    pub core_preserved: bool,
    pub lipschitz_step: f64,
    pub lipschitz_smoother: f64,
    /// `None` when the scaled smoother is not Lipschitz on the real line.
    pub lipschitz_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub rows: Vec<PreservationRow>,
}

impl PreservationReport {
    pub fn core_preserved(&self) -> bool {
        self.rows.iter().all(|r| r.core_preserved)
    }

    pub fn lipschitz_preserved(&self) -> bool {
        self.rows.iter().all(|r| r.lipschitz_ok != Some(false))
    }
}

/// Absolute slack on Lipschitz comparisons.
pub const LIPSCHITZ_TOL: f64 = 1e-6;

/// Core and Lipschitz preservation along an approximation sequence.
///
/// The Lipschitz comparison only applies when the scaled smoother starts at
/// level 0 on both sides and has a finite constant; otherwise it is `None`.
pub fn preservation_report(u: &FuzzyNum, zeta: &FuzzyNum, approx: &Approximation) -> PreservationReport {
    let rows = approx
        .schedule
        .values()
        .iter()
        .zip(&approx.steps)
        .map(|(&p, step)| {
            let (c, sc) = (u.core(), step.core());
            let w = scale(p, zeta);
            let k_w = lipschitz_estimate(&w);
            let k_step = lipschitz_estimate(step);
            let qualifies = k_w.is_finite() && w.base_levels() == (0.0, 0.0);
            PreservationRow {
                p,
                core_preserved: c.lo == sc.lo && c.hi == sc.hi,
                lipschitz_step: k_step,
                lipschitz_smoother: k_w,
                lipschitz_ok: qualifies.then_some(k_step <= k_w + LIPSCHITZ_TOL),
            }
        })
        .collect();
    PreservationReport { rows }
}
