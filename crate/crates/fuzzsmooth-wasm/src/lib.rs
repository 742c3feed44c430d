//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string, so
//! the page needs no generated type glue. Failures come back as
//! `{"error": {"kind": ..., "message": ...}}`.

use fuzzsmooth::approx::{approximate, Schedule};
use fuzzsmooth::calculus::{class_membership, classify_points, sup_metric};
use fuzzsmooth::io::{membership_polyline, FuzzyDocument};
use fuzzsmooth::smoother::{check_smoother_conditions, parabola, synthesize, SynthesisOptions};
use fuzzsmooth::{convolve, fixtures, scale, FuzzyError, FuzzyNum, SingularKind};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const PLOT_POINTS: usize = 512;

fn error(e: &FuzzyError) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
}

fn load(doc: &str) -> Result<FuzzyNum, FuzzyError> {
    FuzzyDocument::parse(doc)?.to_fuzzy()
}

/// Membership polyline over `[lo, hi]` as `[[x, mu], ...]`.
fn curve(u: &FuzzyNum, lo: f64, hi: f64) -> Value {
    let pts: Vec<[f64; 2]> = membership_polyline(u, lo, hi, PLOT_POINTS)
        .into_iter()
        .map(|(x, m)| [x, m])
        .collect();
    json!(pts)
}

/// A window slightly wider than the union of the supports.
fn window(nums: &[&FuzzyNum]) -> (f64, f64) {
    let lo = nums.iter().map(|u| u.support().lo).fold(f64::INFINITY, f64::min);
    let hi = nums.iter().map(|u| u.support().hi).fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.05 * (hi - lo).max(1e-3);
    (lo - pad, hi + pad)
}

pub fn fixture_names_json() -> Value {
    json!(fixtures::names().collect::<Vec<_>>())
}

pub fn fixture_text_json(name: &str) -> Value {
    match fixtures::text(name) {
        Some(t) => json!({ "text": t }),
        None => error(&FuzzyError::Precondition(format!("no example named {name:?}"))),
    }
}

/// Singular points and classes of the document.
pub fn classify_json(doc: &str) -> Value {
    let u = match load(doc) {
        Ok(u) => u,
        Err(e) => return error(&e),
    };
    let flags = class_membership(&u);
    let points: Vec<Value> = classify_points(&u)
        .iter()
        .map(|p| {
            json!({
                "x": p.x,
                "kind": match p.kind { SingularKind::Kink => "kink", SingularKind::Jump => "jump" },
                "branch": p.branch.label(),
                "level": p.level,
                "left_slope": slope(p.left_slope),
                "right_slope": slope(p.right_slope),
            })
        })
        .collect();
    let (lo, hi) = window(&[&u]);
    json!({
        "classes": { "F_T": flags.in_ft, "F_N": flags.in_fn, "F_C": flags.in_fc, "F_D": flags.in_fd },
        "points": points,
        "curve": curve(&u, lo, hi),
    })
}

/// JSON has no infinities, so those travel as strings.
fn slope(s: f64) -> Value {
    if s.is_finite() {
        json!(s)
    } else if s > 0.0 {
        json!("+inf")
    } else if s < 0.0 {
        json!("-inf")
    } else {
        Value::Null
    }
}

fn smoother_for(u: &FuzzyNum, kind: &str) -> Result<FuzzyNum, FuzzyError> {
    match kind {
        "synthesize" => synthesize(u, 1.0, SynthesisOptions::default()),
        "synthesize-core" => synthesize(
            u,
            1.0,
            SynthesisOptions {
                preserve_core: true,
                lipschitz_cap: None,
            },
        ),
        "parabola" => parabola(1.0),
        other => Err(FuzzyError::Precondition(format!("unknown smoother {other:?}"))),
    }
}

/// Checks the smoother `kind` scaled by `p` against the document and convolves.
pub fn smooth_json(doc: &str, kind: &str, p: f64) -> Value {
    let run = || -> Result<Value, FuzzyError> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(FuzzyError::Precondition(format!("p = {p} must be positive")));
        }
        let u = load(doc)?;
        let w = scale(p, &smoother_for(&u, kind)?);
        let report = check_smoother_conditions(&u, &w);
        let conditions: Vec<String> = report.checks.iter().map(ToString::to_string).collect();
        let sum = convolve(&u, &w);
        let flags = class_membership(&sum);
        let d = sup_metric(&u, &sum);
        let (lo, hi) = window(&[&u, &w, &sum]);
        Ok(json!({
            "theorem": report.theorem.map(|t| t.label()),
            "refusal": report.theorem.is_none().then(|| report.refusal()),
            "conditions": conditions,
            "result_smooth": flags.in_fd,
            "distance": d.value,
            "certified_gap": d.certified_gap,
            "u": curve(&u, lo, hi),
            "w": curve(&w, lo, hi),
            "sum": curve(&sum, lo, hi),
        }))
    };
    run().unwrap_or_else(|e| error(&e))
}

/// Error report along `p_n = 1/n` for `n = 1..=steps` with the smoother `kind`.
pub fn convergence_json(doc: &str, kind: &str, steps: usize) -> Value {
    let run = || -> Result<Value, FuzzyError> {
        let u = load(doc)?;
        let zeta = smoother_for(&u, kind)?;
        let schedule = Schedule::harmonic(steps.clamp(1, 50))?;
        let a = approximate(&u, &zeta, &schedule)?;
        let rows: Vec<Value> = a
            .report
            .rows
            .iter()
            .zip(&a.smoothness)
            .map(|(r, s)| {
                json!({
                    "p": r.p,
                    "measured": r.measured,
                    "certified_gap": r.certified_gap,
                    "bound": r.bound,
                    "satisfied": r.satisfied,
                    "smooth": s.in_fd,
                })
            })
            .collect();
        Ok(json!({ "theorem": a.theorem.label(), "monotone": a.report.monotone, "rows": rows }))
    };
    run().unwrap_or_else(|e| error(&e))
}

#[wasm_bindgen]
pub fn fixture_names() -> String {
    fixture_names_json().to_string()
}

#[wasm_bindgen]
pub fn fixture_text(name: &str) -> String {
    fixture_text_json(name).to_string()
}

#[wasm_bindgen]
pub fn classify(doc: &str) -> String {
    classify_json(doc).to_string()
}

#[wasm_bindgen]
pub fn smooth(doc: &str, kind: &str, p: f64) -> String {
    smooth_json(doc, kind, p).to_string()
}

#[wasm_bindgen]
pub fn convergence(doc: &str, kind: &str, steps: usize) -> String {
    convergence_json(doc, kind, steps).to_string()
}
