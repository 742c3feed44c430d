//! Invariant checks shared by the property suites and the acceptance run.
//! Each returns `Err` with a description of the first violation.

use fuzzsmooth::approx::{approximate, Schedule};
use fuzzsmooth::calculus::{numeric_slope, one_sided, Side};
use fuzzsmooth::convolve::{convolve, predicted_derivative, scale, CutKind, Endpoint, EndpointSpec};
use fuzzsmooth::io::{Body, FuzzyDocument};
use fuzzsmooth::smoother::{check_smoother_conditions, synthesize, SynthesisOptions};
use fuzzsmooth::{class_membership, lipschitz_estimate, sup_metric, verify_smoothness, CutCurve, FuzzyNum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Levels on a uniform grid plus every breakpoint of both curves.
pub fn levels(u: &FuzzyNum, n: usize) -> Vec<f64> {
    let mut ls: Vec<f64> = if n == 0 {
        vec![0.0, 1.0]
    } else {
        (0..=n).map(|k| k as f64 / n as f64).collect()
    };
    ls.extend(u.left().breaks());
    ls.extend(u.right().breaks());
    ls.sort_by(f64::total_cmp);
    ls.dedup();
    ls
}

// cutcore

pub fn nested_cuts(u: &FuzzyNum) -> Check {
    let ls = levels(u, 40);
    let mut prev: Option<(f64, fuzzsmooth::Interval)> = None;
    // nesting is transitive, so consecutive levels suffice
    for &a in &ls {
        let ca = u.alpha_cut(a).unwrap();
        let sa = u.strong_cut(a).unwrap();
        ensure(ca.lo <= sa.lo && sa.hi <= ca.hi, || {
            format!("strong cut escapes the cut at {a}")
        })?;
        if let Some((b, cb)) = prev {
            ensure(cb.lo <= ca.lo && ca.hi <= cb.hi, || {
                format!("cut at {a} escapes the cut at {b}")
            })?;
        }
        prev = Some((a, ca));
    }
    Ok(())
}

/// A lower cut jumps at `α` exactly when `u⁻(α) < u_s⁻(α)`, and then `u = α` strictly between.
pub fn cut_continuity(u: &FuzzyNum) -> Check {
    let curves: [(&CutCurve, f64); 2] = [(u.left(), 1.0), (u.right(), -1.0)];
    for (curve, dir) in curves {
        let segs = curve.segments();
        for (i, w) in segs.windows(2).enumerate() {
            let a = w[0].hi();
            let from_above = w[1].eval(a);
            let (c, s) = (curve.eval(a), curve.eval_strong(a));
            let continuous = (curve.points()[i + 1] - from_above).abs() <= 1e-12 * (1.0 + from_above.abs());
            ensure(continuous == ((c - s).abs() <= 1e-12 * (1.0 + c.abs())), || {
                format!("continuity at level {a} disagrees with cut {c} vs strong cut {s}")
            })?;
            if dir * (s - c) > 1e-9 {
                let m = u.membership(0.5 * (c + s));
                ensure((m - a).abs() <= 1e-9, || {
                    format!("flat stretch at level {a} has membership {m}")
                })?;
            }
        }
    }
    Ok(())
}

/// Membership against `max{α_k : x ∈ [u]_{α_k}}` on a uniform level grid.
pub fn membership_vs_grid(u: &FuzzyNum, xs: &[f64], n: usize) -> Check {
    let cuts: Vec<(f64, f64, f64)> = (0..=n)
        .map(|k| {
            let a = k as f64 / n as f64;
            (a, u.left().eval(a), u.right().eval(a))
        })
        .collect();
    for &x in xs {
        let brute = cuts
            .iter()
            .filter(|(_, lo, hi)| *lo <= x && x <= *hi)
            .map(|(a, _, _)| *a)
            .fold(0.0, f64::max);
        let m = u.membership(x);
        ensure(m >= brute - 1e-12 && m <= brute + 1.0 / n as f64 + 1e-12, || {
            format!("membership at {x} is {m}, grid says {brute}")
        })?;
    }
    Ok(())
}

/// `u(u⁻(α)) = α` and `u(u⁺(α)) = α` above the base levels for continuous `u`.
///
/// Where a cut function is flat to machine precision the membership returns the
/// largest level with the same floating-point abscissa, which is also accepted.
pub fn inverse_identity(u: &FuzzyNum) -> Check {
    if !class_membership(u).in_fc {
        return Ok(());
    }
    let (a0, b0) = u.base_levels();
    for a in levels(u, 50) {
        for (curve, base, name) in [(u.left(), a0, "u-"), (u.right(), b0, "u+")] {
            if a < base {
                continue;
            }
            let x = curve.eval(a);
            let m = u.membership(x);
            ensure((m - a).abs() <= 1e-9 || curve.eval(m) == x, || {
                format!("u({name}({a})) = {m}")
            })?;
        }
    }
    Ok(())
}

/// A membership document reproduces its piece values after conversion to cut form.
pub fn pieces_round_trip(doc: &FuzzyDocument, samples: usize, seed: u64) -> Check {
    let Body::Membership(pieces) = &doc.body else {
        return Ok(());
    };
    let u = doc.to_fuzzy().map_err(|e| e.to_string())?;
    let (lo, hi) = (pieces[0].lo, pieces[pieces.len() - 1].hi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = rng.random_range(lo..=hi);
        let Some(p) = pieces
            .iter()
            .find(|p| (p.lo < x || (p.lo_closed && p.lo == x)) && (x < p.hi || (p.hi_closed && p.hi == x)))
        else {
            continue;
        };
        let (want, got) = (p.expr.eval(x), u.membership(x));
        ensure((want - got).abs() <= 1e-9, || {
            format!("{}: at {x} piece gives {want}, cuts give {got}", doc.name)
        })?;
    }
    Ok(())
}

// calculus

pub fn slope_routes(u: &FuzzyNum, samples: usize, seed: u64) -> Check {
    let s = u.support();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = rng.random_range(s.lo..=s.hi);
        for side in [Side::Left, Side::Right] {
            let sym = one_sided(u, x, side).unwrap().value;
            if !sym.is_finite() {
                continue;
            }
            let num = numeric_slope(u, x, side);
            ensure((sym - num).abs() <= 1e-6 * (1.0 + sym.abs()), || {
                format!("{} slope at {x}: symbolic {sym}, numeric {num}", side.label())
            })?;
        }
    }
    Ok(())
}

pub fn metric_axioms(u: &FuzzyNum, v: &FuzzyNum, w: &FuzzyNum) -> Check {
    let (uv, vu) = (sup_metric(u, v), sup_metric(v, u));
    ensure(uv.value == vu.value, || {
        format!("asymmetric: {} vs {}", uv.value, vu.value)
    })?;
    let (vw, uw) = (sup_metric(v, w), sup_metric(u, w));
    let slack = 2.0 * (uv.certified_gap + vw.certified_gap + uw.certified_gap) + 1e-12;
    ensure(uw.value <= uv.value + vw.value + slack, || {
        format!("triangle inequality: {} > {} + {}", uw.value, uv.value, vw.value)
    })?;
    ensure(sup_metric(u, u).value == 0.0, || "d(u, u) is not zero".into())
}

// convolve

/// Cuts and strong cuts of `u∇v` are the sums of those of `u` and `v`, bit for bit.
pub fn cut_additivity(u: &FuzzyNum, v: &FuzzyNum) -> Check {
    let c = convolve(u, v);
    let mut ls = levels(u, 32);
    ls.extend(levels(v, 0));
    for a in ls {
        let (cu, cv, cc) = (
            u.alpha_cut(a).unwrap(),
            v.alpha_cut(a).unwrap(),
            c.alpha_cut(a).unwrap(),
        );
        ensure(cc.lo == cu.lo + cv.lo && cc.hi == cu.hi + cv.hi, || {
            format!("cut at {a} is not additive")
        })?;
        let (su, sv, sc) = (
            u.strong_cut(a).unwrap(),
            v.strong_cut(a).unwrap(),
            c.strong_cut(a).unwrap(),
        );
        ensure(sc.lo == su.lo + sv.lo && sc.hi == su.hi + sv.hi, || {
            format!("strong cut at {a} is not additive")
        })?;
    }
    Ok(())
}

pub fn commutative_associative(u: &FuzzyNum, v: &FuzzyNum, w: &FuzzyNum) -> Check {
    let (uv, vu) = (convolve(u, v), convolve(v, u));
    let (l, r) = (convolve(&uv, w), convolve(u, &convolve(v, w)));
    for a in levels(&l, 32) {
        let (p, q) = (uv.alpha_cut(a).unwrap(), vu.alpha_cut(a).unwrap());
        ensure(p == q, || format!("u∇v and v∇u differ at level {a}"))?;
        let (p, q) = (l.alpha_cut(a).unwrap(), r.alpha_cut(a).unwrap());
        ensure(close(p.lo, q.lo, 1e-15) && close(p.hi, q.hi, 1e-15), || {
            format!("associativity fails at level {a}: {p:?} vs {q:?}")
        })?;
    }
    Ok(())
}

/// Every endpoint spec at the given levels for which a rule applies.
pub fn predictions(u: &FuzzyNum, v: &FuzzyNum, lv: &[f64]) -> Vec<(EndpointSpec, Side, f64, f64)> {
    let c = convolve(u, v);
    let mut out = Vec::new();
    for &a in lv {
        for endpoint in [Endpoint::Lower, Endpoint::Upper] {
            for kind in [CutKind::Cut, CutKind::Strong] {
                let spec = EndpointSpec::new(endpoint, kind, a);
                for side in [Side::Left, Side::Right] {
                    if let Ok(p) = predicted_derivative(u, v, spec, side) {
                        if let Some(s) = p.slope() {
                            let x = spec.locate(&c).unwrap();
                            let actual = one_sided(&c, x, side).unwrap().value;
                            out.push((spec, side, s, actual));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn prediction_soundness(u: &FuzzyNum, v: &FuzzyNum) -> Check {
    let mut lv = levels(u, 16);
    lv.extend(levels(v, 0));
    for (spec, side, predicted, actual) in predictions(u, v, &lv) {
        let ok = if predicted.is_infinite() || actual.is_infinite() {
            predicted == actual
        } else {
            (predicted - actual).abs() <= 1e-6 * (1.0 + actual.abs())
        };
        ensure(ok, || {
            format!("{spec:?} {}: predicted {predicted}, measured {actual}", side.label())
        })?;
    }
    Ok(())
}

/// `u ∈ F_C` with base levels not above those of `v` gives `u∇v ∈ F_C`.
pub fn continuity_preserved(u: &FuzzyNum, v: &FuzzyNum) -> Check {
    let (ua, ub) = u.base_levels();
    let (va, vb) = v.base_levels();
    if !class_membership(u).in_fc || ua > va || ub > vb {
        return Ok(());
    }
    ensure(class_membership(&convolve(u, v)).in_fc, || "u∇v left F_C".into())
}

// smoother

/// Accepted pairs give a differentiable convolution.
pub fn checker_sound(u: &FuzzyNum, w: &FuzzyNum) -> Check {
    let report = check_smoother_conditions(u, w);
    if report.theorem.is_none() {
        return Ok(());
    }
    let v = verify_smoothness(&convolve(u, w));
    ensure(v.in_fd, || {
        let bad: Vec<f64> = v.failures().map(|p| p.x).collect();
        format!("accepted by {:?} but u∇w is singular at {bad:?}", report.theorem)
    })
}

pub fn synthesis_total(u: &FuzzyNum) -> Check {
    let w = synthesize(u, 1.0, SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let report = check_smoother_conditions(u, &w);
    ensure(report.theorem.is_some(), || {
        format!("synthesized smoother refused: {}", report.refusal())
    })
}

pub fn scaling_invariant(u: &FuzzyNum, zeta: &FuzzyNum) -> Check {
    let t = check_smoother_conditions(u, zeta).theorem;
    for p in [0.1, 0.5, 2.0] {
        let tp = check_smoother_conditions(u, &scale(p, zeta)).theorem;
        ensure(t == tp, || format!("verdict {t:?} becomes {tp:?} at scale {p}"))?;
    }
    Ok(())
}

/// The synthesized smoother is flat to the right of its support start and to the left of its support end.
pub fn synthesized_base_flat(u: &FuzzyNum) -> Check {
    let w = synthesize(u, 1.0, SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let s = w.support();
    if w.is_degenerate() {
        return Ok(());
    }
    let r = one_sided(&w, s.lo, Side::Right).unwrap().value;
    let l = one_sided(&w, s.hi, Side::Left).unwrap().value;
    ensure(r.abs() <= 1e-9 && l.abs() <= 1e-9, || {
        format!("slopes at the support ends are {r} and {l}")
    })
}

// approx

pub fn approximation_invariants(u: &FuzzyNum, zeta: &FuzzyNum, schedule: &Schedule) -> Check {
    let approx = approximate(u, zeta, schedule).map_err(|e| e.to_string())?;
    ensure(approx.report.monotone, || {
        "error is not monotone along the schedule".into()
    })?;
    ensure(approx.report.all_satisfied(), || {
        format!("bound violated: {:?}", approx.report.rows)
    })?;
    for (row, step) in approx.report.rows.iter().zip(&approx.steps) {
        let (cu, cw, cs) = (u.core(), scale(row.p, zeta).core(), step.core());
        ensure(cs.lo == cu.lo + cw.lo && cs.hi == cu.hi + cw.hi, || {
            format!("core algebra fails at p = {}", row.p)
        })?;
        let flags = class_membership(step);
        ensure(flags.in_fd && flags.in_fc, || {
            format!("step p = {} is not in F_D", row.p)
        })?;
        let (lo, hi) = grid_metric(u, step, 4096);
        ensure(
            lo <= row.measured + row.certified_gap + 1e-12 && row.measured <= hi + 1e-12,
            || {
                format!(
                    "p = {}: measured {} outside grid bracket [{lo}, {hi}]",
                    row.p, row.measured
                )
            },
        )?;
    }
    Ok(())
}

/// Bracket for the supremum distance from a uniform level grid: the largest
/// sampled gap, and that plus the largest per-cell variation of the cuts.
pub fn grid_metric(u: &FuzzyNum, v: &FuzzyNum, n: usize) -> (f64, f64) {
    let at = |k: usize| {
        let a = k as f64 / n as f64;
        [u.left().eval(a), v.left().eval(a), u.right().eval(a), v.right().eval(a)]
    };
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut prev = at(0);
    for k in 0..=n {
        let cur = at(k);
        let d = (cur[0] - cur[1]).abs().max((cur[2] - cur[3]).abs());
        lo = lo.max(d);
        if k > 0 {
            let (a, b) = (prev, cur);
            let lower = (a[0] - b[1]).abs().max((b[0] - a[1]).abs());
            let upper = (a[2] - b[3]).abs().max((b[2] - a[3]).abs());
            hi = hi.max(lower.max(upper));
        }
        prev = cur;
    }
    (lo, hi.max(lo))
}

pub fn lipschitz_preserved(u: &FuzzyNum, w: &FuzzyNum) -> Check {
    let k_w = lipschitz_estimate(w);
    if !k_w.is_finite() || w.base_levels() != (0.0, 0.0) {
        return Ok(());
    }
    let k = lipschitz_estimate(&convolve(u, w));
    ensure(k <= k_w + 1e-6, || format!("K(u∇w) = {k} exceeds K(w) = {k_w}"))
}
