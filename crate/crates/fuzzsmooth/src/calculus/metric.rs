use std::collections::BinaryHeap;

use crate::cutcore::{CutCurve, FuzzyNum, Segment};
use crate::expr::{self, Expr};

/// Supremum distance between two fuzzy numbers.
///
/// `value` is attained at `level` on one of the cut functions, and the true
/// distance lies in `[value, value + certified_gap]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult {
    pub value: f64,
    pub certified_gap: f64,
    pub level: f64,
}

const GAP_TARGET: f64 = 1e-13;
const MAX_INTERVALS: usize = 200_000;

#[derive(PartialEq)]
struct Cell {
    bound: f64,
    a: f64,
    b: f64,
    fa: [f64; 2],
    fb: [f64; 2],
    pair: usize,
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

/// Upper bound of `|f - g|` on a cell where both are monotone: `fx = [f(x), g(x)]`.
fn cell_bound(fa: [f64; 2], fb: [f64; 2]) -> f64 {
    let (f_lo, f_hi) = (fa[0].min(fb[0]), fa[0].max(fb[0]));
    let (g_lo, g_hi) = (fa[1].min(fb[1]), fa[1].max(fb[1]));
    (f_hi - g_lo).abs().max((f_lo - g_hi).abs())
}

/// `f - g` in closed form. When one form is the other plus `h`, as convolution
/// produces, this is `±h`, so the shared part is not charged twice.
fn difference(f: &Expr, g: &Expr) -> (Expr, bool) {
    if f == g {
        return (Expr::Const(0.0), true);
    }
    let split = |sum: &Expr, part: &Expr| match sum {
        Expr::Add(a, b) if **a == *part => Some((**b).clone()),
        Expr::Add(a, b) if **b == *part => Some((**a).clone()),
        _ => None,
    };
    if let Some(h) = split(g, f) {
        (expr::scale(-1.0, h), true)
    } else if let Some(h) = split(f, g) {
        (h, true)
    } else {
        (expr::sub(f.clone(), g.clone()), false)
    }
}

/// Closed-form data for one pair: the difference `d = f - g`, whether bounding
/// it directly is tighter than bounding `f` and `g` apart, and `d'`.
struct PairForm {
    d: Expr,
    cancels: bool,
    slope: Expr,
}

impl PairForm {
    fn new(f: &Expr, g: &Expr) -> Self {
        let (d, cancels) = difference(f, g);
        let slope = d.derivative();
        PairForm { d, cancels, slope }
    }

    /// Upper bound of `|f - g|` on `[a, b]`, given the endpoint values.
    fn bound(&self, a: f64, b: f64, fa: [f64; 2], fb: [f64; 2]) -> f64 {
        let mut best = cell_bound(fa, fb);
        let scale = fa.iter().chain(&fb).fold(1.0f64, |m, v| m.max(v.abs()));
        let pad = 8.0 * f64::EPSILON * scale;
        if self.cancels {
            if let Some((lo, hi)) = self.d.range(a, b) {
                best = best.min(lo.abs().max(hi.abs()) + pad);
            }
        }
        if let Some((dl, dh)) = self.slope.range(a, b) {
            if dl.is_finite() && dh.is_finite() {
                let (da, db) = (fa[0] - fa[1], fb[0] - fb[1]);
                let top = crest(a, b, da, db, dl, dh).max(crest(a, b, -da, -db, -dh, -dl));
                best = best.min(top + pad);
            }
        }
        best
    }
}

/// Largest value on `[a, b]` of a function with end values `da`, `db` and slope in `[dl, dh]`.
fn crest(a: f64, b: f64, da: f64, db: f64, dl: f64, dh: f64) -> f64 {
    if dh <= 0.0 {
        return da;
    }
    if dl >= 0.0 {
        return db;
    }
    // the two lines d(a) + dh (t - a) and d(b) - dl (b - t) cross inside the cell
    let t = ((db - da + dh * a - dl * b) / (dh - dl)).clamp(a, b);
    (da + dh * (t - a)).max(db - dl * (b - t)).max(da.max(db))
}

/// Pairs of closed forms over the merged partition of two curves.
fn merged<'a>(u: &'a CutCurve, v: &'a CutCurve) -> Vec<(f64, f64, &'a Segment, &'a Segment)> {
    let mut breaks: Vec<f64> = u.breaks().chain(v.breaks()).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (
                w[0],
                w[1],
                &u.segments()[u.index_below(mid)],
                &v.segments()[v.index_below(mid)],
            )
        })
        .collect()
}

/// Branch-and-bound search for `sup_α max(|u⁻ - v⁻|, |u⁺ - v⁺|)`.
///
/// Cells are split until no unexplored cell can beat the best value by more
/// than the gap target. Monotonicity of the cut functions makes each cell
/// bound rigorous.
pub fn sup_metric(u: &FuzzyNum, v: &FuzzyNum) -> MetricResult {
    let mut pairs = merged(u.left(), v.left());
    pairs.extend(merged(u.right(), v.right()));
    let eval = |pair: usize, a: f64| [pairs[pair].2.eval(a), pairs[pair].3.eval(a)];
    let forms: Vec<PairForm> = pairs.iter().map(|p| PairForm::new(p.2.expr(), p.3.expr())).collect();
    let bound = |pair: usize, a: f64, b: f64, fa: [f64; 2], fb: [f64; 2]| forms[pair].bound(a, b, fa, fb);

    let mut best = 0.0f64;
    let mut best_level = 0.0;
    let mut heap = BinaryHeap::new();
    let consider = |val: [f64; 2], level: f64, best: &mut f64, best_level: &mut f64| {
        let d = (val[0] - val[1]).abs();
        if d > *best {
            *best = d;
            *best_level = level;
        }
    };
    for (i, &(a, b, _, _)) in pairs.iter().enumerate() {
        let (fa, fb) = (eval(i, a), eval(i, b));
        consider(fa, a, &mut best, &mut best_level);
        consider(fb, b, &mut best, &mut best_level);
        heap.push(Cell {
            bound: bound(i, a, b, fa, fb),
            a,
            b,
            fa,
            fb,
            pair: i,
        });
    }

    let mut used = heap.len();
    while let Some(cell) = heap.peek() {
        if cell.bound <= best + GAP_TARGET * (1.0 + best) || used >= MAX_INTERVALS {
            break;
        }
        let cell = heap.pop().expect("peeked");
        let mid = 0.5 * (cell.a + cell.b);
        if mid <= cell.a || mid >= cell.b {
            continue;
        }
        let fm = eval(cell.pair, mid);
        consider(fm, mid, &mut best, &mut best_level);
        for (a, b, fa, fb) in [(cell.a, mid, cell.fa, fm), (mid, cell.b, fm, cell.fb)] {
            heap.push(Cell {
                bound: bound(cell.pair, a, b, fa, fb),
                a,
                b,
                fa,
                fb,
                pair: cell.pair,
            });
        }
        used += 2;
    }
    let top = heap.peek().map_or(best, |c| c.bound.max(best));
    MetricResult {
        value: best,
        certified_gap: top - best,
        level: best_level,
    }
}
