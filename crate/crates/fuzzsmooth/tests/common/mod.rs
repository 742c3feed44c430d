//! Shared helpers: bundled fixtures, random fuzzy numbers and a brute-force sup-min oracle.
#![allow(dead_code)]

pub mod invariants;

use std::f64::consts::FRAC_PI_2;

use fuzzsmooth::expr::{self, Expr, Ratio};
use fuzzsmooth::{classify_points, fixtures, CutCurve, FuzzyNum, Segment, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> FuzzyNum {
    fixtures::load(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// The worked examples whose membership functions are not all smooth.
pub const REFERENCE_INPUTS: [&str; 5] = ["triangle", "plateaus", "spike", "kinked", "jump"];

/// Normalised profile on `[0, 1]` with `g(0) = 0`, `g(1) = 1`.
fn profile(kind: u8, t: Expr) -> Expr {
    match kind {
        0 => t,
        1 => expr::pow(t, Ratio::integer(2)),
        2 => expr::sqrt(t),
        _ => expr::sin(expr::scale(FRAC_PI_2, t)),
    }
}

/// Random layout of one branch: level knots, then per step a gap before it, its rise and its profile.
struct Plan {
    knots: Vec<f64>,
    steps: Vec<(f64, f64, u8)>,
}

impl Plan {
    fn random(rng: &mut ChaCha8Rng) -> Plan {
        let n = rng.random_range(1..=3usize);
        let mut knots: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.1..0.9)).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        knots.insert(0, 0.0);
        knots.push(1.0);
        let steps = (0..knots.len() - 1)
            .map(|i| {
                let gap = if i > 0 && rng.random_bool(0.2) {
                    rng.random_range(0.1..0.5)
                } else {
                    0.0
                };
                let rise = if rng.random_bool(0.1) {
                    0.0
                } else {
                    rng.random_range(0.2..1.0)
                };
                (gap, rise, rng.random_range(0..4u8))
            })
            .collect();
        Plan { knots, steps }
    }

    fn length(&self) -> f64 {
        self.steps.iter().map(|(g, r, _)| g + r).sum()
    }

    /// `dir = 1` builds a lower cut starting at `start`, `-1` an upper one.
    fn build(&self, start: f64, dir: f64) -> CutCurve {
        let mut pos = start;
        let mut segs = Vec::new();
        for (w, &(gap, rise, kind)) in self.knots.windows(2).zip(&self.steps) {
            let (lo, hi) = (w[0], w[1]);
            pos += dir * gap;
            if rise == 0.0 {
                segs.push(Segment::constant(lo, hi, pos));
                continue;
            }
            let t = expr::scale(1.0 / (hi - lo), expr::sub(Expr::Var, Expr::Const(lo)));
            let e = expr::add(Expr::Const(pos), expr::scale(dir * rise, profile(kind, t)));
            let shape = if dir > 0.0 {
                Shape::Increasing
            } else {
                Shape::Decreasing
            };
            segs.push(Segment::new(lo, hi, e, shape));
            pos += dir * rise;
        }
        CutCurve::new(segs).expect("contiguous knots")
    }
}

fn random_one(rng: &mut ChaCha8Rng) -> FuzzyNum {
    let centre = rng.random_range(-2.0..2.0);
    let (lp, rp) = (Plan::random(rng), Plan::random(rng));
    let left = lp.build(centre - lp.length(), 1.0);
    let core_hi = left.eval(1.0)
        + if rng.random_bool(0.5) {
            rng.random_range(0.0..1.0)
        } else {
            0.0
        };
    let right = rp.build(core_hi + rp.length(), -1.0);
    FuzzyNum::checked(left, right).expect("random construction is a fuzzy number")
}

/// `n` random piecewise fuzzy numbers with at most six singular points each.
pub fn random_fuzzy(seed: u64, n: usize) -> Vec<FuzzyNum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u = random_one(&mut rng);
        let c = u.core();
        // Cores meant to be a point can come out an ulp wide; skip those.
        let w = c.hi - c.lo;
        if (w == 0.0 || w > 1e-9) && classify_points(&u).len() <= 6 {
            out.push(u);
        }
    }
    out
}

/// `sup` of a quasi-concave upper semicontinuous membership over `[a, b]`.
fn sup_on(u: &FuzzyNum, a: f64, b: f64, ua: f64, ub: f64) -> f64 {
    let c = u.core();
    if a <= c.hi && b >= c.lo {
        1.0
    } else {
        ua.max(ub)
    }
}

/// Brute-force sup-min `(u∇v)(x) = sup_y min(u(y), v(x - y))` on a lattice.
///
/// `y` runs over `n` equally spaced points of the support of `u` with step
/// `h`, and the abscissae `x_j` share that step, so `x_j - y_k` falls on a fixed
/// lattice where `v` is tabulated once.
pub struct SupMinOracle {
    x0: f64,
    h: f64,
    n: usize,
    u: Vec<f64>,
    u_cell: Vec<f64>,
    /// `v` at `t_m = x0 - y_0 + (m - offset) h`.
    v: Vec<f64>,
    v_cell: Vec<f64>,
    offset: usize,
    count: usize,
}

impl SupMinOracle {
    pub fn new(u: &FuzzyNum, v: &FuzzyNum, n: usize) -> SupMinOracle {
        let (su, sv) = (u.support(), v.support());
        let h = su.width().max(1e-9) / (n - 1) as f64;
        let pad = 0.05 * (su.width() + sv.width()) + h;
        let x0 = su.lo + sv.lo - pad;
        let count = ((su.width() + sv.width() + 2.0 * pad) / h).ceil() as usize + 1;
        let ys: Vec<f64> = (0..n).map(|k| su.lo + h * k as f64).collect();
        let uv: Vec<f64> = ys.iter().map(|&y| u.membership(y)).collect();
        let u_cell = (0..n - 1)
            .map(|k| sup_on(u, ys[k], ys[k + 1], uv[k], uv[k + 1]))
            .collect();
        let offset = n;
        let t = |m: usize| x0 - su.lo + h * (m as f64 - offset as f64);
        let total = count + n + 1;
        let vv: Vec<f64> = (0..total).map(|m| v.membership(t(m))).collect();
        let v_cell = (0..total - 1)
            .map(|m| sup_on(v, t(m), t(m + 1), vv[m], vv[m + 1]))
            .collect();
        SupMinOracle {
            x0,
            h,
            n,
            u: uv,
            u_cell,
            v: vv,
            v_cell,
            offset,
            count,
        }
    }

    /// Number of lattice abscissae covering the padded support of `u∇v`.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + self.h * j as f64
    }

    /// Lower bound attained on the lattice, and an upper bound over every grid cell.
    pub fn bracket(&self, j: usize) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for k in 0..self.n {
            let m = j + self.offset - k;
            lo = lo.max(self.u[k].min(self.v[m]));
            if k + 1 < self.n {
                // y in [y_k, y_{k+1}] puts x - y in [t_{m-1}, t_m].
                hi = hi.max(self.u_cell[k].min(self.v_cell[m - 1]));
            }
        }
        (lo, hi.max(lo))
    }
}
