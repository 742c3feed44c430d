//! CSV tables and SVG plots of membership functions.

use std::fmt::Write as _;

use crate::cutcore::FuzzyNum;
use crate::error::Result;
use crate::expr::format_number;
use crate::tol;

/// `alpha,lo,hi` rows at the requested levels plus every breakpoint.
pub fn cuts_csv(u: &FuzzyNum, grid: &[f64]) -> Result<String> {
    let mut out = String::from("alpha,lo,hi\n");
    for (a, lo, hi) in u.sample_levels(grid)? {
        let _ = writeln!(out, "{},{},{}", format_number(a), format_number(lo), format_number(hi));
    }
    Ok(out)
}

/// `x,mu` rows at the given abscissae.
pub fn membership_csv(u: &FuzzyNum, xs: &[f64]) -> String {
    let mut out = String::from("x,mu\n");
    for &x in xs {
        let _ = writeln!(out, "{},{}", format_number(x), format_number(u.membership(x)));
    }
    out
}

/// `n` equally spaced levels on `[0, 1]`.
pub fn level_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

/// Points of the membership graph over `[lo, hi]`: at least `n` grid points, every
/// breakpoint, and at a jump the left limit, the value and the right limit stacked at one abscissa.
pub fn membership_polyline(u: &FuzzyNum, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let n = n.max(2);
    let s = u.support();
    let mut xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    xs.extend(u.breakpoint_abscissae());
    xs.extend([s.lo, s.hi, u.core().lo, u.core().hi]);
    xs.retain(|&x| x >= lo && x <= hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut pts = Vec::with_capacity(xs.len() + 8);
    for x in xs {
        let m = u.membership(x);
        let (l, r) = (u.limit_left(x), u.limit_right(x));
        if !tol::same_level(l, m) {
            pts.push((x, l));
        }
        pts.push((x, m));
        if !tol::same_level(r, m) {
            pts.push((x, r));
        }
    }
    pts
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const POINTS: usize = 1024;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One polyline per fuzzy number on shared axes.
pub fn svg_plot(curves: &[(&str, &FuzzyNum)]) -> String {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, u) in curves {
        lo = lo.min(u.support().lo);
        hi = hi.max(u.support().hi);
    }
    if !lo.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    }
    let pad = 0.05 * (hi - lo).max(1e-9);
    let (lo, hi) = (lo - pad, hi + pad);
    let sx = |x: f64| MARGIN + (x - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{:.2} {:.2} H{:.2} M{:.2} {:.2} V{:.2}" stroke="black" fill="none"/>"#,
        MARGIN,
        sy(0.0),
        WIDTH - MARGIN,
        MARGIN,
        sy(0.0),
        sy(1.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#,
        MARGIN,
        HEIGHT - MARGIN + 16.0,
        format_number(lo),
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0,
        format_number(hi)
    );
    for (i, (name, u)) in curves.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let pts: Vec<String> = membership_polyline(u, lo, hi, POINTS)
            .into_iter()
            .map(|(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            escape(name)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 14.0 * i as f64,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
