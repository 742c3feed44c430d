//! The `.fz` text format.
//!
//! ```text
//! # comment
//! name: triangle
//! source: free text
//! repr: cuts
//! left [0, 1] inc: a - 1
//! right [0, 1] dec: 1 - a
//! left-point 0.5: -1          # optional stored value at a breakpoint
//! ```
//!
//! Membership documents use `repr: membership` and one `piece` line per
//! monotone piece, written in `x`. Brackets mark closed or open ends:
//! `piece (0, 0.5]: 1 - x`. Bounds may be constant expressions such as
//! `-0.5*pi - sqrt(0.5)`.

use std::fmt::Write as _;

use crate::cutcore::{from_membership_pieces, CutCurve, FuzzyNum, Piece, Segment, Shape};
use crate::error::{FuzzyError, Result};
use crate::expr::{format_number, parse_expr, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Cuts,
    Membership,
}

impl Repr {
    pub fn keyword(self) -> &'static str {
        match self {
            Repr::Cuts => "cuts",
            Repr::Membership => "membership",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Cuts { left: CutCurve, right: CutCurve },
    Membership(Vec<Piece>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyDocument {
    pub name: String,
    pub source: Option<String>,
    pub body: Body,
}

impl FuzzyDocument {
    /// Canonical cut-form document for `u`.
    pub fn from_fuzzy(name: &str, source: Option<&str>, u: &FuzzyNum) -> FuzzyDocument {
        FuzzyDocument {
            name: name.to_string(),
            source: source.map(str::to_string),
            body: Body::Cuts {
                left: u.left().clone(),
                right: u.right().clone(),
            },
        }
    }

    pub fn repr(&self) -> Repr {
        match self.body {
            Body::Cuts { .. } => Repr::Cuts,
            Body::Membership(_) => Repr::Membership,
        }
    }

    /// The validated fuzzy number. Membership documents go through symbolic inversion.
    pub fn to_fuzzy(&self) -> Result<FuzzyNum> {
        match &self.body {
            Body::Cuts { left, right } => FuzzyNum::checked(left.clone(), right.clone()),
            Body::Membership(pieces) => from_membership_pieces(pieces),
        }
    }

    pub fn parse(src: &str) -> Result<FuzzyDocument> {
        Parser::default().run(src)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name: {}", self.name);
        if let Some(s) = &self.source {
            let _ = writeln!(out, "source: {s}");
        }
        let _ = writeln!(out, "repr: {}", self.repr().keyword());
        match &self.body {
            Body::Cuts { left, right } => {
                render_curve(&mut out, "left", left);
                render_curve(&mut out, "right", right);
            }
            Body::Membership(pieces) => {
                for p in pieces {
                    let _ = writeln!(
                        out,
                        "piece {}{}, {}{}: {}",
                        if p.lo_closed { '[' } else { '(' },
                        format_number(p.lo),
                        format_number(p.hi),
                        if p.hi_closed { ']' } else { ')' },
                        p.expr.display('x')
                    );
                }
            }
        }
        out
    }
}

fn render_curve(out: &mut String, side: &str, c: &CutCurve) {
    for s in c.segments() {
        let _ = writeln!(
            out,
            "{side} [{}, {}] {}: {}",
            format_number(s.lo()),
            format_number(s.hi()),
            s.shape().keyword(),
            s.expr().display('a')
        );
    }
    let segs = c.segments();
    for (i, &p) in c.points().iter().enumerate() {
        let conventional = if i == 0 {
            segs[0].eval(0.0)
        } else {
            segs[i - 1].eval(segs[i - 1].hi())
        };
        if p != conventional {
            let level = if i == 0 { 0.0 } else { segs[i - 1].hi() };
            let _ = writeln!(out, "{side}-point {}: {}", format_number(level), format_number(p));
        }
    }
}

/// One source line with its 1-based number, and a cursor measured in bytes.
struct Line<'a> {
    text: &'a str,
    number: usize,
    pos: usize,
}

impl<'a> Line<'a> {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> FuzzyError {
        FuzzyError::Parse {
            line: self.number,
            column: self.text[..pos.min(self.text.len())].chars().count() + 1,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> FuzzyError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let n = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(rest.len());
        self.pos += n;
        &rest[..n]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    /// Parses `text` (starting at byte `start` of the line) as an expression in `var`.
    fn expr_at(&self, text: &str, start: usize, var: char) -> Result<Expr> {
        let lead = text.len() - text.trim_start().len();
        parse_expr(text.trim(), var).map_err(|e| {
            let before: usize = text.trim_start().chars().take(e.column - 1).map(char::len_utf8).sum();
            self.error_at(start + lead + before, e.message)
        })
    }

    fn constant_at(&self, text: &str, start: usize) -> Result<f64> {
        let e = self.expr_at(text, start, 'x')?;
        match (!e.has_var()).then(|| e.eval(0.0)) {
            Some(v) if v.is_finite() => Ok(v),
            _ => Err(self.error_at(start, "bound must be a finite constant")),
        }
    }

    /// `[lo, hi]` with either bracket style; returns bounds and closedness.
    fn interval(&mut self) -> Result<(f64, f64, bool, bool)> {
        self.skip_ws();
        let lo_closed = match self.rest().chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(self.error("expected '[' or '('")),
        };
        self.pos += 1;
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut depth = 0i32;
        let mut comma = None;
        let mut close = None;
        for (i, &b) in bytes.iter().enumerate().skip(start) {
            match b {
                b'(' => depth += 1,
                b')' | b']' if depth == 0 && comma.is_some() => {
                    close = Some(i);
                    break;
                }
                b')' => depth -= 1,
                b',' if depth == 0 && comma.is_none() => comma = Some(i),
                _ => {}
            }
        }
        let Some(comma) = comma else {
            return Err(self.error("expected ',' between the bounds"));
        };
        let Some(close) = close else {
            return Err(self.error_at(comma, "unclosed interval"));
        };
        let lo = self.constant_at(&self.text[start..comma], start)?;
        let hi = self.constant_at(&self.text[comma + 1..close], comma + 1)?;
        self.pos = close + 1;
        Ok((lo, hi, lo_closed, bytes[close] == b']'))
    }

    /// Optional shape keyword, the `:` and the expression after it.
    fn shape_and_expr(&mut self, var: char) -> Result<(Option<Shape>, Expr)> {
        self.skip_ws();
        let at = self.pos;
        let shape = if self.rest().starts_with(':') {
            None
        } else {
            let w = self.word();
            Some(Shape::from_keyword(w).ok_or_else(|| self.error_at(at, format!("unknown shape '{w}'")))?)
        };
        self.expect(':')?;
        let e = self.expr_at(self.rest(), self.pos, var)?;
        Ok((shape, e))
    }
}

#[derive(Default)]
struct Parser {
    name: Option<String>,
    source: Option<String>,
    repr: Option<Repr>,
    left: Vec<(Segment, usize)>,
    right: Vec<(Segment, usize)>,
    left_points: Vec<(f64, f64, usize)>,
    right_points: Vec<(f64, f64, usize)>,
    pieces: Vec<(Piece, usize)>,
}

fn strip_comment(s: &str) -> &str {
    s.find('#').map_or(s, |i| &s[..i])
}

impl Parser {
    fn run(mut self, src: &str) -> Result<FuzzyDocument> {
        let mut last = 0;
        for (i, raw) in src.lines().enumerate() {
            let text = strip_comment(raw).trim_end();
            last = i + 1;
            if text.trim().is_empty() {
                continue;
            }
            let mut line = Line {
                text,
                number: i + 1,
                pos: 0,
            };
            self.line(&mut line)?;
        }
        self.finish(last)
    }

    fn line(&mut self, line: &mut Line) -> Result<()> {
        let at = {
            line.skip_ws();
            line.pos
        };
        let key = line.word();
        match key {
            "name" | "source" | "repr" => {
                line.expect(':')?;
                let value = line.rest().trim().to_string();
                match key {
                    "name" => self.name = Some(value),
                    "source" => self.source = Some(value),
                    _ => {
                        self.repr = Some(match value.as_str() {
                            "cuts" => Repr::Cuts,
                            "membership" => Repr::Membership,
                            _ => return Err(line.error("repr must be 'cuts' or 'membership'")),
                        })
                    }
                }
            }
            "left" | "right" => {
                let (lo, hi, _, _) = line.interval()?;
                let (shape, e) = line.shape_and_expr('a')?;
                let shape = shape.ok_or_else(|| line.error_at(at, "cut segments need a shape: inc, dec or const"))?;
                if !(lo < hi) {
                    return Err(line.error_at(at, format!("empty level interval [{lo}, {hi}]")));
                }
                let list = if key == "left" { &mut self.left } else { &mut self.right };
                if let Some((prev, _)) = list.last() {
                    if lo < prev.hi() {
                        return Err(line.error_at(at, format!("levels overlap: {lo} < {}", prev.hi())));
                    }
                    if lo > prev.hi() {
                        return Err(line.error_at(at, format!("gap in levels between {} and {lo}", prev.hi())));
                    }
                } else if lo != 0.0 {
                    return Err(line.error_at(at, "the first segment must start at level 0"));
                }
                list.push((Segment::new(lo, hi, e, shape), line.number));
            }
            "left-point" | "right-point" => {
                line.skip_ws();
                let start = line.pos;
                let colon = line.rest().find(':').ok_or_else(|| line.error("expected ':'"))?;
                let level = line.constant_at(&line.text[start..start + colon], start)?;
                let vstart = start + colon + 1;
                let value = line.constant_at(&line.text[vstart..], vstart)?;
                let list = if key == "left-point" {
                    &mut self.left_points
                } else {
                    &mut self.right_points
                };
                list.push((level, value, line.number));
            }
            "piece" => {
                let (lo, hi, lo_closed, hi_closed) = line.interval()?;
                let (shape, e) = line.shape_and_expr('x')?;
                if !(lo <= hi) {
                    return Err(line.error_at(at, format!("empty interval [{lo}, {hi}]")));
                }
                if let Some((prev, _)) = self.pieces.last() {
                    if lo < prev.hi {
                        return Err(line.error_at(at, format!("pieces overlap: {lo} < {}", prev.hi)));
                    }
                    if lo > prev.hi {
                        return Err(line.error_at(at, format!("gap between pieces at {} and {lo}", prev.hi)));
                    }
                }
                let piece = Piece {
                    lo,
                    hi,
                    lo_closed,
                    hi_closed,
                    expr: e,
                };
                if let Some(s) = shape {
                    let (a, b) = (piece.expr.eval(lo), piece.expr.eval(hi));
                    let actual = if (b - a).abs() <= crate::tol::LEVEL {
                        Shape::Constant
                    } else if b > a {
                        Shape::Increasing
                    } else {
                        Shape::Decreasing
                    };
                    if actual != s && lo < hi {
                        return Err(line.error_at(
                            at,
                            format!("piece is tagged {} but is {}", s.keyword(), actual.keyword()),
                        ));
                    }
                }
                self.pieces.push((piece, line.number));
            }
            "" => return Err(line.error("expected a keyword")),
            other => return Err(line.error_at(at, format!("unknown keyword '{other}'"))),
        }
        Ok(())
    }

    fn finish(self, last_line: usize) -> Result<FuzzyDocument> {
        let eof = |message: &str| FuzzyError::Parse {
            line: last_line.max(1),
            column: 1,
            message: message.to_string(),
        };
        let repr = self.repr.ok_or_else(|| eof("missing 'repr:' line"))?;
        let body = match repr {
            Repr::Cuts => {
                if let Some((_, n)) = self.pieces.first() {
                    return Err(FuzzyError::Parse {
                        line: *n,
                        column: 1,
                        message: "'piece' lines need repr: membership".into(),
                    });
                }
                Body::Cuts {
                    left: curve(self.left, self.left_points, "left", &eof)?,
                    right: curve(self.right, self.right_points, "right", &eof)?,
                }
            }
            Repr::Membership => {
                if let Some((_, n)) = self.left.first().or(self.right.first()) {
                    return Err(FuzzyError::Parse {
                        line: *n,
                        column: 1,
                        message: "cut segments need repr: cuts".into(),
                    });
                }
                if self.pieces.is_empty() {
                    return Err(eof("no 'piece' lines"));
                }
                Body::Membership(self.pieces.into_iter().map(|(p, _)| p).collect())
            }
        };
        Ok(FuzzyDocument {
            name: self.name.unwrap_or_else(|| "unnamed".into()),
            source: self.source,
            body,
        })
    }
}

fn curve(
    segs: Vec<(Segment, usize)>,
    overrides: Vec<(f64, f64, usize)>,
    side: &str,
    eof: &dyn Fn(&str) -> FuzzyError,
) -> Result<CutCurve> {
    let Some((last, _)) = segs.last() else {
        return Err(eof(&format!("no '{side}' segments")));
    };
    if last.hi() != 1.0 {
        return Err(eof(&format!(
            "the {side} segments end at level {} instead of 1",
            last.hi()
        )));
    }
    let segs: Vec<Segment> = segs.into_iter().map(|(s, _)| s).collect();
    let base = CutCurve::new(segs.clone())?;
    if overrides.is_empty() {
        return Ok(base);
    }
    let mut points = base.points().to_vec();
    let levels: Vec<f64> = base.breaks().collect();
    for (level, value, n) in overrides {
        let i = levels
            .iter()
            .position(|&l| l == level)
            .ok_or_else(|| FuzzyError::Parse {
                line: n,
                column: 1,
                message: format!("level {level} is not a breakpoint of the {side} curve"),
            })?;
        points[i] = value;
    }
    CutCurve::with_points(segs, points)
}
