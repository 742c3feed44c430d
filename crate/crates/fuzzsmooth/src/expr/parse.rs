//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' rational)*
//! atom   := number | 'pi' | VAR | func '(' expr ')' | '(' expr ')'
//!         | 'inv' '(' expr ',' expr ',' expr (',' expr)? ')'
//! func   := 'sqrt' | 'sin' | 'cos' | 'asin' | 'acos'
//! ```
//!
//! `VAR` is `a` for cut functions and `x` for membership pieces. The first
//! argument of `inv` is always written in `x`. Text produced by
//! [`Expr::display`] parses back to an expression that prints identically.

use std::fmt;

use super::{Expr, InverseFn, Ratio};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses `src` with `var` as the free variable.
pub fn parse_expr(src: &str, var: char) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0, var };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    var: char,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            column: self.src[..self.pos].chars().count() + 1,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(build_product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(match self.factor()? {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Scale(-1.0, Box::new(other)),
            });
        }
        let mut base = self.atom()?;
        while self.eat('^') {
            let r = self.rational()?;
            base = match base {
                Expr::Const(c) if c >= 0.0 => Expr::Const(Expr::Pow(Box::new(Expr::Const(c)), r).eval(0.0)),
                other => Expr::Pow(Box::new(other), r),
            };
        }
        Ok(base)
    }

    fn rational(&mut self) -> Result<Ratio, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let value = if self.eat('(') {
            let neg = self.eat('-');
            let num = self.number()?;
            let den = if self.eat('/') { self.number()? } else { 1.0 };
            self.expect(')')?;
            if neg {
                -num / den
            } else {
                num / den
            }
        } else {
            self.number()?
        };
        let twice = value * 2.0;
        if twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
            self.pos = start;
            return Err(self.error("exponent must be an integer or a half-integer"));
        }
        // twice is integral and in range, so the cast is exact.
        let twice = twice as i32;
        Ok(Ratio::new(twice, 2).expect("denominator 2 is allowed"))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let bytes = rest.as_bytes();
        let mut i = 0;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i == 0 {
            return Err(self.error("expected a number"));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let digits = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > digits {
                i = j;
            }
        }
        let text = &rest[..i];
        let v: f64 = text
            .parse()
            .map_err(|_| self.error(&format!("malformed number '{text}'")))?;
        self.pos += i;
        Ok(v)
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !c.is_ascii_alphabetic() {
                break;
            }
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(Expr::Const(self.number()?)),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident().to_string();
                if name.len() == 1 && name.starts_with(self.var) {
                    return Ok(Expr::Var);
                }
                if name == "pi" {
                    return Ok(Expr::Const(std::f64::consts::PI));
                }
                if name == "inv" {
                    return self.inverse();
                }
                let wrap: fn(Box<Expr>) -> Expr = match name.as_str() {
                    "sqrt" => Expr::Sqrt,
                    "sin" => Expr::Sin,
                    "cos" => Expr::Cos,
                    "asin" => Expr::Asin,
                    "acos" => Expr::Acos,
                    _ => {
                        self.pos = start;
                        return Err(self.error(&format!("unknown name '{name}'")));
                    }
                };
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(wrap(Box::new(arg)))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn constant(&mut self) -> Result<f64, ParseError> {
        let at = self.pos;
        let e = self.expr()?;
        if e.has_var() {
            self.pos = at;
            return Err(self.error("expected a constant"));
        }
        Ok(e.eval(0.0))
    }

    fn inverse(&mut self) -> Result<Expr, ParseError> {
        self.expect('(')?;
        let outer = self.var;
        self.var = 'x';
        let f = self.expr();
        self.var = outer;
        let f = f?;
        self.expect(',')?;
        let lo = self.constant()?;
        self.expect(',')?;
        let hi = self.constant()?;
        let arg = if self.eat(',') { self.expr()? } else { Expr::Var };
        self.expect(')')?;
        if !(lo < hi) {
            return Err(self.error("inverse bounds must satisfy lo < hi"));
        }
        Ok(Expr::Inverse(Box::new(InverseFn { f, lo, hi, arg })))
    }
}

/// A leading literal becomes a scale factor; other products associate to the left.
fn build_product(mut factors: Vec<Expr>) -> Expr {
    if factors.len() == 1 {
        return factors.pop().expect("one factor");
    }
    if let Expr::Const(c) = factors[0] {
        let rest = factors.split_off(1);
        return Expr::Scale(c, Box::new(build_product(rest)));
    }
    let mut it = factors.into_iter();
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, f| Expr::Mul(Box::new(acc), Box::new(f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str, var: char) {
        let e = parse_expr(src, var).unwrap();
        let printed = e.display(var).to_string();
        let again = parse_expr(&printed, var).unwrap();
        assert_eq!(again.display(var).to_string(), printed, "from {src}");
    }

    #[test]
    fn parses_cut_of_smoothed_example() {
        let e = parse_expr("-sqrt(1 - 2*a) - 1 - sqrt(1 - a)", 'a').unwrap();
        let want = -(1.0f64 - 0.4).sqrt() - 1.0 - 0.8f64.sqrt();
        assert!((e.eval(0.2) - want).abs() < 1e-15);
    }

    #[test]
    fn powers_and_precedence() {
        let e = parse_expr("2*x^2 + 2*x + 1", 'x').unwrap();
        assert_eq!(e.eval(-0.5), 0.5);
        let e = parse_expr("-0.5^2", 'x').unwrap();
        assert_eq!(e.eval(0.0), -0.25);
        let e = parse_expr("(x + 1)^(1/2)", 'x').unwrap();
        assert_eq!(e.eval(3.0), 2.0);
        let e = parse_expr("x^(-1)", 'x').unwrap();
        assert_eq!(e.eval(4.0), 0.25);
    }

    #[test]
    fn rejects_bad_input_with_column() {
        let err = parse_expr("1 + y", 'x').unwrap_err();
        assert_eq!(err.column, 5);
        let err = parse_expr("x^(1/3)", 'x').unwrap_err();
        assert!(err.message.contains("half-integer"));
        assert!(parse_expr("sqrt(x", 'x').is_err());
        assert!(parse_expr("a", 'x').is_err());
    }

    #[test]
    fn printed_text_is_stable() {
        for src in [
            "0.5*(-1 + sqrt(2*a - 1)) - sqrt(1 - a)",
            "x*2*x",
            "a - -2*a",
            "2*a*(3*a)",
            "(-0.5)^2*a",
            "inv(x + sin(x), 0, 2, 2*a - 1)",
            "asin(4*a - 3) + 2*a - 1",
            "-0.5*pi - sqrt(0.5 - a) + a - 0.5",
            "a*(a + 1)^(-1/2) - (a - 1)",
        ] {
            roundtrip(
                src,
                if src.contains('x') && !src.contains("inv") {
                    'x'
                } else {
                    'a'
                },
            );
        }
    }
}
