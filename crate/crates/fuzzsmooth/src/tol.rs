//! Numeric tolerances shared across the crate.

/// Abscissa accuracy of numeric inversion.
pub const INV: f64 = 1e-12;

/// Two one-sided slopes closer than this (relative to their size) count as equal.
pub const SLOPE: f64 = 1e-6;

/// Levels closer than this are the same level.
pub const LEVEL: f64 = 1e-12;

/// A membership slope below this in magnitude is zero.
pub const ZERO_SLOPE: f64 = 1e-9;

/// Relative tolerance for comparing abscissae.
pub const ABSCISSA: f64 = 1e-12;

pub fn same_x(a: f64, b: f64) -> bool {
    (a - b).abs() <= ABSCISSA * (1.0 + a.abs().max(b.abs()))
}

pub fn same_level(a: f64, b: f64) -> bool {
    (a - b).abs() <= LEVEL
}

pub fn same_slope(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
