//! Fuzzy numbers in cut form: construction, validation, cuts and membership.

mod curve;
mod fuzzy;
mod pieces;

pub use curve::{CutCurve, Segment, Shape};
pub use fuzzy::{Clause, ClauseCheck, FuzzyNum, Interval, ValidationReport};
pub use pieces::{from_membership_pieces, Piece};

pub(crate) use fuzzy::check_level;
