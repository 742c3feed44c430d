//! Bundled example numbers in `.fz` form.

use crate::cutcore::FuzzyNum;
use crate::error::{FuzzyError, Result};
use crate::io::FuzzyDocument;

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        /// `(name, document text)` for every bundled example.
        pub const ALL: &[(&str, &str)] = &[$(($name, include_str!(concat!("../fixtures/", $name, ".fz")))),*];
    };
}

bundle!(
    "triangle",
    "truncated_parabola",
    "plateaus",
    "plateaus_smoothed",
    "spike",
    "kinked",
    "sine_smoother",
    "jump",
    "cosine_smoother",
    "parabola",
    "point",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    ALL.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Result<FuzzyNum> {
    let src = text(name).ok_or_else(|| FuzzyError::Precondition(format!("no bundled example named {name:?}")))?;
    FuzzyDocument::parse(src)?.to_fuzzy()
}
