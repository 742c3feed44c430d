//! Text formats: the `.fz` document, CSV tables and SVG plots.

mod document;
mod plot;

pub use document::{Body, FuzzyDocument, Repr};
pub use plot::{cuts_csv, level_grid, membership_csv, membership_polyline, svg_plot};
