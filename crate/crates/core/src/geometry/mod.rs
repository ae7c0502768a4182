//! Plane isometries, the congruence dichotomy for point triples, and
//! symmetries of polynomial graphs.

mod dichotomy;
pub mod isometry;
mod symmetry;

pub use dichotomy::{
    collinear, congruent_triples, sigma_dichotomy, SigmaOutcome, SigmaSystem, TriplePair,
};
pub use isometry::{Isometry, IsometryRepr, Mat2};
pub use symmetry::{fixes_graph, fixes_graph_at, graph_symmetries, symmetry_abscissa};

use crate::exact::Point2;

pub fn apply_isometry(r: &Isometry, q: &Point2) -> Point2 {
    r.apply(q)
}
