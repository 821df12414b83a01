//! Toric key varieties: fans, divisor classes, and cohomology of line bundles
//! and of twisted reflexive cotangent sheaves.

mod cohomology;
mod cotangent;
mod fan;
mod general;
pub mod polytope;

pub use cohomology::{contributing_patterns, line_bundle_cohomology, negative_set, section_basis, PatternPoints};
pub use cotangent::{
    cotangent_twist_cohomology, cotangent_twist_cohomology_chase, global_section_rank, CotangentPins,
};
pub use general::GeneralFan;
pub use fan::{coboundary_matrix, git_cones, ClassLattice, Fan, TorusDivisor};

/// `-K = sum of all ray divisors`.
pub fn anticanonical(fan: &Fan) -> TorusDivisor {
    fan.anticanonical()
}

pub fn is_cartier(fan: &Fan, d: &[i64]) -> bool {
    fan.is_cartier(d)
}
