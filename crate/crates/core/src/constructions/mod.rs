//! Extremal families showing the subfamily sizes cannot be lowered, and
//! seeded random generators for the property suites.

mod discrete;
mod minkowski;
mod nonpolytope;
pub mod random;

pub use discrete::{discrete_tight_points, gen_discrete_tight, DiscreteTightReport};
pub use minkowski::{gen_minkowski_tight, FacetCheck, MinkowskiTightReport, MAX_SHRINK};
pub use nonpolytope::{
    estimate_s_n, gen_nonpolytope_demo, rational_unit_vector, tangent_intersection_diameter, NonpolytopeReport,
};
