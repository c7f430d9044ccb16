//! Exact rational geometry kernel: vectors, half-spaces, H- and V-bodies,
//! linear programming, vertex enumeration and Radon partitions.

pub mod body;
pub mod linalg;
pub mod lp;
pub mod radon;
pub mod rational;
pub(crate) mod simplex;
pub mod vector;
pub mod vertices;

pub use body::{intersect, intersect_in, ConvexBody, HPolytope, HalfSpace, VBody};
pub use lp::{integer_bounding_box, irredundant, lp_solve, member, LpResult, LpStatus, Region, Sense};
pub use radon::{radon_partition, RadonPartition};
pub use rational::{format_rational, parse_rational, Rational};
pub use vector::RationalVector;
pub use vertices::vertices;
