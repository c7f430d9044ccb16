//! Exact-arithmetic toolkit for quantitative Helly-type theorems on diameter.
//!
//! Diameters in polytope norms and directional widths are computed by exact
//! rational linear programming, so every Helly check is a decision rather
//! than an approximation. The crate also carries the higher-dimensional
//! liftings used to move between width and intersection statements, the
//! extremal families showing the subfamily sizes are tight, lattice and
//! colinear-point detection, and the numeric cap-volume functions behind the
//! fractional statements.

pub mod analytics;
pub mod combinatorics;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod family;
pub mod geometry;
pub mod lattice;
pub mod lift;
pub mod norms;

pub use error::{Error, Result};
pub use family::{ColorfulFamilies, Family, Member};
pub use geometry::{ConvexBody, HPolytope, HalfSpace, Rational, RationalVector, VBody};
