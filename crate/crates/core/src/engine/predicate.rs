use std::cmp::Ordering;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::lp::Region;
use crate::geometry::rational::serde_str;
use crate::geometry::{ConvexBody, Rational, RationalVector};
use crate::lattice::{colinear_in_lattice_set, integer_points, integer_points_region, LatticePoint, LatticeWitness};
use crate::norms::{l2_diameter_region, rho_diameter_region, v_width_region, Extent, PolytopeNorm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    Polytope { norm: PolytopeNorm },
    Euclidean,
}

/// A property of an intersection of bodies, decided exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "predicate", rename_all = "snake_case")]
pub enum Predicate {
    NonemptyIntersection,
    /// `width_v >= sqrt(threshold_sq)`, or `width_v >= sqrt(threshold_sq) * |v|`
    /// when `normalize` is set, so irrational thresholds stay exact.
    VWidthAtLeast {
        v: RationalVector,
        #[serde(with = "serde_str")]
        threshold_sq: Rational,
        normalize: bool,
    },
    /// Diameter at least `bound` (strictly greater if `strict`). For the
    /// Euclidean metric `bound` is the squared threshold.
    DiameterAtLeast {
        metric: Metric,
        #[serde(with = "serde_str")]
        bound: Rational,
        strict: bool,
    },
    ContainsIntegerPoint,
    ContainsKColinear { k: usize },
}

impl Predicate {
    pub fn v_width(v: RationalVector, threshold: &Rational) -> Self {
        assert!(!threshold.is_negative());
        Predicate::VWidthAtLeast { v, threshold_sq: threshold * threshold, normalize: false }
    }

    pub fn rho_diameter(norm: PolytopeNorm, threshold: Rational, strict: bool) -> Self {
        Predicate::DiameterAtLeast { metric: Metric::Polytope { norm }, bound: threshold, strict }
    }

    pub fn l2_diameter(threshold: &Rational, strict: bool) -> Self {
        assert!(!threshold.is_negative());
        Predicate::l2_diameter_squared(threshold * threshold, strict)
    }

    pub fn l2_diameter_squared(squared: Rational, strict: bool) -> Self {
        Predicate::DiameterAtLeast { metric: Metric::Euclidean, bound: squared, strict }
    }

    fn uses_lattice(&self) -> bool {
        matches!(self, Predicate::ContainsIntegerPoint | Predicate::ContainsKColinear { .. })
    }
}

/// A measured quantity of an intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure {
    Empty,
    Finite {
        #[serde(with = "serde_str")]
        value: Rational,
        /// The value is a squared Euclidean length.
        #[serde(skip_serializing_if = "std::ops::Not::not")]
        squared: bool,
    },
    Unbounded,
    Count { count: usize },
}

impl Measure {
    fn rank(&self) -> u8 {
        match self {
            Measure::Empty => 0,
            Measure::Finite { .. } | Measure::Count { .. } => 1,
            Measure::Unbounded => 2,
        }
    }
}

impl PartialOrd for Measure {
    /// `Empty < Finite < Unbounded`; finite values compare by value.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Measure::Finite { value: a, squared: sa }, Measure::Finite { value: b, squared: sb }) if sa == sb => {
                a.partial_cmp(b)
            }
            (Measure::Count { count: a }, Measure::Count { count: b }) => a.partial_cmp(b),
            (a, b) if a.rank() != b.rank() => a.rank().partial_cmp(&b.rank()),
            _ => None,
        }
    }
}

fn measure_of<T>(extent: Extent<T>, value: impl FnOnce(T) -> Rational, squared: bool) -> Measure {
    match extent {
        Extent::Empty => Measure::Empty,
        Extent::Unbounded => Measure::Unbounded,
        Extent::Finite(t) => Measure::Finite { value: value(t), squared },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<Measure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LatticeWitness>,
}

impl Evaluation {
    fn flag(holds: bool) -> Self {
        Evaluation { holds, measure: None, witness: None }
    }
}

/// Evaluates a predicate on intersections of bodies drawn from a fixed list.
/// Lattice predicates reuse each bounded body's lattice points.
pub struct Evaluator<'a> {
    dim: usize,
    bodies: Vec<&'a ConvexBody>,
    predicate: &'a Predicate,
    lattice: Vec<Option<Vec<LatticePoint>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(dim: usize, bodies: Vec<&'a ConvexBody>, predicate: &'a Predicate) -> Result<Self> {
        if let Predicate::ContainsKColinear { k: 0 } = predicate {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let mut lattice = Vec::new();
        if predicate.uses_lattice() {
            for b in &bodies {
                lattice.push(match integer_points(b) {
                    Ok(points) => Some(points),
                    Err(Error::Unbounded) => None,
                    Err(e) => return Err(e),
                });
            }
        }
        Ok(Evaluator { dim, bodies, predicate, lattice })
    }

    pub fn predicate(&self) -> &Predicate {
        self.predicate
    }

    pub fn body_count(&self) -> usize {
        self.bodies.len()
    }

    /// Evaluates on the intersection of the bodies at `indices`; an empty
    /// index list means all of space.
    pub fn evaluate(&self, indices: &[usize]) -> Result<Evaluation> {
        let region = Region::of(self.dim, indices.iter().map(|&i| self.bodies[i]))?;
        match self.predicate {
            Predicate::NonemptyIntersection => Ok(Evaluation::flag(!region.is_empty()?)),
            Predicate::VWidthAtLeast { v, threshold_sq, normalize } => {
                let extent = v_width_region(&region, v)?;
                let needed = if *normalize { threshold_sq * v.norm_squared() } else { threshold_sq.clone() };
                let holds = match &extent {
                    Extent::Empty => false,
                    Extent::Unbounded => true,
                    Extent::Finite(c) => &c.value * &c.value >= needed,
                };
                Ok(Evaluation { holds, measure: Some(measure_of(extent, |c| c.value, false)), witness: None })
            }
            Predicate::DiameterAtLeast { metric, bound, strict } => {
                let measure = match metric {
                    Metric::Polytope { norm } => measure_of(rho_diameter_region(&region, norm)?, |c| c.value, false),
                    Metric::Euclidean => measure_of(l2_diameter_region(&region)?, |s| s.squared, true),
                };
                let holds = match &measure {
                    Measure::Empty => false,
                    Measure::Unbounded => true,
                    Measure::Finite { value, .. } => {
                        if *strict {
                            value > bound
                        } else {
                            value >= bound
                        }
                    }
                    Measure::Count { .. } => unreachable!(),
                };
                Ok(Evaluation { holds, measure: Some(measure), witness: None })
            }
            Predicate::ContainsIntegerPoint => {
                let points = self.lattice_points(indices, &region)?;
                Ok(Evaluation {
                    holds: !points.is_empty(),
                    measure: Some(Measure::Count { count: points.len() }),
                    witness: None,
                })
            }
            Predicate::ContainsKColinear { k } => {
                let points = self.lattice_points(indices, &region)?;
                let witness = colinear_in_lattice_set(&points, *k);
                Ok(Evaluation {
                    holds: witness.is_some(),
                    measure: Some(Measure::Count { count: points.len() }),
                    witness,
                })
            }
        }
    }

    /// Lattice points of the intersection, in lexicographic order.
    pub fn lattice_points(&self, indices: &[usize], region: &Region<'_>) -> Result<Vec<LatticePoint>> {
        let cached: Vec<&Vec<LatticePoint>> =
            indices.iter().filter_map(|&i| self.lattice.get(i).and_then(Option::as_ref)).collect();
        let Some(smallest) = cached.iter().min_by_key(|p| p.len()) else {
            return integer_points_region(region);
        };
        let mut out = Vec::new();
        'points: for p in smallest.iter() {
            for other in &cached {
                if other.binary_search(p).is_err() {
                    continue 'points;
                }
            }
            for &i in indices {
                if self.lattice.get(i).is_some_and(Option::is_none) {
                    let point = RationalVector::from_bigints(p);
                    if !crate::geometry::member(&point, self.bodies[i])? {
                        continue 'points;
                    }
                }
            }
            out.push(p.clone());
        }
        Ok(out)
    }
}

/// Evaluates a predicate on the intersection of all given bodies.
pub fn evaluate(dim: usize, bodies: &[&ConvexBody], predicate: &Predicate) -> Result<Evaluation> {
    let all: Vec<usize> = (0..bodies.len()).collect();
    Evaluator::new(dim, bodies.to_vec(), predicate)?.evaluate(&all)
}
