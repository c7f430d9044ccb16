use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::rational::{int, Rational};
use super::vector::RationalVector;
use crate::error::{check_dim, Error, Result};

/// The closed half-space `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHalfSpace", into = "RawHalfSpace")]
pub struct HalfSpace {
    normal: RationalVector,
    offset: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawHalfSpace {
    a: RationalVector,
    #[serde(with = "super::rational::serde_str")]
    b: Rational,
}

impl TryFrom<RawHalfSpace> for HalfSpace {
    type Error = Error;

    fn try_from(raw: RawHalfSpace) -> Result<Self> {
        HalfSpace::new(raw.a, raw.b)
    }
}

impl From<HalfSpace> for RawHalfSpace {
    fn from(h: HalfSpace) -> Self {
        RawHalfSpace { a: h.normal, b: h.offset }
    }
}

impl HalfSpace {
    pub fn new(normal: RationalVector, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroNormal);
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Self {
        HalfSpace::new(RationalVector::from_ints(normal), int(offset)).expect("nonzero normal")
    }

    pub fn normal(&self) -> &RationalVector {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn contains(&self, point: &RationalVector) -> bool {
        self.normal.dot(point) <= self.offset
    }

    /// Slack `offset - <normal, point>`; zero on the boundary.
    pub fn slack(&self, point: &RationalVector) -> Rational {
        &self.offset - self.normal.dot(point)
    }

    /// Image under `x -> factor * x` for `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> HalfSpace {
        assert!(factor.is_positive());
        HalfSpace { normal: self.normal.clone(), offset: &self.offset * factor }
    }

    pub fn translated(&self, shift: &RationalVector) -> HalfSpace {
        HalfSpace { normal: self.normal.clone(), offset: &self.offset + self.normal.dot(shift) }
    }
}

/// Intersection of finitely many half-spaces; no constraints means all of space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolytope {
    dim: usize,
    constraints: Vec<HalfSpace>,
}

impl HPolytope {
    pub fn new(dim: usize, constraints: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for h in &constraints {
            check_dim(dim, h.dim())?;
        }
        Ok(HPolytope { dim, constraints })
    }

    pub fn whole_space(dim: usize) -> Self {
        HPolytope { dim, constraints: Vec::new() }
    }

    /// The box `lower <= x <= upper`, coordinatewise.
    pub fn bounding_box(lower: &RationalVector, upper: &RationalVector) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        let dim = lower.dim();
        let mut constraints = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let e = RationalVector::unit(dim, i);
            constraints.push(HalfSpace::new(e.clone(), upper[i].clone())?);
            constraints.push(HalfSpace::new(-&e, -lower[i].clone())?);
        }
        HPolytope::new(dim, constraints)
    }

    pub fn cube(dim: usize, lower: i64, upper: i64) -> Self {
        let lo = RationalVector::new(vec![int(lower); dim]);
        let hi = RationalVector::new(vec![int(upper); dim]);
        Self::bounding_box(&lo, &hi).expect("valid box")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn push(&mut self, h: HalfSpace) -> Result<()> {
        check_dim(self.dim, h.dim())?;
        self.constraints.push(h);
        Ok(())
    }

    /// Adds `<normal, x> = value` as a pair of inequalities.
    pub fn push_equality(&mut self, normal: RationalVector, value: Rational) -> Result<()> {
        self.push(HalfSpace::new(-&normal, -value.clone())?)?;
        self.push(HalfSpace::new(normal, value)?)
    }

    pub fn contains(&self, point: &RationalVector) -> Result<bool> {
        check_dim(self.dim, point.dim())?;
        Ok(self.constraints.iter().all(|h| h.contains(point)))
    }

    pub fn scaled(&self, factor: &Rational) -> HPolytope {
        HPolytope {
            dim: self.dim,
            constraints: self.constraints.iter().map(|h| h.scaled(factor)).collect(),
        }
    }

    pub fn translated(&self, shift: &RationalVector) -> HPolytope {
        HPolytope {
            dim: self.dim,
            constraints: self.constraints.iter().map(|h| h.translated(shift)).collect(),
        }
    }
}

/// Convex hull of a nonempty finite point list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VBody {
    dim: usize,
    points: Vec<RationalVector>,
}

impl VBody {
    pub fn new(points: Vec<RationalVector>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput("hull points"))?;
        let dim = first.dim();
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        Ok(VBody { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[RationalVector] {
        &self.points
    }

    pub fn scaled(&self, factor: &Rational) -> VBody {
        VBody { dim: self.dim, points: self.points.iter().map(|p| p.scale(factor)).collect() }
    }

    pub fn translated(&self, shift: &RationalVector) -> VBody {
        VBody { dim: self.dim, points: self.points.iter().map(|p| p + shift).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConvexBody {
    H(HPolytope),
    V(VBody),
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::H(p) => p.dim(),
            ConvexBody::V(v) => v.dim(),
        }
    }

    pub fn as_h(&self) -> Option<&HPolytope> {
        match self {
            ConvexBody::H(p) => Some(p),
            ConvexBody::V(_) => None,
        }
    }

    pub fn scaled(&self, factor: &Rational) -> ConvexBody {
        match self {
            ConvexBody::H(p) => ConvexBody::H(p.scaled(factor)),
            ConvexBody::V(v) => ConvexBody::V(v.scaled(factor)),
        }
    }

    pub fn translated(&self, shift: &RationalVector) -> ConvexBody {
        match self {
            ConvexBody::H(p) => ConvexBody::H(p.translated(shift)),
            ConvexBody::V(v) => ConvexBody::V(v.translated(shift)),
        }
    }
}

impl From<HPolytope> for ConvexBody {
    fn from(p: HPolytope) -> Self {
        ConvexBody::H(p)
    }
}

impl From<VBody> for ConvexBody {
    fn from(v: VBody) -> Self {
        ConvexBody::V(v)
    }
}

/// Concatenates constraint lists; nothing is dropped.
pub fn intersect(bodies: &[HPolytope]) -> Result<HPolytope> {
    let first = bodies.first().ok_or(Error::EmptyInput(
        "intersection of no bodies needs an explicit dimension (use intersect_in)",
    ))?;
    intersect_in(first.dim(), bodies)
}

/// Intersection in an explicit ambient dimension; an empty list gives all of space.
pub fn intersect_in(dim: usize, bodies: &[HPolytope]) -> Result<HPolytope> {
    let mut constraints = Vec::new();
    for b in bodies {
        check_dim(dim, b.dim())?;
        constraints.extend(b.constraints.iter().cloned());
    }
    HPolytope::new(dim, constraints)
}
