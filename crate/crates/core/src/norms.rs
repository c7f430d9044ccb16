//! Polytope norms, directional widths and exact diameters.
//!
//! A centrally symmetric polytope `{x : |<x, v_i>| <= 1}` defines the norm
//! `rho(x) = max_i |<x, v_i>|`, so the rho-diameter of a set is the largest
//! of its `v_i`-widths. Each width is two exact LPs.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::linalg::rank;
use crate::geometry::lp::{LpStatus, Region, Sense};
use crate::geometry::rational::{int, serde_str, Rational};
use crate::geometry::vertices::{check_bounded, enumerate, Boundedness};
use crate::geometry::{ConvexBody, HPolytope, HalfSpace, RationalVector};

/// Unit ball `{x : |<x, v_i>| <= 1 for all i}`; one functional per pair of
/// opposite facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NormFile", into = "NormFile")]
pub struct PolytopeNorm {
    name: String,
    dim: usize,
    functionals: Vec<RationalVector>,
}

#[derive(Serialize, Deserialize)]
struct NormFile {
    name: String,
    functionals: Vec<RationalVector>,
}

impl TryFrom<NormFile> for PolytopeNorm {
    type Error = Error;

    fn try_from(f: NormFile) -> Result<Self> {
        PolytopeNorm::new(&f.name, f.functionals)
    }
}

impl From<PolytopeNorm> for NormFile {
    fn from(n: PolytopeNorm) -> Self {
        NormFile { name: n.name, functionals: n.functionals }
    }
}

impl PolytopeNorm {
    /// Rejects functionals that do not span, since the ball would be unbounded.
    pub fn new(name: &str, functionals: Vec<RationalVector>) -> Result<Self> {
        let first = functionals
            .first()
            .ok_or_else(|| Error::InvalidNorm("no facet functionals".into()))?;
        let dim = first.dim();
        for v in &functionals {
            check_dim(dim, v.dim())?;
            if v.is_zero() {
                return Err(Error::InvalidNorm("zero facet functional".into()));
            }
        }
        let rows: Vec<_> = functionals.iter().map(|v| v.coords().to_vec()).collect();
        if rank(&rows) < dim {
            return Err(Error::InvalidNorm(format!(
                "functionals span less than dimension {dim}; the unit ball is unbounded"
            )));
        }
        Ok(PolytopeNorm { name: name.to_string(), dim, functionals })
    }

    /// Max-coordinate norm: functionals `e_1, ..., e_d`.
    pub fn linf(dim: usize) -> Self {
        let fs = (0..dim).map(|i| RationalVector::unit(dim, i)).collect();
        PolytopeNorm::new("linf", fs).expect("unit vectors span")
    }

    /// Sum-of-absolute-values norm: functionals `(1, +-1, ..., +-1)`.
    pub fn l1(dim: usize) -> Self {
        let fs = (0..1usize << (dim - 1))
            .map(|mask| {
                let coords = (0..dim)
                    .map(|i| if i > 0 && mask & (1 << (i - 1)) != 0 { int(-1) } else { int(1) })
                    .collect();
                RationalVector::new(coords)
            })
            .collect();
        PolytopeNorm::new("l1", fs).expect("sign vectors span")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functionals(&self) -> &[RationalVector] {
        &self.functionals
    }

    /// Number of facets of the unit ball, `k = 2 * |functionals|`.
    pub fn facet_count(&self) -> usize {
        2 * self.functionals.len()
    }

    /// Outer functional of facet `i` in `0..k`; facet `i + k/2` is opposite to `i`.
    pub fn facet_functional(&self, i: usize) -> Result<RationalVector> {
        let half = self.functionals.len();
        match i {
            i if i < half => Ok(self.functionals[i].clone()),
            i if i < 2 * half => Ok(-&self.functionals[i - half]),
            _ => Err(Error::InvalidArgument(format!("facet index {i} out of range 0..{}", 2 * half))),
        }
    }

    pub fn unit_ball(&self) -> HPolytope {
        let mut cons = Vec::with_capacity(self.facet_count());
        for i in 0..self.facet_count() {
            let v = self.facet_functional(i).expect("in range");
            cons.push(HalfSpace::new(v, int(1)).expect("nonzero"));
        }
        HPolytope::new(self.dim, cons).expect("dims agree")
    }

    /// The same ball with every functional multiplied by `factor`.
    pub fn scaled_functionals(&self, factor: &Rational) -> PolytopeNorm {
        PolytopeNorm {
            name: self.name.clone(),
            dim: self.dim,
            functionals: self.functionals.iter().map(|v| v.scale(factor)).collect(),
        }
    }
}

pub fn rho(norm: &PolytopeNorm, x: &RationalVector) -> Result<Rational> {
    check_dim(norm.dim(), x.dim())?;
    Ok(norm
        .functionals()
        .iter()
        .map(|v| v.dot(x).abs())
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Outcome of a width or diameter query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "certificate", rename_all = "lowercase")]
pub enum Extent<T> {
    Finite(T),
    Unbounded,
    Empty,
}

impl<T> Extent<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Extent::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Extent<U> {
        match self {
            Extent::Finite(t) => Extent::Finite(f(t)),
            Extent::Unbounded => Extent::Unbounded,
            Extent::Empty => Extent::Empty,
        }
    }
}

/// A width or diameter value with two attaining points: `<x - y, direction> = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthCertificate {
    #[serde(with = "serde_str")]
    pub value: Rational,
    pub attaining_pair: (RationalVector, RationalVector),
    pub direction: RationalVector,
    /// Index of the maximizing functional, for diameters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<usize>,
}

pub fn v_width(body: &HPolytope, v: &RationalVector) -> Result<Extent<WidthCertificate>> {
    let wrapped = ConvexBody::H(body.clone());
    v_width_region(&Region::new(body.dim()).with(&wrapped), v)
}

pub fn v_width_region(region: &Region<'_>, v: &RationalVector) -> Result<Extent<WidthCertificate>> {
    check_dim(region.dim(), v.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let hi = region.optimize(v, Sense::Max)?;
    match hi.status {
        LpStatus::Infeasible => return Ok(Extent::Empty),
        LpStatus::Unbounded => return Ok(Extent::Unbounded),
        LpStatus::Optimal => {}
    }
    let lo = region.optimize(v, Sense::Min)?;
    if lo.status == LpStatus::Unbounded {
        return Ok(Extent::Unbounded);
    }
    let (top, bottom) = (hi.witness.expect("optimal"), lo.witness.expect("optimal"));
    let value = hi.optimum.expect("optimal") - lo.optimum.expect("optimal");
    Ok(Extent::Finite(WidthCertificate {
        value,
        attaining_pair: (top, bottom),
        direction: v.clone(),
        functional: None,
    }))
}

pub fn rho_diameter(body: &HPolytope, norm: &PolytopeNorm) -> Result<Extent<WidthCertificate>> {
    let wrapped = ConvexBody::H(body.clone());
    rho_diameter_region(&Region::new(body.dim()).with(&wrapped), norm)
}

/// Largest facet-functional width; ties keep the lowest functional index.
pub fn rho_diameter_region(region: &Region<'_>, norm: &PolytopeNorm) -> Result<Extent<WidthCertificate>> {
    check_dim(region.dim(), norm.dim())?;
    let mut best: Option<WidthCertificate> = None;
    for (i, v) in norm.functionals().iter().enumerate() {
        match v_width_region(region, v)? {
            Extent::Empty => return Ok(Extent::Empty),
            Extent::Unbounded => return Ok(Extent::Unbounded),
            Extent::Finite(mut cert) => {
                if best.as_ref().is_none_or(|b| cert.value > b.value) {
                    cert.functional = Some(i);
                    best = Some(cert);
                }
            }
        }
    }
    Ok(Extent::Finite(best.expect("norms have at least one functional")))
}

/// Euclidean diameter carried exactly as its square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquaredDiameter {
    #[serde(with = "serde_str")]
    pub squared: Rational,
    pub attaining_pair: (RationalVector, RationalVector),
}

impl SquaredDiameter {
    /// Whether the diameter is at least `threshold >= 0`, compared on squares.
    pub fn at_least(&self, threshold: &Rational) -> bool {
        self.squared >= threshold * threshold
    }
}

pub fn l2_diameter_exact(body: &HPolytope) -> Result<Extent<SquaredDiameter>> {
    let wrapped = ConvexBody::H(body.clone());
    l2_diameter_region(&Region::new(body.dim()).with(&wrapped))
}

/// Euclidean diameter of a polyhedral region over its vertex pairs.
pub fn l2_diameter_region(region: &Region<'_>) -> Result<Extent<SquaredDiameter>> {
    if let [ConvexBody::V(hull)] = region.bodies() {
        return Ok(Extent::Finite(max_pair_distance(hull.points()).expect("hulls are nonempty")));
    }
    let poly = region
        .to_hpolytope()
        .ok_or_else(|| Error::Unsupported("Euclidean diameter of a region with hull bodies".into()))?;
    match check_bounded(region)? {
        Boundedness::Empty => return Ok(Extent::Empty),
        Boundedness::Unbounded => return Ok(Extent::Unbounded),
        Boundedness::Bounded => {}
    }
    let vs = enumerate(&poly);
    Ok(Extent::Finite(max_pair_distance(&vs).expect("bounded nonempty polytopes have vertices")))
}

/// Farthest pair by squared distance; ties keep the lexicographically first pair.
pub fn max_pair_distance(points: &[RationalVector]) -> Option<SquaredDiameter> {
    let first = points.first()?;
    let mut best = SquaredDiameter { squared: Rational::zero(), attaining_pair: (first.clone(), first.clone()) };
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d2 = (p - q).norm_squared();
            if d2 > best.squared {
                best = SquaredDiameter { squared: d2, attaining_pair: (p.clone(), q.clone()) };
            }
        }
    }
    Some(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpExponent {
    One,
    Two,
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormRelationReport {
    pub p: LpExponent,
    pub dim: usize,
    #[serde(with = "serde_str")]
    pub linf_diameter: Rational,
    /// The l_p diameter, or its square when `p = 2`.
    #[serde(with = "serde_str")]
    pub lp_diameter: Rational,
    pub lp_diameter_is_squared: bool,
    /// `linf-diam >= d^(-1/p) * lp-diam`, decided exactly.
    pub holds: bool,
}

/// Checks `linf-diam >= d^(-1/p) * lp-diam` on one bounded polytope.
pub fn lp_norm_relation_check(body: &HPolytope, p: LpExponent, d: usize) -> Result<NormRelationReport> {
    check_dim(body.dim(), d)?;
    let finite = |e: Extent<WidthCertificate>| match e {
        Extent::Finite(c) => Ok(c.value),
        Extent::Unbounded => Err(Error::Unbounded),
        Extent::Empty => Err(Error::Empty),
    };
    let linf = finite(rho_diameter(body, &PolytopeNorm::linf(d))?)?;
    let dr = int(d as i64);
    let (lp, squared, holds) = match p {
        LpExponent::Infinity => (linf.clone(), false, true),
        LpExponent::One => {
            let l1 = finite(rho_diameter(body, &PolytopeNorm::l1(d))?)?;
            let holds = &linf * &dr >= l1;
            (l1, false, holds)
        }
        LpExponent::Two => {
            let l2 = match l2_diameter_exact(body)? {
                Extent::Finite(s) => s.squared,
                Extent::Unbounded => return Err(Error::Unbounded),
                Extent::Empty => return Err(Error::Empty),
            };
            let holds = &linf * &linf * &dr >= l2;
            (l2, true, holds)
        }
    };
    Ok(NormRelationReport { p, dim: d, linf_diameter: linf, lp_diameter: lp, lp_diameter_is_squared: squared, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::ratio;

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    fn segment(a: &[i64], b: &[i64]) -> HPolytope {
        // Segment as the intersection of its line (two inequalities) and two end caps.
        let (a, b) = (v(a), v(b));
        let dir = &b - &a;
        let normal = RationalVector::new(vec![-dir[1].clone(), dir[0].clone()]);
        let mut p = HPolytope::whole_space(2);
        p.push_equality(normal.clone(), normal.dot(&a)).unwrap();
        p.push(HalfSpace::new(dir.clone(), dir.dot(&b)).unwrap()).unwrap();
        p.push(HalfSpace::new(-&dir, -dir.dot(&a)).unwrap()).unwrap();
        p
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&PolytopeNorm::linf(2), &v(&[3, -4])).unwrap(), int(4));
        assert_eq!(rho(&PolytopeNorm::l1(2), &v(&[3, -4])).unwrap(), int(7));
        assert_eq!(rho(&PolytopeNorm::l1(3), &v(&[0, 0, 0])).unwrap(), int(0));
        assert_eq!(rho(&PolytopeNorm::l1(3), &v(&[1, -2, 3])).unwrap(), int(6));
    }

    #[test]
    fn non_spanning_norm_rejected() {
        let r = PolytopeNorm::new("custom", vec![v(&[1, 1]), v(&[2, 2])]);
        assert!(matches!(r, Err(Error::InvalidNorm(_))));
    }

    #[test]
    fn widths() {
        let sq = HPolytope::cube(2, 0, 1);
        assert_eq!(v_width(&sq, &v(&[1, 0])).unwrap().finite().unwrap().value, int(1));
        let big = HPolytope::cube(2, -1, 1);
        let cert = v_width(&big, &v(&[1, 1])).unwrap();
        let cert = cert.finite().unwrap();
        assert_eq!(cert.value, int(4));
        let (x, y) = &cert.attaining_pair;
        assert_eq!((x - y).dot(&v(&[1, 1])), int(4));
        assert!(v_width(&sq, &v(&[0, 0])).is_err());
        let half = HPolytope::new(2, vec![HalfSpace::from_ints(&[1, 0], 0)]).unwrap();
        assert_eq!(v_width(&half, &v(&[1, 0])).unwrap(), Extent::Unbounded);
    }

    #[test]
    fn diameters() {
        for norm in [PolytopeNorm::linf(2), PolytopeNorm::l1(2), PolytopeNorm::l1(3)] {
            let d = rho_diameter(&norm.unit_ball(), &norm).unwrap();
            assert_eq!(d.finite().unwrap().value, int(2));
        }
        let rect = HPolytope::bounding_box(&v(&[0, 0]), &v(&[1, 3])).unwrap();
        let d = rho_diameter(&rect, &PolytopeNorm::linf(2)).unwrap();
        assert_eq!(d.finite().unwrap().value, int(3));
        assert_eq!(d.finite().unwrap().functional, Some(1));
    }

    #[test]
    fn euclidean_diameters() {
        let sq = l2_diameter_exact(&HPolytope::cube(2, 0, 1)).unwrap();
        assert_eq!(sq.finite().unwrap().squared, int(2));
        let seg = l2_diameter_exact(&segment(&[0, 0], &[3, 4])).unwrap();
        assert_eq!(seg.finite().unwrap().squared, int(25));
        assert!(seg.finite().unwrap().at_least(&int(5)));
        assert!(!seg.finite().unwrap().at_least(&ratio(501, 100)));
    }

    #[test]
    fn norm_relations() {
        let sq = HPolytope::cube(2, 0, 1);
        let r = lp_norm_relation_check(&sq, LpExponent::One, 2).unwrap();
        assert_eq!((r.lp_diameter.clone(), r.linf_diameter.clone(), r.holds), (int(2), int(1), true));
        let seg = segment(&[0, 0], &[1, 1]);
        let r = lp_norm_relation_check(&seg, LpExponent::One, 2).unwrap();
        assert_eq!(&r.linf_diameter * int(2), r.lp_diameter);
        assert!(r.holds);
        let r2 = lp_norm_relation_check(&seg, LpExponent::Two, 2).unwrap();
        assert!(r2.holds && r2.lp_diameter_is_squared);
    }
}
