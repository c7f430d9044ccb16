//! Lifted sets `S(K)` in `R^{2d}` (and `R^{kd}`) whose nonemptiness or
//! lattice points encode width, diameter and colinearity properties of `K`.
//!
//! Coordinates of a lifted point are `(x, y)` with `x` first. Lifted
//! constraint lists keep every copied base constraint, duplicates included.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::geometry::lp::Region;
use crate::geometry::rational::{int, Rational};
use crate::geometry::{ConvexBody, HPolytope, HalfSpace, RationalVector, VBody};
use crate::lattice::{integer_points_region, LatticeWitness};
use crate::norms::PolytopeNorm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftKind {
    /// `{x in K, x + y in K, <y, v> = 1}`.
    Width,
    /// `{x in K, x + (k-1) y in K}`; the strict `<v, y> > 0` is applied to lattice candidates.
    Discrete,
    /// `{x in K, x + y in K, y in L_i}` for a facet `L_i` of a norm ball.
    BoundaryFace,
    /// `{(x_1, y_1, ..., x_{k/2}, y_{k/2}) in K^k : f = level}`.
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedBody {
    pub base_dim: usize,
    pub kind: LiftKind,
    pub body: ConvexBody,
    pub direction: Option<RationalVector>,
    pub k: Option<usize>,
    pub facet: Option<usize>,
}

/// `(x, y) -> <a, x> + <b, y>` as a lifted normal.
fn pair_normal(a: &RationalVector, b: &RationalVector) -> RationalVector {
    a.concat(b)
}

/// Adds `x_block in K` and `x_block + factor * y_block in K` for each base constraint.
fn push_pair_constraints(
    out: &mut Vec<HalfSpace>,
    base: &HPolytope,
    factor: &Rational,
) -> Result<()> {
    let d = base.dim();
    let zero = RationalVector::zeros(d);
    for h in base.constraints() {
        out.push(HalfSpace::new(pair_normal(h.normal(), &zero), h.offset().clone())?);
    }
    for h in base.constraints() {
        out.push(HalfSpace::new(pair_normal(h.normal(), &h.normal().scale(factor)), h.offset().clone())?);
    }
    Ok(())
}

fn push_equality(out: &mut Vec<HalfSpace>, normal: RationalVector, value: Rational) -> Result<()> {
    out.push(HalfSpace::new(-&normal, -value.clone())?);
    out.push(HalfSpace::new(normal, value)?);
    Ok(())
}

pub fn lift_width(body: &HPolytope, v: &RationalVector) -> Result<LiftedBody> {
    check_dim(body.dim(), v.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let d = body.dim();
    let mut cons = Vec::with_capacity(2 * body.constraints().len() + 2);
    push_pair_constraints(&mut cons, body, &Rational::one())?;
    push_equality(&mut cons, pair_normal(&RationalVector::zeros(d), v), Rational::one())?;
    Ok(LiftedBody {
        base_dim: d,
        kind: LiftKind::Width,
        body: ConvexBody::H(HPolytope::new(2 * d, cons)?),
        direction: Some(v.clone()),
        k: None,
        facet: None,
    })
}

/// Discrete lift for `k >= 2`. An H-body lifts to inequalities; a hull
/// `conv(P)` lifts to `conv{(p, (q - p)/(k - 1)) : p, q in P}`, the image of
/// `conv(P) x conv(P)` under `(x, z) -> (x, (z - x)/(k - 1))`.
pub fn lift_discrete(body: &ConvexBody, k: usize, v: &RationalVector) -> Result<LiftedBody> {
    check_dim(body.dim(), v.dim())?;
    if k < 2 {
        return Err(Error::InvalidArgument("discrete lift needs k >= 2".into()));
    }
    let d = body.dim();
    let steps = int(k as i64 - 1);
    let lifted = match body {
        ConvexBody::H(p) => {
            let mut cons = Vec::with_capacity(2 * p.constraints().len());
            push_pair_constraints(&mut cons, p, &steps)?;
            ConvexBody::H(HPolytope::new(2 * d, cons)?)
        }
        ConvexBody::V(hull) => {
            let inv = steps.recip();
            let mut pts = Vec::with_capacity(hull.points().len().pow(2));
            for p in hull.points() {
                for q in hull.points() {
                    pts.push(p.concat(&(q - p).scale(&inv)));
                }
            }
            pts.sort();
            pts.dedup();
            ConvexBody::V(VBody::new(pts)?)
        }
    };
    Ok(LiftedBody {
        base_dim: d,
        kind: LiftKind::Discrete,
        body: lifted,
        direction: Some(v.clone()),
        k: Some(k),
        facet: None,
    })
}

/// Direction `(1/p_1, ..., 1/p_d)` for distinct primes `p_i > radius`.
///
/// If `sum z_i / p_i = 0` with integer `|z_i| <= radius`, multiplying by the
/// product of the primes shows `p_i | z_i`, hence `z = 0`. This stands in for
/// a direction with algebraically independent coordinates on a finite box.
pub fn generic_direction(dim: usize, radius: u64) -> RationalVector {
    let mut primes = Vec::with_capacity(dim);
    let mut candidate = radius.max(1) + 1;
    while primes.len() < dim {
        if (2..).take_while(|f| f * f <= candidate).all(|f| !candidate.is_multiple_of(f)) && candidate > 1 {
            primes.push(candidate);
        }
        candidate += 1;
    }
    RationalVector::new(primes.iter().map(|&p| Rational::new(BigInt::one(), BigInt::from(p))).collect())
}

/// Checks `<v, z> != 0` for every nonzero integer `z` with `|z_i| <= radius`.
pub fn is_generic_on_box(v: &RationalVector, radius: i64) -> bool {
    let d = v.dim();
    let mut z = vec![-radius; d];
    loop {
        if z.iter().any(|&c| c != 0) && v.dot(&RationalVector::from_ints(&z)).is_zero() {
            return false;
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                return true;
            }
            axis -= 1;
            if z[axis] < radius {
                z[axis] += 1;
                for c in z.iter_mut().skip(axis + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}

/// First lattice point `(x, y)` (lexicographically) of the intersected
/// discrete lifts with `<v, y> > 0`, read back as `k` colinear base points.
pub fn discrete_lift_witness(lifts: &[&LiftedBody]) -> Result<Option<LatticeWitness>> {
    let first = lifts.first().ok_or(Error::EmptyInput("discrete lifts"))?;
    let d = first.base_dim;
    let (v, k) = match (&first.direction, first.k, first.kind) {
        (Some(v), Some(k), LiftKind::Discrete) => (v.clone(), k),
        _ => return Err(Error::InvalidArgument("not a discrete lift".into())),
    };
    for l in lifts {
        if l.kind != LiftKind::Discrete || l.k != Some(k) || l.direction.as_ref() != Some(&v) {
            return Err(Error::InvalidArgument("discrete lifts must share k and v".into()));
        }
    }
    let region = Region::of(2 * d, lifts.iter().map(|l| &l.body))?;
    for p in integer_points_region(&region)? {
        let y = RationalVector::from_bigints(&p[d..]);
        if v.dot(&y).is_positive() {
            return Ok(Some(LatticeWitness { base: p[..d].to_vec(), step: p[d..].to_vec(), k }));
        }
    }
    Ok(None)
}

pub fn lift_boundary(body: &HPolytope, norm: &PolytopeNorm, facet: usize) -> Result<LiftedBody> {
    check_dim(body.dim(), norm.dim())?;
    let vi = norm.facet_functional(facet)?;
    let d = body.dim();
    let zero = RationalVector::zeros(d);
    let mut cons = Vec::new();
    push_pair_constraints(&mut cons, body, &Rational::one())?;
    push_equality(&mut cons, pair_normal(&zero, &vi), Rational::one())?;
    for vj in norm.functionals() {
        cons.push(HalfSpace::new(pair_normal(&zero, vj), Rational::one())?);
        cons.push(HalfSpace::new(pair_normal(&zero, &-vj), Rational::one())?);
    }
    Ok(LiftedBody {
        base_dim: d,
        kind: LiftKind::BoundaryFace,
        body: ConvexBody::H(HPolytope::new(2 * d, cons)?),
        direction: Some(vi),
        k: None,
        facet: Some(facet),
    })
}

/// `(x, y) -> (x + y, -y)`, which swaps the slices over opposite facets.
pub fn flip(point: &RationalVector, base_dim: usize) -> RationalVector {
    let x = point.block(0, base_dim);
    let y = point.block(base_dim, base_dim);
    (&x + &y).concat(&-&y)
}

pub fn opposite_facet(norm: &PolytopeNorm, facet: usize) -> usize {
    let half = norm.functionals().len();
    (facet + half) % (2 * half)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductLift {
    pub base_dim: usize,
    pub norm: PolytopeNorm,
    pub level: Rational,
    pub body: HPolytope,
}

pub fn lift_product(body: &HPolytope, norm: &PolytopeNorm) -> Result<ProductLift> {
    lift_product_level(body, norm, &Rational::one())
}

/// `{(x_1, y_1, ..., x_{k/2}, y_{k/2}) in K^k : f = level}` with
/// `f = sum_i <y_i - x_i, v_i>`.
pub fn lift_product_level(body: &HPolytope, norm: &PolytopeNorm, level: &Rational) -> Result<ProductLift> {
    check_dim(body.dim(), norm.dim())?;
    let d = body.dim();
    let blocks = norm.facet_count();
    let total = blocks * d;
    let mut cons = Vec::with_capacity(blocks * body.constraints().len() + 2);
    for b in 0..blocks {
        for h in body.constraints() {
            let mut coeffs = vec![Rational::zero(); total];
            coeffs[b * d..(b + 1) * d].clone_from_slice(h.normal().coords());
            cons.push(HalfSpace::new(RationalVector::new(coeffs), h.offset().clone())?);
        }
    }
    push_equality(&mut cons, f_functional(norm), level.clone())?;
    Ok(ProductLift { base_dim: d, norm: norm.clone(), level: level.clone(), body: HPolytope::new(total, cons)? })
}

/// The linear functional `f` on `R^{kd}` as a coefficient vector.
pub fn f_functional(norm: &PolytopeNorm) -> RationalVector {
    let d = norm.dim();
    let mut coeffs = Vec::with_capacity(norm.facet_count() * d);
    for v in norm.functionals() {
        coeffs.extend(v.iter().map(|c| -c));
        coeffs.extend(v.iter().cloned());
    }
    RationalVector::new(coeffs)
}

/// Per-functional terms `<y_i - x_i, v_i>` of a product point.
pub fn product_terms(norm: &PolytopeNorm, point: &RationalVector) -> Vec<Rational> {
    let d = norm.dim();
    norm.functionals()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = point.block(2 * i * d, d);
            let y = point.block((2 * i + 1) * d, d);
            (&y - &x).dot(v)
        })
        .collect()
}

pub fn f_value(norm: &PolytopeNorm, point: &RationalVector) -> Rational {
    product_terms(norm, point).into_iter().sum()
}

pub fn g_value(norm: &PolytopeNorm, point: &RationalVector) -> Rational {
    product_terms(norm, point).into_iter().max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::ratio;
    use crate::lattice::colinear_in_lattice_set;

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    fn nonempty(body: &ConvexBody) -> bool {
        !Region::new(body.dim()).with(body).is_empty().unwrap()
    }

    #[test]
    fn width_lift_examples() {
        let sq = HPolytope::cube(2, 0, 1);
        let l = lift_width(&sq, &v(&[1, 0])).unwrap();
        let region = Region::new(4).with(&l.body);
        let p = region.feasible_point().unwrap().unwrap();
        assert_eq!((p[0].clone(), p[2].clone()), (int(0), int(1)));
        // Width 1 forces x_1 = 0 and y_1 = 1 on every feasible point.
        for sense in [crate::geometry::Sense::Max, crate::geometry::Sense::Min] {
            let r = region.optimize(&v(&[1, 0, 0, 0]), sense).unwrap();
            assert_eq!(r.optimum, Some(int(0)));
        }
        assert!(nonempty(&lift_width(&sq, &v(&[2, 0])).unwrap().body));
        let small = HPolytope::cube(2, 0, 1).scaled(&ratio(1, 2));
        assert!(!nonempty(&lift_width(&small, &v(&[1, 0])).unwrap().body));
    }

    #[test]
    fn discrete_lift_examples() {
        let seg = ConvexBody::V(VBody::new(vec![v(&[0, 0]), v(&[2, 0])]).unwrap());
        let dir = RationalVector::new(vec![int(1), ratio(1, 7)]);
        let l = lift_discrete(&seg, 3, &dir).unwrap();
        let w = discrete_lift_witness(&[&l]).unwrap().unwrap();
        assert_eq!((w.base.clone(), w.step.clone()), (vec![0.into(), 0.into()], vec![1.into(), 0.into()]));

        let point = ConvexBody::V(VBody::new(vec![v(&[1, 1])]).unwrap());
        let l = lift_discrete(&point, 2, &generic_direction(2, 4)).unwrap();
        assert!(discrete_lift_witness(&[&l]).unwrap().is_none());
    }

    #[test]
    fn discrete_lift_of_h_body_agrees_with_lattice_search() {
        let tri = HPolytope::new(
            2,
            vec![HalfSpace::from_ints(&[-1, 0], 0), HalfSpace::from_ints(&[0, -1], 0), HalfSpace::from_ints(&[1, 1], 3)],
        )
        .unwrap();
        let body = ConvexBody::H(tri);
        let dir = generic_direction(2, 8);
        assert!(is_generic_on_box(&dir, 8));
        for k in 2..=5 {
            let via_lift = discrete_lift_witness(&[&lift_discrete(&body, k, &dir).unwrap()]).unwrap();
            let pts = crate::lattice::integer_points(&body).unwrap();
            assert_eq!(via_lift.is_some(), colinear_in_lattice_set(&pts, k).is_some(), "k={k}");
            if let Some(w) = via_lift {
                assert!(w.verify(&Region::new(2).with(&body)).unwrap());
            }
        }
    }

    #[test]
    fn generic_direction_check() {
        assert!(!is_generic_on_box(&v(&[1, 1]), 1));
        assert!(!is_generic_on_box(&RationalVector::new(vec![ratio(1, 3), ratio(1, 5)]), 5));
        assert!(is_generic_on_box(&generic_direction(3, 5), 5));
    }

    #[test]
    fn boundary_lift_and_flip() {
        let norm = PolytopeNorm::linf(2);
        let ball = norm.unit_ball();
        for facet in 0..norm.facet_count() {
            let l = lift_boundary(&ball, &norm, facet).unwrap();
            let p = Region::new(4).with(&l.body).feasible_point().unwrap().unwrap();
            let opposite = lift_boundary(&ball, &norm, opposite_facet(&norm, facet)).unwrap();
            let q = flip(&p, 2);
            assert!(Region::new(4).with(&opposite.body).contains(&q).unwrap());
            assert_eq!(flip(&q, 2), p);
        }
        let tiny = HPolytope::cube(2, 0, 1).scaled(&ratio(1, 3));
        for facet in 0..4 {
            assert!(!nonempty(&lift_boundary(&tiny, &norm, facet).unwrap().body));
        }
    }

    #[test]
    fn product_lift_examples() {
        let norm = PolytopeNorm::linf(2);
        let ball = norm.unit_ball();
        let l = lift_product(&ball, &norm).unwrap();
        let body = ConvexBody::H(l.body.clone());
        let p = Region::new(8).with(&body).feasible_point().unwrap().unwrap();
        assert_eq!(f_value(&norm, &p), int(1));

        // A quarter ball has both widths 1/2, so f <= 1 and the lift is just the face f = 1.
        let quarter = ball.scaled(&ratio(1, 4));
        let body = ConvexBody::H(lift_product(&quarter, &norm).unwrap().body);
        assert!(nonempty(&body));
        let eighth = ball.scaled(&ratio(1, 8));
        assert!(!nonempty(&ConvexBody::H(lift_product(&eighth, &norm).unwrap().body)));

        let point = HPolytope::cube(2, 0, 0);
        assert!(!nonempty(&ConvexBody::H(lift_product(&point, &norm).unwrap().body)));
    }
}
