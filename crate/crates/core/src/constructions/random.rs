use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::rational::{int, ratio, Rational};
use crate::geometry::{ConvexBody, HPolytope, HalfSpace, RationalVector, VBody};

/// Shape parameters for random H-polytopes around a shared center.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomShape {
    /// Half-widths of the bounding box are drawn from `[min_radius, max_radius]`.
    pub min_radius: f64,
    pub max_radius: f64,
    /// Extra random cuts per member.
    pub cuts: usize,
    /// Largest absolute entry of a cut normal.
    pub normal_range: i64,
    /// Denominator grid for radii, depths and centers.
    pub denominator: i64,
}

impl RandomShape {
    /// Lattice-scale members: most contain the center and a neighbor or two.
    pub fn lattice() -> Self {
        RandomShape { min_radius: 0.8, max_radius: 2.5, cuts: 1, normal_range: 2, denominator: 4 }
    }
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { min_radius: 0.3, max_radius: 1.5, cuts: 2, normal_range: 3, denominator: 12 }
    }
}

/// Uniform on the grid `{lo, lo + 1/den, ..., hi}`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, den: i64) -> Rational {
    let a = (lo * den as f64).ceil() as i64;
    let b = (hi * den as f64).floor() as i64;
    ratio(rng.random_range(a..=b.max(a)), den)
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, lo: f64, hi: f64, den: i64) -> RationalVector {
    RationalVector::new((0..dim).map(|_| random_rational(rng, lo, hi, den)).collect())
}

/// Nonzero integer vector with entries in `[-range, range]`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> RationalVector {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.random_range(-range..=range)).collect();
        if v.iter().any(|&c| c != 0) {
            return RationalVector::from_ints(&v);
        }
    }
}

/// A box around `center` cut by random half-spaces that keep `center` inside.
pub fn random_polytope<R: Rng + ?Sized>(
    rng: &mut R,
    center: &RationalVector,
    shape: &RandomShape,
) -> Result<HPolytope> {
    if shape.min_radius <= 0.0 || shape.max_radius < shape.min_radius || shape.denominator <= 0 {
        return Err(Error::InvalidArgument("bad random shape".into()));
    }
    let d = center.dim();
    let mut cons = Vec::with_capacity(2 * d + shape.cuts);
    for i in 0..d {
        let e = RationalVector::unit(d, i);
        let up = random_rational(rng, shape.min_radius, shape.max_radius, shape.denominator);
        let down = random_rational(rng, shape.min_radius, shape.max_radius, shape.denominator);
        cons.push(HalfSpace::new(e.clone(), &center[i] + up)?);
        cons.push(HalfSpace::new(-&e, -&center[i] + down)?);
    }
    for _ in 0..shape.cuts {
        let a = random_direction(rng, d, shape.normal_range);
        let depth = random_rational(rng, shape.min_radius, shape.max_radius, shape.denominator) * a.sum_abs();
        let b = a.dot(center) + depth / int(2);
        cons.push(HalfSpace::new(a, b)?);
    }
    HPolytope::new(d, cons)
}

/// `n` random polytopes sharing a random center in `[-1, 1]^d`, ids `prefix0..`.
pub fn random_h_family<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n: usize,
    shape: &RandomShape,
) -> Result<Family> {
    let center = random_point(rng, dim, -1.0, 1.0, shape.denominator);
    let bodies = (0..n)
        .map(|_| random_polytope(rng, &center, shape).map(ConvexBody::H))
        .collect::<Result<Vec<_>>>()?;
    Family::from_bodies(dim, "B", bodies)
}

/// Convex hull of `count` random grid points in `[lo, hi]^d`.
pub fn random_vbody<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize, lo: f64, hi: f64, den: i64) -> Result<VBody> {
    VBody::new((0..count).map(|_| random_point(rng, dim, lo, hi, den)).collect())
}

/// `count` points for a Radon partition, with small integer coordinates so
/// that repeated and affinely dependent configurations also occur.
pub fn random_radon_points<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize, range: i64, den: i64) -> Vec<RationalVector> {
    (0..count)
        .map(|_| RationalVector::new((0..dim).map(|_| ratio(rng.random_range(-range..=range), den)).collect()))
        .collect()
}

/// Random polytopes around a shared integer center in `[-3, 3]^d`.
pub fn random_lattice_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize, shape: &RandomShape) -> Result<Family> {
    let center = RationalVector::new((0..dim).map(|_| int(rng.random_range(-3..=3))).collect());
    let bodies = (0..n)
        .map(|_| random_polytope(rng, &center, shape).map(ConvexBody::H))
        .collect::<Result<Vec<_>>>()?;
    Family::from_bodies(dim, "L", bodies)
}

/// Nonzero direction with entries on the `1/den` grid in `[-1, 1]`.
pub fn random_rational_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize, den: i64) -> RationalVector {
    loop {
        let v = random_point(rng, dim, -1.0, 1.0, den);
        if !v.iter().all(Zero::is_zero) {
            return v;
        }
    }
}
