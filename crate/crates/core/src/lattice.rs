//! Lattice points and colinear lattice points in bounded convex bodies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::lp::{integer_bounding_box, Region};
use crate::geometry::{ConvexBody, RationalVector};

/// Refuse to scan boxes with more lattice points than this.
pub const MAX_BOX_POINTS: u128 = 20_000_000;

pub type LatticePoint = Vec<BigInt>;

/// `k` colinear lattice points `base + j * step`, `0 <= j < k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeWitness {
    #[serde(serialize_with = "ints")]
    pub base: LatticePoint,
    #[serde(serialize_with = "ints")]
    pub step: LatticePoint,
    pub k: usize,
}

fn ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(small) => seq.serialize_element(&small)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl LatticeWitness {
    pub fn points(&self) -> Vec<LatticePoint> {
        (0..self.k)
            .map(|j| {
                let j = BigInt::from(j);
                self.base.iter().zip(&self.step).map(|(b, s)| b + &j * s).collect()
            })
            .collect()
    }

    /// Every listed point lies in the region, exactly.
    pub fn verify(&self, region: &Region<'_>) -> Result<bool> {
        if self.step.iter().all(Zero::is_zero) {
            return Ok(false);
        }
        for p in self.points() {
            if !region.contains(&RationalVector::from_bigints(&p))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn integer_points(body: &ConvexBody) -> Result<Vec<LatticePoint>> {
    integer_points_region(&Region::new(body.dim()).with(body))
}

/// All lattice points of a bounded region in lexicographic order.
pub fn integer_points_region(region: &Region<'_>) -> Result<Vec<LatticePoint>> {
    let Some((lower, upper)) = integer_bounding_box(region)? else {
        return Ok(Vec::new());
    };
    let mut count: u128 = 1;
    for (lo, hi) in lower.iter().zip(&upper) {
        if hi < lo {
            return Ok(Vec::new());
        }
        let width = (hi - lo + 1u32).to_u128().unwrap_or(u128::MAX);
        count = count.saturating_mul(width);
    }
    if count > MAX_BOX_POINTS {
        return Err(Error::Unsupported(format!("lattice box with {count} points is too large to scan")));
    }
    let mut out = Vec::new();
    let mut current = lower.clone();
    loop {
        let point = RationalVector::from_bigints(&current);
        if region.contains(&point)? {
            out.push(current.clone());
        }
        // Odometer increment, last coordinate fastest.
        let mut axis = current.len();
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if current[axis] < upper[axis] {
                current[axis] += 1;
                current[axis + 1..].clone_from_slice(&lower[axis + 1..]);
                break;
            }
        }
    }
}

pub fn contains_k_colinear(body: &ConvexBody, k: usize) -> Result<Option<LatticeWitness>> {
    contains_k_colinear_region(&Region::new(body.dim()).with(body), k)
}

pub fn contains_k_colinear_region(region: &Region<'_>, k: usize) -> Result<Option<LatticeWitness>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let points = integer_points_region(region)?;
    Ok(colinear_in_lattice_set(&points, k))
}

/// Given all lattice points of a convex set, finds `k` colinear ones.
///
/// Two lattice points whose difference has gcd `g` bound a segment carrying
/// `g + 1` lattice points, all inside the set by convexity; conversely the
/// extreme points of any `k` colinear lattice points have `g >= k - 1`.
pub fn colinear_in_lattice_set(points: &[LatticePoint], k: usize) -> Option<LatticeWitness> {
    let first = points.first()?;
    if k == 1 {
        let mut step = vec![BigInt::zero(); first.len()];
        step[0] = BigInt::one();
        return Some(LatticeWitness { base: first.clone(), step, k });
    }
    let needed = BigInt::from(k - 1);
    for (i, x) in points.iter().enumerate() {
        for z in &points[i + 1..] {
            let diff: Vec<BigInt> = z.iter().zip(x).map(|(a, b)| a - b).collect();
            let g = diff.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            if g >= needed {
                let step = diff.iter().map(|c| c / &g).collect();
                return Some(LatticeWitness { base: x.clone(), step, k });
            }
        }
    }
    None
}

/// Reference search for `k`-term arithmetic progressions among lattice
/// points, by direct enumeration of first point and step. Cubic; for tests.
pub fn colinear_by_progressions(points: &[LatticePoint], k: usize) -> bool {
    use std::collections::BTreeSet;
    if k <= 1 {
        return !points.is_empty();
    }
    let set: BTreeSet<&LatticePoint> = points.iter().collect();
    for x in points {
        for y in points {
            if x == y {
                continue;
            }
            let step: Vec<BigInt> = y.iter().zip(x).map(|(a, b)| a - b).collect();
            let mut cur = y.clone();
            let mut run = 2;
            while run < k {
                cur = cur.iter().zip(&step).map(|(a, s)| a + s).collect();
                if !set.contains(&cur) {
                    break;
                }
                run += 1;
            }
            if run >= k {
                return true;
            }
        }
    }
    false
}

pub fn is_primitive(step: &[BigInt]) -> bool {
    step.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c)).abs().is_one()
}
