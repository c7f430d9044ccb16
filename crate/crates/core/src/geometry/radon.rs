use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::linalg::nullspace_vector;
use super::rational::Rational;
use super::vector::RationalVector;
use crate::error::{check_dim, Error, Result};

/// Two disjoint index classes whose hulls share `witness`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadonPartition {
    pub part_a: Vec<RationalVector>,
    pub part_b: Vec<RationalVector>,
    pub indices_a: Vec<usize>,
    pub indices_b: Vec<usize>,
    pub witness: RationalVector,
}

/// Radon partition from an exact affine dependence `sum l_i p_i = 0`,
/// `sum l_i = 0`. Positive weights go to A, negative to B; points with a zero
/// weight join A.
pub fn radon_partition(points: &[RationalVector]) -> Result<RadonPartition> {
    let first = points.first().ok_or(Error::EmptyInput("radon points"))?;
    let dim = first.dim();
    for p in points {
        check_dim(dim, p.dim())?;
    }
    if points.len() < dim + 2 {
        return Err(Error::TooFewPoints { needed: dim + 2, found: points.len() });
    }
    let n = points.len();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|k| points.iter().map(|p| p[k].clone()).collect())
        .collect();
    rows.push(vec![Rational::one(); n]);
    let weights = nullspace_vector(&rows, n).expect("n > dim + 1 columns always leave a kernel");

    let mut indices_a = Vec::new();
    let mut indices_b = Vec::new();
    let mut total = Rational::zero();
    let mut acc = RationalVector::zeros(dim);
    for (i, w) in weights.iter().enumerate() {
        if w.is_negative() {
            indices_b.push(i);
        } else {
            indices_a.push(i);
            if w.is_positive() {
                total += w;
                acc = &acc + &points[i].scale(w);
            }
        }
    }
    let witness = acc.scale(&total.recip());
    Ok(RadonPartition {
        part_a: indices_a.iter().map(|&i| points[i].clone()).collect(),
        part_b: indices_b.iter().map(|&i| points[i].clone()).collect(),
        indices_a,
        indices_b,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::body::{ConvexBody, VBody};
    use crate::geometry::lp::member;
    use crate::geometry::rational::ratio;

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    #[test]
    fn square_diagonals() {
        let pts = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let r = radon_partition(&pts).unwrap();
        let mut a = r.part_a.clone();
        let mut b = r.part_b.clone();
        a.sort();
        b.sort();
        let (a, b) = if a.contains(&v(&[0, 0])) { (a, b) } else { (b, a) };
        assert_eq!(a, vec![v(&[0, 0]), v(&[1, 1])]);
        assert_eq!(b, vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(r.witness, RationalVector::new(vec![ratio(1, 2), ratio(1, 2)]));
    }

    #[test]
    fn colinear_triple() {
        let pts = [v(&[0, 0]), v(&[1, 0]), v(&[2, 0]), v(&[0, 1])];
        let r = radon_partition(&pts).unwrap();
        assert_eq!(r.witness, v(&[1, 0]));
        for part in [&r.part_a, &r.part_b] {
            let hull = ConvexBody::V(VBody::new(part.clone()).unwrap());
            assert!(member(&r.witness, &hull).unwrap());
        }
    }

    #[test]
    fn too_few_points() {
        let pts = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1])];
        assert_eq!(radon_partition(&pts), Err(Error::TooFewPoints { needed: 4, found: 3 }));
    }
}
