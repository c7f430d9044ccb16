use std::collections::BTreeSet;

use super::body::{ConvexBody, HPolytope};
use super::linalg::solve_square;
use super::lp::{LpStatus, Region, Sense};
use super::vector::RationalVector;
use crate::combinatorics::KSubsets;
use crate::error::{Error, Result};

/// Exact vertex set of a bounded H-polytope, sorted and deduplicated.
///
/// Every d-subset of constraints with a nonsingular normal matrix yields a
/// candidate; candidates satisfying all constraints are vertices. Meant for
/// small dimension and a few dozen constraints.
pub fn vertices(body: &HPolytope) -> Result<Vec<RationalVector>> {
    let wrapped = ConvexBody::H(body.clone());
    let region = Region::new(body.dim()).with(&wrapped);
    match check_bounded(&region)? {
        Boundedness::Empty => return Ok(Vec::new()),
        Boundedness::Unbounded => return Err(Error::Unbounded),
        Boundedness::Bounded => {}
    }
    Ok(enumerate(body))
}

pub(crate) enum Boundedness {
    Empty,
    Unbounded,
    Bounded,
}

pub(crate) fn check_bounded(region: &Region<'_>) -> Result<Boundedness> {
    for i in 0..region.dim() {
        let e = RationalVector::unit(region.dim(), i);
        for sense in [Sense::Max, Sense::Min] {
            match region.optimize(&e, sense)?.status {
                LpStatus::Infeasible => return Ok(Boundedness::Empty),
                LpStatus::Unbounded => return Ok(Boundedness::Unbounded),
                LpStatus::Optimal => {}
            }
        }
    }
    Ok(Boundedness::Bounded)
}

/// Candidate enumeration without the boundedness pre-check.
pub(crate) fn enumerate(body: &HPolytope) -> Vec<RationalVector> {
    let d = body.dim();
    let cons = body.constraints();
    let mut found = BTreeSet::new();
    for subset in KSubsets::new(cons.len(), d) {
        let a: Vec<_> = subset.iter().map(|&i| cons[i].normal().coords().to_vec()).collect();
        let b: Vec<_> = subset.iter().map(|&i| cons[i].offset().clone()).collect();
        let Some(x) = solve_square(&a, &b) else {
            continue;
        };
        let x = RationalVector::new(x);
        if found.contains(&x) {
            continue;
        }
        if cons.iter().all(|h| h.contains(&x)) {
            found.insert(x);
        }
    }
    found.into_iter().collect()
}
