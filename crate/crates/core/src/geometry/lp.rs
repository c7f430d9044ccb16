//! Linear programs over intersections of convex bodies.
//!
//! H-bodies contribute their inequalities directly. Each V-body contributes
//! convex-combination weights as auxiliary nonnegative variables, so an
//! intersection of mixed bodies is still one exact LP.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::body::{ConvexBody, HPolytope, HalfSpace, VBody};
use super::rational::Rational;
use super::simplex::{Outcome, Program, Relation};
use super::vector::RationalVector;
use crate::error::{check_dim, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpResult {
    pub status: LpStatus,
    #[serde(with = "super::rational::serde_opt_str")]
    pub optimum: Option<Rational>,
    pub witness: Option<RationalVector>,
}

impl LpResult {
    fn infeasible() -> Self {
        LpResult { status: LpStatus::Infeasible, optimum: None, witness: None }
    }

    fn unbounded() -> Self {
        LpResult { status: LpStatus::Unbounded, optimum: None, witness: None }
    }

    fn optimal(optimum: Rational, witness: RationalVector) -> Self {
        LpResult { status: LpStatus::Optimal, optimum: Some(optimum), witness: Some(witness) }
    }
}

/// Optimizes a linear objective over an H-polytope.
pub fn lp_solve(objective: &RationalVector, sense: Sense, body: &HPolytope) -> Result<LpResult> {
    check_dim(body.dim(), objective.dim())?;
    let wrapped = ConvexBody::H(body.clone());
    Region::new(body.dim()).with(&wrapped).optimize(objective, sense)
}

/// Exact membership: substitution for H-bodies, a convex-weight LP for V-bodies.
pub fn member(point: &RationalVector, body: &ConvexBody) -> Result<bool> {
    check_dim(body.dim(), point.dim())?;
    match body {
        ConvexBody::H(p) => p.contains(point),
        ConvexBody::V(v) => Ok(in_hull(point, v)),
    }
}

fn in_hull(point: &RationalVector, body: &VBody) -> bool {
    if body.points().iter().any(|p| p == point) {
        return true;
    }
    let dim = body.dim();
    let n = body.points().len();
    let mut program = Program::new(vec![false; n]);
    program.push(vec![Rational::one(); n], Relation::Eq, Rational::one());
    for k in 0..dim {
        let coeffs = body.points().iter().map(|p| p[k].clone()).collect();
        program.push(coeffs, Relation::Eq, point[k].clone());
    }
    !matches!(program.solve(), Outcome::Infeasible)
}

/// The intersection of a list of bodies in a fixed ambient dimension.
/// With no bodies it is all of space.
#[derive(Clone, Debug)]
pub struct Region<'a> {
    dim: usize,
    bodies: Vec<&'a ConvexBody>,
}

impl<'a> Region<'a> {
    pub fn new(dim: usize) -> Self {
        Region { dim, bodies: Vec::new() }
    }

    pub fn of(dim: usize, bodies: impl IntoIterator<Item = &'a ConvexBody>) -> Result<Self> {
        let mut region = Region::new(dim);
        for b in bodies {
            check_dim(dim, b.dim())?;
            region.bodies.push(b);
        }
        Ok(region)
    }

    pub fn with(mut self, body: &'a ConvexBody) -> Self {
        assert_eq!(body.dim(), self.dim, "region body dimension");
        self.bodies.push(body);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bodies(&self) -> &[&'a ConvexBody] {
        &self.bodies
    }

    /// True when every body is an H-polytope.
    pub fn is_polyhedral(&self) -> bool {
        self.bodies.iter().all(|b| matches!(b, ConvexBody::H(_)))
    }

    /// All constraints of the H-bodies, concatenated; `None` if a V-body is present.
    pub fn to_hpolytope(&self) -> Option<HPolytope> {
        let mut constraints = Vec::new();
        for b in &self.bodies {
            constraints.extend(b.as_h()?.constraints().iter().cloned());
        }
        Some(HPolytope::new(self.dim, constraints).expect("dimensions checked"))
    }

    pub fn contains(&self, point: &RationalVector) -> Result<bool> {
        for b in &self.bodies {
            if !member(point, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn optimize(&self, objective: &RationalVector, sense: Sense) -> Result<LpResult> {
        check_dim(self.dim, objective.dim())?;
        if let [ConvexBody::V(v)] = self.bodies.as_slice() {
            return Ok(optimize_over_points(v.points(), objective, sense));
        }
        let mut program = self.program();
        for (k, c) in objective.iter().enumerate() {
            program.objective[k] = match sense {
                Sense::Max => c.clone(),
                Sense::Min => -c,
            };
        }
        Ok(match program.solve() {
            Outcome::Infeasible => LpResult::infeasible(),
            Outcome::Unbounded => LpResult::unbounded(),
            Outcome::Optimal { point, .. } => {
                let witness = RationalVector::new(point[..self.dim].to_vec());
                // Recompute from the witness so optimum and witness agree exactly.
                let optimum = objective.dot(&witness);
                LpResult::optimal(optimum, witness)
            }
        })
    }

    pub fn feasible_point(&self) -> Result<Option<RationalVector>> {
        let r = self.optimize(&RationalVector::zeros(self.dim), Sense::Max)?;
        Ok(r.witness)
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.feasible_point()?.is_none())
    }

    fn program(&self) -> Program {
        let dim = self.dim;
        let n_weights: usize = self
            .bodies
            .iter()
            .map(|b| match b {
                ConvexBody::V(v) => v.points().len(),
                ConvexBody::H(_) => 0,
            })
            .sum();
        let n = dim + n_weights;
        let mut free = vec![true; dim];
        free.extend(std::iter::repeat_n(false, n_weights));
        let mut program = Program::new(free);
        let mut offset = dim;
        for b in &self.bodies {
            match b {
                ConvexBody::H(p) => {
                    for h in p.constraints() {
                        let mut coeffs = h.normal().coords().to_vec();
                        coeffs.resize(n, Rational::zero());
                        program.push(coeffs, Relation::Le, h.offset().clone());
                    }
                }
                ConvexBody::V(v) => {
                    let r = v.points().len();
                    let mut sum = vec![Rational::zero(); n];
                    sum[offset..offset + r].iter_mut().for_each(|c| *c = Rational::one());
                    program.push(sum, Relation::Eq, Rational::one());
                    for k in 0..dim {
                        let mut coeffs = vec![Rational::zero(); n];
                        coeffs[k] = Rational::one();
                        for (j, p) in v.points().iter().enumerate() {
                            coeffs[offset + j] = -p[k].clone();
                        }
                        program.push(coeffs, Relation::Eq, Rational::zero());
                    }
                    offset += r;
                }
            }
        }
        program
    }
}

fn optimize_over_points(points: &[RationalVector], objective: &RationalVector, sense: Sense) -> LpResult {
    let mut best: Option<(Rational, &RationalVector)> = None;
    for p in points {
        let value = objective.dot(p);
        let better = match &best {
            None => true,
            Some((b, _)) => match sense {
                Sense::Max => value > *b,
                Sense::Min => value < *b,
            },
        };
        if better {
            best = Some((value, p));
        }
    }
    let (value, p) = best.expect("V-bodies are nonempty");
    LpResult::optimal(value, p.clone())
}

/// Drops duplicate and redundant constraints. A constraint is redundant when
/// maximizing its normal over the others stays within its offset. Empty
/// polytopes are returned unchanged.
pub fn irredundant(poly: &HPolytope) -> Result<HPolytope> {
    let mut seen = std::collections::BTreeSet::new();
    let mut kept: Vec<HalfSpace> = Vec::new();
    for h in poly.constraints() {
        let scale = h.normal().max_abs().recip();
        let key = (h.normal().scale(&scale), &scale * h.offset());
        if seen.insert(key) {
            kept.push(h.clone());
        }
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<HalfSpace> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h.clone()).collect();
        let rest = HPolytope::new(poly.dim(), others)?;
        let r = lp_solve(kept[i].normal(), Sense::Max, &rest)?;
        match r.status {
            LpStatus::Infeasible => return Ok(poly.clone()),
            LpStatus::Optimal if r.optimum.as_ref().expect("optimal") <= kept[i].offset() => {
                kept.remove(i);
            }
            _ => i += 1,
        }
    }
    HPolytope::new(poly.dim(), kept)
}

/// Smallest integer box containing the region, from exact support values.
pub fn integer_bounding_box(region: &Region<'_>) -> Result<Option<(Vec<num_bigint::BigInt>, Vec<num_bigint::BigInt>)>> {
    let mut lower = Vec::with_capacity(region.dim());
    let mut upper = Vec::with_capacity(region.dim());
    for i in 0..region.dim() {
        let e = RationalVector::unit(region.dim(), i);
        let hi = region.optimize(&e, Sense::Max)?;
        match hi.status {
            LpStatus::Infeasible => return Ok(None),
            LpStatus::Unbounded => return Err(Error::Unbounded),
            LpStatus::Optimal => {}
        }
        let lo = region.optimize(&e, Sense::Min)?;
        if lo.status == LpStatus::Unbounded {
            return Err(Error::Unbounded);
        }
        lower.push(super::rational::ceil(lo.optimum.as_ref().expect("optimal")));
        upper.push(super::rational::floor(hi.optimum.as_ref().expect("optimal")));
    }
    Ok(Some((lower, upper)))
}
