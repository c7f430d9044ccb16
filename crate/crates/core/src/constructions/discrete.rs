use num_bigint::BigInt;
use serde::Serialize;

use crate::engine::{check_helly, EngineConfig, Evaluator, Predicate};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::lp::{member, Region};
use crate::geometry::{ConvexBody, RationalVector, VBody};
use crate::lattice::LatticePoint;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscreteTightReport {
    pub dim: usize,
    pub members: usize,
    /// Each member omits exactly its own point of `R` and keeps the rest of `Q` and `R`.
    pub membership_ok: bool,
    /// Subfamilies missing one member, each holding three colinear lattice points.
    pub subsets_checked: u64,
    pub subsets_with_three_colinear: u64,
    pub full_has_three_colinear: bool,
    #[serde(serialize_with = "ser_points")]
    pub full_lattice_points: Vec<LatticePoint>,
    /// The lattice points of the full intersection are exactly `{1, 2}^d`.
    pub full_lattice_is_q: bool,
    pub verified: bool,
}

fn ser_points<S: serde::Serializer>(pts: &[LatticePoint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(pts.iter().map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>()))
}

/// All of `{lo..=hi}^d` in lexicographic order.
fn grid(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|p| (lo..=hi).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out
}

/// `Q = {1,2}^d` and `R`, the points of `{0,1,2,3}^d` with exactly one
/// coordinate in `{0, 3}`.
pub fn discrete_tight_points(d: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let q = grid(d, 1, 2);
    let r = grid(d, 0, 3).into_iter().filter(|p| p.iter().filter(|&&c| c == 0 || c == 3).count() == 1).collect();
    (q, r)
}

/// The `d 2^d` hulls `conv(Q u R \ {x})`, `x` in `R`: every subfamily
/// missing one member contains three colinear lattice points, the whole
/// family does not.
pub fn gen_discrete_tight(d: usize, cfg: &EngineConfig) -> Result<(Family, DiscreteTightReport)> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let (q, r) = discrete_tight_points(d);
    let mut bodies = Vec::with_capacity(r.len());
    for x in &r {
        let pts = q.iter().chain(r.iter().filter(|p| *p != x)).map(|p| RationalVector::from_ints(p)).collect();
        bodies.push(ConvexBody::V(VBody::new(pts)?));
    }
    let family = Family::from_bodies(d, "K", bodies)?;

    let mut membership_ok = true;
    for (m, x) in family.members().iter().zip(&r) {
        membership_ok &= !member(&RationalVector::from_ints(x), &m.body)?;
        for p in q.iter().chain(r.iter().filter(|p| *p != x)) {
            membership_ok &= member(&RationalVector::from_ints(p), &m.body)?;
        }
    }

    let n = family.len();
    let predicate = Predicate::ContainsKColinear { k: 3 };
    let mut cfg = cfg.clone();
    cfg.fail_fast = false;
    let report = check_helly(&family, n - 1, &predicate, &cfg)?;
    let full_has_three_colinear = report
        .conclusion
        .as_ref()
        .map(|c| c.holds)
        .ok_or_else(|| Error::Verification(report.conclusion_error.clone().unwrap_or_default()))?;
    let evaluator = Evaluator::new(d, family.bodies().collect(), &predicate)?;
    let all: Vec<usize> = (0..n).collect();
    let region = Region::of(d, family.bodies())?;
    let full_lattice_points = evaluator.lattice_points(&all, &region)?;
    let q_points: Vec<LatticePoint> = q.iter().map(|p| p.iter().map(|&c| BigInt::from(c)).collect()).collect();
    let full_lattice_is_q = full_lattice_points == q_points;
    let subsets_with_three_colinear = report.satisfying;
    let verified = membership_ok
        && report.errors == 0
        && subsets_with_three_colinear == report.total
        && !full_has_three_colinear
        && full_lattice_is_q;
    Ok((
        family,
        DiscreteTightReport {
            dim: d,
            members: n,
            membership_ok,
            subsets_checked: report.total,
            subsets_with_three_colinear,
            full_has_three_colinear,
            full_lattice_points,
            full_lattice_is_q,
            verified,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_sets() {
        for d in 1..=3 {
            let (q, r) = discrete_tight_points(d);
            assert_eq!(q.len(), 1 << d);
            assert_eq!(r.len(), d << d);
        }
        assert_eq!(discrete_tight_points(1).1, vec![vec![0], vec![3]]);
    }

    #[test]
    fn line_and_plane() {
        for d in 1..=2 {
            let (family, report) = gen_discrete_tight(d, &EngineConfig::default()).unwrap();
            assert_eq!(family.len(), d << d);
            assert!(report.verified, "{report:?}");
        }
    }
}
