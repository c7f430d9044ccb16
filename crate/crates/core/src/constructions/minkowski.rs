use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::engine::{check_helly, EngineConfig, Measure, Predicate};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::lp::{LpStatus, Region, Sense};
use crate::geometry::rational::{int, serde_str, Rational};
use crate::geometry::{vertices, ConvexBody, HPolytope, HalfSpace, RationalVector};
use crate::norms::{rho_diameter, Extent, PolytopeNorm};

/// Halvings of the tilt before giving up.
pub const MAX_SHRINK: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetCheck {
    pub facet: usize,
    pub point: RationalVector,
    /// Each half-space of this facet contains every other facet point.
    pub contains_other_points: bool,
    /// The half-spaces meet the facet only at `point`.
    pub singleton: bool,
    /// Dropping any one half-space admits `y` with `<y, v_i> > 1`.
    pub escapes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinkowskiTightReport {
    pub norm: PolytopeNorm,
    pub dim: usize,
    pub members: usize,
    #[serde(with = "serde_str")]
    pub theta: Rational,
    pub shrink_steps: usize,
    pub facets: Vec<FacetCheck>,
    /// rho-diameter of each subfamily missing one member, by omitted id.
    pub subset_diameters: Vec<(String, Measure)>,
    pub all_subsets_exceed_two: bool,
    #[serde(with = "serde_str")]
    pub full_diameter: Rational,
    pub full_at_most_two: bool,
    pub verified: bool,
}

/// `kd` half-spaces, `d` per facet of the unit ball, such that every
/// `kd - 1` of them meet in a set of rho-diameter above 2 while all of them
/// meet inside the ball.
pub fn gen_minkowski_tight(norm: &PolytopeNorm, cfg: &EngineConfig) -> Result<(Family, MinkowskiTightReport)> {
    let d = norm.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("the construction needs d >= 2".into()));
    }
    let ball = norm.unit_ball();
    let corners = vertices(&ball)?;
    let k = norm.facet_count();
    let mut points = Vec::with_capacity(k);
    for i in 0..k {
        let v = norm.facet_functional(i)?;
        let on_facet: Vec<&RationalVector> = corners.iter().filter(|p| v.dot(p).is_one()).collect();
        if on_facet.is_empty() {
            return Err(Error::InvalidNorm(format!("functional {i} does not define a facet")));
        }
        let sum = on_facet.iter().fold(RationalVector::zeros(d), |acc, p| &acc + p);
        points.push(sum.scale(&Rational::new(1.into(), (on_facet.len() as i64).into())));
    }

    let mut theta = Rational::one();
    let mut last_failure = String::new();
    for step in 0..=MAX_SHRINK {
        let groups = half_spaces(norm, &points, &theta)?;
        let facets = check_facets(norm, &points, &groups)?;
        if let Some(bad) = facets.iter().find(|f| !(f.contains_other_points && f.singleton && f.escapes)) {
            last_failure = format!("facet {} fails at theta = {}", bad.facet, crate::geometry::format_rational(&theta));
            theta /= int(2);
            continue;
        }
        let bodies: Vec<ConvexBody> =
            groups.into_iter().flatten().map(|h| ConvexBody::H(HPolytope::new(d, vec![h]).expect("dims"))).collect();
        let family = Family::from_bodies(d, "H", bodies)?;
        let report = verify(norm, &family, theta.clone(), step, facets, cfg)?;
        if !report.verified {
            last_failure = format!("diameter checks fail at theta = {}", crate::geometry::format_rational(&theta));
            theta /= int(2);
            continue;
        }
        return Ok((family, report));
    }
    Err(Error::Verification(format!("no tilt verified after {MAX_SHRINK} halvings; {last_failure}")))
}

/// `d - 1` tangent vectors `e_j - (v_j / v_p) e_p` for the pivot `p`.
fn tangent_basis(v: &RationalVector) -> Vec<RationalVector> {
    let d = v.dim();
    let p = (0..d).max_by(|&a, &b| v[a].abs().cmp(&v[b].abs()).then(b.cmp(&a))).expect("d >= 1");
    (0..d)
        .filter(|&j| j != p)
        .map(|j| {
            let mut t = RationalVector::unit(d, j).into_coords();
            t[p] = -(&v[j] / &v[p]);
            RationalVector::new(t)
        })
        .collect()
}

/// Tilted normals `v_i + theta w` for `w` in the tangent basis and minus its
/// sum, each bounding a half-space through the facet point.
fn half_spaces(norm: &PolytopeNorm, points: &[RationalVector], theta: &Rational) -> Result<Vec<Vec<HalfSpace>>> {
    let mut groups = Vec::with_capacity(points.len());
    for (i, x) in points.iter().enumerate() {
        let v = norm.facet_functional(i)?;
        let basis = tangent_basis(&v);
        let mut dirs = basis.clone();
        dirs.push(-&basis.iter().fold(RationalVector::zeros(v.dim()), |acc, t| &acc + t));
        let mut group = Vec::with_capacity(dirs.len());
        for w in dirs {
            let a = &v + &w.scale(theta);
            let b = a.dot(x);
            group.push(HalfSpace::new(a, b)?);
        }
        groups.push(group);
    }
    Ok(groups)
}

fn check_facets(norm: &PolytopeNorm, points: &[RationalVector], groups: &[Vec<HalfSpace>]) -> Result<Vec<FacetCheck>> {
    let d = norm.dim();
    let mut out = Vec::with_capacity(groups.len());
    for (i, group) in groups.iter().enumerate() {
        let v = norm.facet_functional(i)?;
        let x = &points[i];
        let contains_other_points =
            group.iter().all(|h| points.iter().enumerate().all(|(j, p)| j == i || h.contains(p)));

        let mut on_plane = HPolytope::new(d, group.clone())?;
        on_plane.push_equality(v.clone(), Rational::one())?;
        let on_plane = ConvexBody::H(on_plane);
        let region = Region::new(d).with(&on_plane);
        let mut singleton = true;
        for t in tangent_basis(&v) {
            for sense in [Sense::Max, Sense::Min] {
                let r = region.optimize(&t, sense)?;
                singleton &= r.status == LpStatus::Optimal && r.optimum == Some(t.dot(x));
            }
        }

        let mut escapes = true;
        for skip in 0..group.len() {
            let rest: Vec<HalfSpace> =
                group.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, h)| h.clone()).collect();
            let r = crate::geometry::lp_solve(&v, Sense::Max, &HPolytope::new(d, rest)?)?;
            escapes &= match r.status {
                LpStatus::Unbounded => true,
                LpStatus::Optimal => r.optimum.expect("optimal") > Rational::one(),
                LpStatus::Infeasible => false,
            };
        }
        out.push(FacetCheck { facet: i, point: x.clone(), contains_other_points, singleton, escapes });
    }
    Ok(out)
}

fn verify(
    norm: &PolytopeNorm,
    family: &Family,
    theta: Rational,
    shrink_steps: usize,
    facets: Vec<FacetCheck>,
    cfg: &EngineConfig,
) -> Result<MinkowskiTightReport> {
    let n = family.len();
    let two = int(2);
    let strict = Predicate::rho_diameter(norm.clone(), two.clone(), true);
    let mut cfg = cfg.clone();
    cfg.fail_fast = false;
    let report = check_helly(family, n - 1, &strict, &cfg)?;
    let mut subset_diameters = Vec::with_capacity(n);
    for i in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let region = Region::of(family.dim(), rest.iter().map(|&j| &family.members()[j].body))?;
        let m = match crate::norms::rho_diameter_region(&region, norm)? {
            Extent::Finite(c) => Measure::Finite { value: c.value, squared: false },
            Extent::Unbounded => Measure::Unbounded,
            Extent::Empty => Measure::Empty,
        };
        subset_diameters.push((family.members()[i].id.clone(), m));
    }
    let full = family.intersection_h().expect("half-spaces");
    let full_diameter = match rho_diameter(&full, norm)? {
        Extent::Finite(c) => c.value,
        Extent::Unbounded => return Err(Error::Verification("the full intersection is unbounded".into())),
        Extent::Empty => Rational::zero(),
    };
    let all_subsets_exceed_two = report.hypothesis_holds && report.satisfying == n as u64;
    let full_at_most_two = full_diameter <= two;
    Ok(MinkowskiTightReport {
        norm: norm.clone(),
        dim: family.dim(),
        members: n,
        theta,
        shrink_steps,
        verified: all_subsets_exceed_two && full_at_most_two,
        facets,
        subset_diameters,
        all_subsets_exceed_two,
        full_diameter,
        full_at_most_two,
    })
}
