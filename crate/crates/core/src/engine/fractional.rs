use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::helly::{check_helly, subset_source, EngineConfig, FractionalReport, SubsetValue};
use super::predicate::{Evaluator, Measure, Predicate};
use crate::analytics;
use crate::combinatorics::KSubsets;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::lp::Region;
use crate::geometry::rational::{approximate_f64, from_f64, int, serde_opt_str, serde_str, Rational};
use crate::geometry::{ConvexBody, HPolytope, RationalVector};
use crate::norms::{l2_diameter_region, Extent, SquaredDiameter};

/// Largest subfamily searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubfamilySearch {
    Exhaustive,
    /// Heuristic: repeatedly drop the member whose removal leaves the widest remainder.
    GreedyPeeling,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionalWidthReport {
    pub subsets: FractionalReport,
    #[serde(with = "serde_opt_str")]
    pub alpha_in: Option<Rational>,
    /// `alpha_in` when given, else the measured fraction.
    #[serde(with = "serde_str")]
    pub alpha_used: Rational,
    /// The measured fraction reaches `alpha_used`.
    pub hypothesis_met: bool,
    pub search: SubfamilySearch,
    pub best_size: usize,
    pub best: Option<SubsetValue>,
    /// `1 - (1 - alpha_used)^(1/2d)`.
    pub beta: f64,
    /// `best_size >= beta * n`, decided exactly as `(1 - best/n)^(2d) <= 1 - alpha`.
    pub bound_met: bool,
}

/// Fraction of `2d`-subsets whose intersection has `v`-width at least 1, and
/// the largest subfamily with that property.
pub fn fractional_vwidth(
    family: &Family,
    v: &RationalVector,
    alpha_in: Option<&Rational>,
    cfg: &EngineConfig,
) -> Result<FractionalWidthReport> {
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    fractional_vwidth_with(family, &Predicate::v_width(v.clone(), &Rational::one()), alpha_in, cfg)
}

/// As [`fractional_vwidth`] for any width predicate.
pub fn fractional_vwidth_with(
    family: &Family,
    predicate: &Predicate,
    alpha_in: Option<&Rational>,
    cfg: &EngineConfig,
) -> Result<FractionalWidthReport> {
    if !matches!(predicate, Predicate::VWidthAtLeast { .. }) {
        return Err(Error::InvalidArgument("fractional width needs a width predicate".into()));
    }
    let n = family.len();
    if n == 0 {
        return Err(Error::EmptyInput("family"));
    }
    let d = family.dim();
    let mut cfg = cfg.clone();
    cfg.fail_fast = false;
    let mut subsets = check_helly(family, (2 * d).min(n), predicate, &cfg)?;

    let evaluator = Evaluator::new(d, family.bodies().collect(), predicate)?;
    let (search, best) = if n <= EXHAUSTIVE_LIMIT {
        (SubfamilySearch::Exhaustive, exhaustive_best(family, &evaluator, &cfg)?)
    } else {
        (SubfamilySearch::GreedyPeeling, greedy_best(family, &evaluator)?)
    };
    subsets.best_subfamily = best.clone();
    let best_size = best.as_ref().map_or(0, |b| b.ids.len());

    let alpha_used = alpha_in.cloned().unwrap_or_else(|| subsets.alpha.clone());
    if alpha_used.is_negative() || alpha_used > Rational::one() {
        return Err(Error::InvalidArgument("alpha must lie in [0, 1]".into()));
    }
    let hypothesis_met = subsets.alpha >= alpha_used;
    let shortfall = Rational::new(((n - best_size) as i64).into(), (n as i64).into());
    let bound_met = num_traits::pow(shortfall, 2 * d) <= Rational::one() - &alpha_used;
    let beta = 1.0 - (1.0 - crate::geometry::rational::to_f64(&alpha_used)).powf(1.0 / (2 * d) as f64);
    Ok(FractionalWidthReport {
        subsets,
        alpha_in: alpha_in.cloned(),
        alpha_used,
        hypothesis_met,
        search,
        best_size,
        best,
        beta,
        bound_met,
    })
}

fn exhaustive_best(family: &Family, evaluator: &Evaluator<'_>, cfg: &EngineConfig) -> Result<Option<SubsetValue>> {
    let n = family.len();
    for size in (1..=n).rev() {
        let subsets: Vec<Vec<usize>> = KSubsets::new(n, size).collect();
        let results = cfg.install(|| subsets.par_iter().map(|s| evaluator.evaluate(s)).collect::<Vec<_>>())?;
        let mut best: Option<SubsetValue> = None;
        for (s, r) in subsets.iter().zip(results) {
            let e = r?;
            if !e.holds {
                continue;
            }
            let mut ids = family.ids(s);
            ids.sort();
            if best.as_ref().is_none_or(|b| ids < b.ids) {
                best = Some(SubsetValue { ids, measure: e.measure.expect("widths carry a measure") });
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

fn greedy_best(family: &Family, evaluator: &Evaluator<'_>) -> Result<Option<SubsetValue>> {
    let mut current: Vec<usize> = (0..family.len()).collect();
    loop {
        if current.is_empty() {
            return Ok(None);
        }
        let e = evaluator.evaluate(&current)?;
        if e.holds {
            let mut ids = family.ids(&current);
            ids.sort();
            return Ok(Some(SubsetValue { ids, measure: e.measure.expect("widths carry a measure") }));
        }
        // Remove the member leaving the largest width; ties drop the smallest id.
        let mut choice: Option<(usize, Measure, &str)> = None;
        for (pos, &i) in current.iter().enumerate() {
            let rest: Vec<usize> = current.iter().copied().filter(|&j| j != i).collect();
            let m = evaluator.evaluate(&rest)?.measure.expect("widths carry a measure");
            let id = family.members()[i].id.as_str();
            let better = match &choice {
                None => true,
                Some((_, bm, bid)) => match m.partial_cmp(bm) {
                    Some(std::cmp::Ordering::Greater) => true,
                    Some(std::cmp::Ordering::Equal) => id < *bid,
                    _ => false,
                },
            };
            if better {
                choice = Some((pos, m, id));
            }
        }
        let (pos, _, _) = choice.expect("nonempty");
        current.remove(pos);
    }
}

/// A direction `z` of a longest segment, kept unnormalized with exact `|z|^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiameterDirection {
    pub direction: RationalVector,
    #[serde(with = "serde_str")]
    pub squared_length: Rational,
    pub endpoints: (RationalVector, RationalVector),
}

pub fn diameter_direction(body: &HPolytope) -> Result<DiameterDirection> {
    let wrapped = ConvexBody::H(body.clone());
    diameter_direction_region(&Region::new(body.dim()).with(&wrapped))
}

/// Farthest vertex pair `(p, q)`, returned as `z = q - p` with its first
/// nonzero coordinate made positive. Requires Euclidean diameter at least 1.
pub fn diameter_direction_region(region: &Region<'_>) -> Result<DiameterDirection> {
    match l2_diameter_region(region)? {
        Extent::Empty => Err(Error::Empty),
        Extent::Unbounded => Err(Error::Unbounded),
        Extent::Finite(s) => {
            if s.squared < Rational::one() {
                return Err(Error::HypothesisFails(format!(
                    "squared diameter {} is below 1, so no unit segment fits",
                    crate::geometry::format_rational(&s.squared)
                )));
            }
            Ok(direction_of(s))
        }
    }
}

fn direction_of(s: SquaredDiameter) -> DiameterDirection {
    let (p, q) = s.attaining_pair;
    let mut z = &q - &p;
    if z.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        z = -&z;
    }
    DiameterDirection { direction: z, squared_length: s.squared, endpoints: (p, q) }
}

/// Guard band for floating-point cap scoring.
const SCORE_GUARD: f64 = 1e-9;
/// Recorded directions used to form pairwise bisectors.
const BISECTOR_POOL: usize = 48;
/// Denominator bound for rational bisector axes.
const AXIS_DENOMINATOR: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapCoverReport {
    pub dim: usize,
    pub family_size: usize,
    pub c: f64,
    /// Exact rational value of `c` used for guarded comparisons.
    #[serde(with = "serde_str")]
    pub c_exact: Rational,
    pub subsets_total: u64,
    /// `2d`-subsets with Euclidean diameter at least 1.
    pub subsets_with_unit_diameter: u64,
    #[serde(with = "serde_str")]
    pub hypothesis_fraction: Rational,
    pub alpha_in: Option<f64>,
    pub sampled: bool,
    pub recorded_directions: usize,
    pub candidate_axes: usize,
    pub axis: Option<RationalVector>,
    /// Recorded directions within angle `|<u, v>| >= c / sqrt(d)` of the axis.
    pub axis_score: usize,
    /// Comparisons resolved exactly because they fell inside the guard band.
    pub guarded_comparisons: usize,
    pub width: Option<FractionalWidthReport>,
    pub gamma: f64,
    pub beta: f64,
    /// The final subfamily reaches `beta * n` members.
    pub bound_met: Option<bool>,
    pub flags: Vec<String>,
}

/// Runs the cap-covering argument on a concrete family: record unit-segment
/// directions of `2d`-subsets, choose an axis covering many of them, then
/// search for a large subfamily with width `c / sqrt(d)` along that axis.
pub fn cap_cover_experiment(family: &Family, c: f64, alpha_in: Option<f64>, cfg: &EngineConfig) -> Result<CapCoverReport> {
    let d = family.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("cap covering needs dimension at least 2".into()));
    }
    let n = family.len();
    let m = 2 * d;
    if n < m {
        return Err(Error::InvalidArgument(format!("family needs at least {m} members")));
    }
    let gamma = analytics::gamma(c, analytics::DEFAULT_D_MAX)?.value;
    let c_exact = from_f64(c)?;

    let bodies: Vec<&ConvexBody> = family.bodies().collect();
    let (source, sampled) = subset_source(n, m, cfg);
    let subsets: Vec<Vec<usize>> = source.collect();
    let outcomes = cfg.install(|| {
        subsets
            .par_iter()
            .map(|s| {
                let region = Region::of(d, s.iter().map(|&i| bodies[i]))?;
                match l2_diameter_region(&region)? {
                    Extent::Finite(sq) if sq.squared >= Rational::one() => Ok((true, Some(direction_of(sq).direction))),
                    Extent::Unbounded => Ok((true, None)),
                    _ => Ok((false, None)),
                }
            })
            .collect::<Vec<Result<(bool, Option<RationalVector>)>>>()
    })?;
    let mut hits = 0u64;
    let mut directions = Vec::new();
    for o in outcomes {
        let (hit, dir) = o?;
        if hit {
            hits += 1;
        }
        directions.extend(dir);
    }
    let total = subsets.len() as u64;
    let hypothesis_fraction = Rational::new(hits.into(), total.max(1).into());
    let mut flags = vec!["heuristic axis search".to_string(), "truncated inf".to_string()];
    if sampled {
        flags.push("sampled".to_string());
    }

    let mut report = CapCoverReport {
        dim: d,
        family_size: n,
        c,
        c_exact: c_exact.clone(),
        subsets_total: total,
        subsets_with_unit_diameter: hits,
        hypothesis_fraction: hypothesis_fraction.clone(),
        alpha_in,
        sampled,
        recorded_directions: directions.len(),
        candidate_axes: 0,
        axis: None,
        axis_score: 0,
        guarded_comparisons: 0,
        width: None,
        gamma,
        beta: 0.0,
        bound_met: None,
        flags,
    };
    if directions.is_empty() {
        return Ok(report);
    }

    let candidates = candidate_axes(&directions);
    report.candidate_axes = candidates.len();
    let threshold = c / (d as f64).sqrt();
    let mut guarded = 0usize;
    let mut best: Option<(usize, &RationalVector)> = None;
    for v in &candidates {
        let vf = v.to_f64();
        let vn = norm(&vf);
        let mut score = 0;
        for z in &directions {
            let zf = z.to_f64();
            let cos = dot(&zf, &vf).abs() / (norm(&zf) * vn);
            let inside = if (cos - threshold).abs() < SCORE_GUARD {
                guarded += 1;
                // <z, v>^2 d >= c^2 |z|^2 |v|^2
                let lhs = z.dot(v) * z.dot(v) * int(d as i64);
                lhs >= &c_exact * &c_exact * z.norm_squared() * v.norm_squared()
            } else {
                cos > threshold
            };
            if inside {
                score += 1;
            }
        }
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, v));
        }
    }
    let (score, axis) = best.expect("candidates are nonempty");
    report.guarded_comparisons = guarded;
    report.axis_score = score;
    report.axis = Some(axis.clone());

    let predicate = Predicate::VWidthAtLeast {
        v: axis.clone(),
        threshold_sq: &c_exact * &c_exact / int(d as i64),
        normalize: true,
    };
    let alpha_rational = match alpha_in {
        Some(a) => Some(from_f64(a)?),
        None => None,
    };
    let width = fractional_vwidth_with(family, &predicate, None, cfg)?;
    let alpha = alpha_rational.unwrap_or(hypothesis_fraction);
    let alpha_f = crate::geometry::rational::to_f64(&alpha);
    report.beta = analytics::beta_from_gamma(alpha_f.clamp(0.0, 1.0), gamma, d, false)?.value;
    report.bound_met = Some(width.best_size as f64 >= report.beta * n as f64);
    report.width = Some(width);
    Ok(report)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Distinct recorded directions, then rational approximations of the
/// bisectors `u_i + u_j` and `u_i - u_j` of the first few unit directions.
fn candidate_axes(directions: &[RationalVector]) -> Vec<RationalVector> {
    let mut out: Vec<RationalVector> = Vec::new();
    for z in directions {
        if !out.contains(z) {
            out.push(z.clone());
        }
    }
    let pool: Vec<Vec<f64>> = out
        .iter()
        .take(BISECTOR_POOL)
        .map(|z| {
            let f = z.to_f64();
            let n = norm(&f);
            f.iter().map(|x| x / n).collect()
        })
        .collect();
    let mut extra = Vec::new();
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i + 1..] {
            for sign in [1.0, -1.0] {
                let coords: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + sign * y).collect();
                if norm(&coords) < 1e-6 {
                    continue;
                }
                let v = RationalVector::new(coords.iter().map(|&x| approximate_f64(x, AXIS_DENOMINATOR).expect("finite")).collect());
                if !v.is_zero() && !out.contains(&v) && !extra.contains(&v) {
                    extra.push(v);
                }
            }
        }
    }
    out.extend(extra);
    out
}
