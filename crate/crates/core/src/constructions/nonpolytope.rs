use std::f64::consts::PI;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{check_helly, EngineConfig, Measure, Predicate};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::rational::{approximate_f64, serde_str, to_f64, Rational};
use crate::geometry::{ConvexBody, HPolytope, HalfSpace, RationalVector};
use crate::norms::{l2_diameter_exact, Extent};

/// Diameter reported for unbounded intersections during the search.
const DIAMETER_CAP: f64 = 100.0;
const RANDOM_STARTS: usize = 8;
const MAX_SCALE_ATTEMPTS: usize = 12;

/// Euclidean diameter of `{x : <u(phi_i), x> <= 1}`, capped.
pub fn tangent_intersection_diameter(angles: &[f64]) -> f64 {
    let mut a: Vec<f64> = angles.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    if n < 3 {
        return DIAMETER_CAP;
    }
    let mut corners = Vec::with_capacity(n);
    for i in 0..n {
        let next = if i + 1 < n { a[i + 1] } else { a[0] + 2.0 * PI };
        let gap = next - a[i];
        if gap >= PI - 1e-12 {
            return DIAMETER_CAP;
        }
        let r = 1.0 / (gap / 2.0).cos();
        let mid = a[i] + gap / 2.0;
        corners.push((r * mid.cos(), r * mid.sin()));
    }
    let mut best: f64 = 0.0;
    for (i, p) in corners.iter().enumerate() {
        for q in &corners[i + 1..] {
            best = best.max(((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt());
        }
    }
    best.min(DIAMETER_CAP)
}

/// Pattern search for the smallest diameter over `n` tangent half-planes of
/// the unit disk, from the symmetric configuration and seeded random starts.
pub fn estimate_s_n(n: usize, seed: u64) -> f64 {
    let symmetric: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = local_search(symmetric);
    for _ in 0..RANDOM_STARTS {
        let start: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        best = best.min(local_search(start));
    }
    best
}

fn local_search(mut angles: Vec<f64>) -> f64 {
    let mut value = tangent_intersection_diameter(&angles);
    let mut step = 0.2;
    while step > 1e-10 {
        let mut improved = false;
        for i in 0..angles.len() {
            for delta in [step, -step] {
                angles[i] += delta;
                let v = tangent_intersection_diameter(&angles);
                if v < value {
                    value = v;
                    improved = true;
                } else {
                    angles[i] -= delta;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    value
}

/// Exact unit vector `((1 - t^2), 2t) / (1 + t^2)` near angle `phi`.
pub fn rational_unit_vector(phi: f64, max_den: u64) -> Result<RationalVector> {
    let phi = (phi + PI).rem_euclid(2.0 * PI) - PI;
    // Angles near pi send tan(phi / 2) to infinity; use -u(phi - pi) there.
    if phi.abs() > PI / 2.0 {
        let shifted = if phi > 0.0 { phi - PI } else { phi + PI };
        return Ok(-&rational_unit_vector(shifted, max_den)?);
    }
    let t = approximate_f64((phi / 2.0).tan(), max_den)?;
    let t2 = &t * &t;
    let den = Rational::one() + &t2;
    Ok(RationalVector::new(vec![(Rational::one() - &t2) / &den, (&t + &t) / den]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonpolytopeReport {
    pub n: usize,
    pub m_gon: usize,
    pub s_estimate: String,
    pub epsilon: String,
    /// Largest vertex distance of the unscaled polygon from the origin.
    pub circumradius: String,
    #[serde(with = "serde_str")]
    pub scale: Rational,
    pub subsets_checked: u64,
    pub subsets_at_least_one: u64,
    /// Smallest squared diameter among the `n`-subsets.
    pub weakest_subset: Option<(Vec<String>, Measure)>,
    #[serde(with = "serde_str")]
    pub full_diameter_squared: Rational,
    pub full_below_one: bool,
    /// The unscaled polygon contains the unit disk, so its diameter is at least 2.
    pub unscaled_diameter_at_least_two: bool,
    pub verified: bool,
}

/// Tangent half-planes of the unit disk at `m_gon` rational directions, scaled
/// so every `n` of them meet in a set of Euclidean diameter at least 1 while
/// all of them meet in a set of diameter below 1.
pub fn gen_nonpolytope_demo(n: usize, m_gon: usize, cfg: &EngineConfig) -> Result<(Family, NonpolytopeReport)> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if m_gon < 3 * n {
        return Err(Error::InvalidArgument(format!("m_gon must be at least {}", 3 * n)));
    }
    let s = estimate_s_n(n, cfg.seed);
    if s <= 2.0 {
        return Err(Error::Verification(format!("estimated s_n = {s} does not exceed 2")));
    }
    let epsilon = (s - 2.0) / 3.0;
    let normals: Vec<RationalVector> = (0..m_gon)
        .map(|j| rational_unit_vector(2.0 * PI * j as f64 / m_gon as f64, 1 << 20))
        .collect::<Result<_>>()?;
    let polygon = HPolytope::new(2, normals.iter().map(|u| HalfSpace::new(u.clone(), Rational::one())).collect::<Result<_>>()?)?;
    let corners = crate::geometry::vertices(&polygon)?;
    let circumradius = corners.iter().map(|p| to_f64(&p.norm_squared()).sqrt()).fold(0.0, f64::max);
    if circumradius > 1.0 + epsilon {
        return Err(Error::Verification(format!(
            "circumradius {circumradius} exceeds 1 + epsilon = {}",
            1.0 + epsilon
        )));
    }
    let unscaled_diameter_at_least_two = match l2_diameter_exact(&polygon)? {
        Extent::Finite(sq) => sq.squared >= Rational::from_integer(4.into()),
        _ => false,
    };

    let predicate = Predicate::l2_diameter(&Rational::one(), false);
    let mut cfg = cfg.clone();
    cfg.fail_fast = false;
    let mut margin = 1e-3;
    let mut last = String::new();
    for _ in 0..MAX_SCALE_ATTEMPTS {
        let scale = approximate_f64((1.0 + margin) / s, 1 << 16)?;
        let bodies: Vec<ConvexBody> = normals
            .iter()
            .map(|u| Ok(ConvexBody::H(HPolytope::new(2, vec![HalfSpace::new(u.clone(), scale.clone())?])?)))
            .collect::<Result<_>>()?;
        let family = Family::from_bodies(2, "T", bodies)?;
        let report = check_helly(&family, n, &predicate, &cfg)?;
        let full_diameter_squared = match report.conclusion.as_ref().and_then(|c| c.measure.clone()) {
            Some(Measure::Finite { value, .. }) => value,
            _ => return Err(Error::Verification("full intersection is not a bounded polygon".into())),
        };
        let full_below_one = full_diameter_squared < Rational::one();
        let all_pass = report.hypothesis_holds;
        if all_pass && full_below_one {
            let out = NonpolytopeReport {
                n,
                m_gon,
                s_estimate: format!("{s:.12}"),
                epsilon: format!("{epsilon:.12}"),
                circumradius: format!("{circumradius:.12}"),
                scale,
                subsets_checked: report.total,
                subsets_at_least_one: report.satisfying,
                weakest_subset: report.weakest_subset.map(|w| (w.ids, w.measure)),
                full_diameter_squared,
                full_below_one,
                unscaled_diameter_at_least_two,
                verified: unscaled_diameter_at_least_two,
            };
            return Ok((family, out));
        }
        last = format!("scale {} fails (subsets ok: {all_pass}, full below one: {full_below_one})", scale);
        if !full_below_one {
            break;
        }
        margin *= 4.0;
    }
    Err(Error::Verification(format!("no scale verified: {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_estimate() {
        let s = estimate_s_n(3, 0);
        assert!((s - 2.0 * 3f64.sqrt()).abs() < 1e-6, "{s}");
        assert_eq!(tangent_intersection_diameter(&[0.0, 1.0]), DIAMETER_CAP);
    }

    #[test]
    fn unit_vectors_are_exact() {
        for j in 0..16 {
            let u = rational_unit_vector(2.0 * PI * j as f64 / 16.0, 1 << 20).unwrap();
            assert!(u.norm_squared().is_one());
            let f = u.to_f64();
            let phi = 2.0 * PI * j as f64 / 16.0;
            assert!((f[0] - phi.cos()).abs() < 1e-5 && (f[1] - phi.sin()).abs() < 1e-5);
        }
    }

    #[test]
    fn two_half_planes_are_unbounded() {
        let (family, report) = gen_nonpolytope_demo(2, 6, &EngineConfig::default()).unwrap();
        assert_eq!(family.len(), 6);
        assert!(report.full_below_one && report.verified);
    }

    #[test]
    fn three_half_planes() {
        let (_, report) = gen_nonpolytope_demo(3, 12, &EngineConfig::default()).unwrap();
        assert!(report.verified, "{report:?}");
        assert_eq!(report.subsets_at_least_one, report.subsets_checked);
        assert_eq!(report.subsets_checked, 220);
    }
}
