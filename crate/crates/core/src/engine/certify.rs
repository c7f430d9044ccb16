use num_traits::{One, Zero};
use serde::Serialize;

use super::helly::{check_helly, EngineConfig};
use super::predicate::Predicate;
use crate::combinatorics::KSubsets;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::lp::{irredundant, lp_solve, LpStatus, Region, Sense};
use crate::geometry::rational::{int, serde_str, Rational};
use crate::geometry::{ConvexBody, HPolytope, HalfSpace, RationalVector};
use crate::lift::{lift_product_level, product_terms};
use crate::norms::{rho_diameter, Extent, PolytopeNorm};

/// How each point of the sequence is chosen among those with `f = t_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyStrategy {
    /// Minimize `g`, the slowest sequence the argument allows.
    MinG,
    /// Maximize `g` one functional at a time.
    MaxG,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateStep {
    pub n: usize,
    /// Target `t_n = n - sum_{i<n} g_i`.
    #[serde(with = "serde_str")]
    pub target: Rational,
    #[serde(with = "serde_str")]
    pub f: Rational,
    #[serde(with = "serde_str")]
    pub g: Rational,
    #[serde(with = "serde_str")]
    pub beta: Rational,
    /// `n / (h + n - 1)` with `h` the number of facet functionals.
    #[serde(with = "serde_str")]
    pub bound: Rational,
    /// The point `(x_1, y_1, ..., x_h, y_h)` in the product of the intersection.
    pub point: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiameterCertificate {
    pub norm: PolytopeNorm,
    pub family_size: usize,
    pub subset_size: usize,
    pub strategy: CertifyStrategy,
    pub steps: Vec<CertificateStep>,
    /// First step with `g >= 1`, after which the sequence is constant.
    pub converged_at: Option<usize>,
    /// `beta_1, ..., beta_max_n`, constant after convergence.
    #[serde(serialize_with = "ser_rationals")]
    pub beta_sequence: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub rho_diameter: Rational,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::geometry::format_rational))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Certified(DiameterCertificate),
    /// Some subfamily of the tested size has rho-diameter below 1.
    Refused { violating_subset: Vec<String>, reason: String },
}

/// Builds the sequence of product points whose `g` values bound the
/// rho-diameter of the intersection from below, after checking that every
/// `kd`-subfamily has rho-diameter at least 1.
pub fn certify_diameter(
    family: &Family,
    norm: &PolytopeNorm,
    max_n: usize,
    strategy: CertifyStrategy,
    cfg: &EngineConfig,
) -> Result<CertifyOutcome> {
    if family.is_empty() {
        return Err(Error::EmptyInput("family"));
    }
    if max_n == 0 {
        return Err(Error::InvalidArgument("at least one step is needed".into()));
    }
    let d = family.dim();
    let h = norm.functionals().len();
    let m = (norm.facet_count() * d).min(family.len());
    let hypothesis = Predicate::rho_diameter(norm.clone(), Rational::one(), false);
    let check = check_helly(family, m, &hypothesis, &cfg.clone().fail_fast())?;
    if !check.hypothesis_holds {
        let reason = match check.error_samples.first() {
            Some(e) => format!("evaluation failed: {}", e.message),
            None => "rho-diameter below 1".to_string(),
        };
        return Ok(CertifyOutcome::Refused { violating_subset: check.first_failure.unwrap_or_default(), reason });
    }

    let base = family
        .intersection_h()
        .ok_or_else(|| Error::Unsupported("certificates need H-polytope members".into()))?;
    let base = irredundant(&base)?;
    let rho = match rho_diameter(&base, norm)? {
        Extent::Finite(c) => c.value,
        Extent::Unbounded => return Err(Error::Unsupported("the intersection is unbounded".into())),
        Extent::Empty => return Err(Error::Verification("empty intersection passed the hypothesis".into())),
    };

    let mut steps = Vec::new();
    let mut g_sum = Rational::zero();
    let mut beta = Rational::zero();
    let mut converged_at = None;
    for n in 1..=max_n {
        let target = int(n as i64) - &g_sum;
        let Some(point) = choose_point(&base, norm, &target, strategy)? else {
            return refuse_at_level(family, norm, m, &target);
        };
        let terms = product_terms(norm, &point);
        let f: Rational = terms.iter().cloned().sum();
        let g = terms.into_iter().max().expect("norms have functionals");
        if f != target {
            return Err(Error::Verification(format!("step {n}: f differs from its target")));
        }
        if g > beta {
            beta = g.clone();
        }
        let bound = Rational::new((n as i64).into(), ((h + n - 1) as i64).into());
        if beta < bound {
            return Err(Error::Verification(format!("step {n}: beta below n/(h+n-1)")));
        }
        if beta > rho {
            return Err(Error::Verification(format!("step {n}: beta exceeds the rho-diameter")));
        }
        g_sum += &g;
        let done = g >= Rational::one();
        steps.push(CertificateStep { n, target, f, g, beta: beta.clone(), bound, point });
        if done {
            converged_at = Some(n);
            break;
        }
    }
    let mut beta_sequence: Vec<Rational> = steps.iter().map(|s| s.beta.clone()).collect();
    beta_sequence.resize(max_n, beta);
    Ok(CertifyOutcome::Certified(DiameterCertificate {
        norm: norm.clone(),
        family_size: family.len(),
        subset_size: m,
        strategy,
        steps,
        converged_at,
        beta_sequence,
        rho_diameter: rho,
    }))
}

/// A point of `base^k` with `f = target`, chosen by `strategy`; `None` when
/// no such point exists.
fn choose_point(
    base: &HPolytope,
    norm: &PolytopeNorm,
    target: &Rational,
    strategy: CertifyStrategy,
) -> Result<Option<RationalVector>> {
    let lifted = lift_product_level(base, norm, target)?.body;
    let total = lifted.dim();
    let d = norm.dim();
    let term = |i: usize| {
        let mut coeffs = vec![Rational::zero(); total];
        for (j, c) in norm.functionals()[i].iter().enumerate() {
            coeffs[2 * i * d + j] = -c;
            coeffs[(2 * i + 1) * d + j] = c.clone();
        }
        coeffs
    };
    match strategy {
        CertifyStrategy::MinG => {
            // Extra variable s with term_i <= s; minimize s.
            let mut cons: Vec<HalfSpace> = lifted
                .constraints()
                .iter()
                .map(|c| {
                    let mut a = c.normal().coords().to_vec();
                    a.push(Rational::zero());
                    HalfSpace::new(RationalVector::new(a), c.offset().clone())
                })
                .collect::<Result<_>>()?;
            for i in 0..norm.functionals().len() {
                let mut a = term(i);
                a.push(-Rational::one());
                cons.push(HalfSpace::new(RationalVector::new(a), Rational::zero())?);
            }
            let program = HPolytope::new(total + 1, cons)?;
            let r = lp_solve(&RationalVector::unit(total + 1, total), Sense::Min, &program)?;
            Ok(match r.status {
                LpStatus::Optimal => Some(r.witness.expect("optimal").block(0, total)),
                _ => None,
            })
        }
        CertifyStrategy::MaxG => {
            let mut best: Option<(Rational, RationalVector)> = None;
            for i in 0..norm.functionals().len() {
                let r = lp_solve(&RationalVector::new(term(i)), Sense::Max, &lifted)?;
                match r.status {
                    LpStatus::Infeasible => return Ok(None),
                    LpStatus::Unbounded => return Err(Error::Unbounded),
                    LpStatus::Optimal => {
                        let value = r.optimum.expect("optimal");
                        if best.as_ref().is_none_or(|(b, _)| value > *b) {
                            best = Some((value, r.witness.expect("optimal")));
                        }
                    }
                }
            }
            Ok(best.map(|(_, p)| p))
        }
    }
}

/// Names a subfamily of size `m` whose product set at level `target` is empty.
fn refuse_at_level(family: &Family, norm: &PolytopeNorm, m: usize, target: &Rational) -> Result<CertifyOutcome> {
    for subset in KSubsets::new(family.len(), m) {
        let sub = family.subfamily(&subset);
        let base = sub.intersection_h().expect("checked to be H-polytopes");
        let lifted = ConvexBody::H(lift_product_level(&base, norm, target)?.body);
        if Region::new(lifted.dim()).with(&lifted).is_empty()? {
            return Ok(CertifyOutcome::Refused {
                violating_subset: family.ids(&subset),
                reason: format!("no product point with f = {}", crate::geometry::format_rational(target)),
            });
        }
    }
    Err(Error::Verification("the full product set is empty but every subfamily's is not".into()))
}
