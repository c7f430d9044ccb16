use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use helly_core::analytics::{beta_fractional, gamma};
use helly_core::constructions::{gen_discrete_tight, gen_minkowski_tight, gen_nonpolytope_demo};
use helly_core::engine::{
    certify_diameter, check_colorful, check_helly, CertifyOutcome, CertifyStrategy, EngineConfig, Predicate,
};
use helly_core::geometry::{parse_rational, ConvexBody, HPolytope, Region};
use helly_core::lattice::contains_k_colinear_region;
use helly_core::lift::{generic_direction, lift_boundary, lift_discrete, lift_product, lift_width, LiftKind, LiftedBody};
use helly_core::norms::{l2_diameter_region, rho_diameter_region, PolytopeNorm};
use helly_core::{ColorfulFamilies, Family, RationalVector};

use crate::args::*;
use crate::render::canonical;

/// A command's result; `ok` is false on a verification failure.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
    /// Rows for `--format csv`, when the command has a tabular form.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(value: impl Serialize, ok: bool) -> Result<Self> {
        Ok(Outcome { value: canonical(serde_json::to_value(value)?), ok, csv: None })
    }
}

pub fn engine_config(cli: &Cli) -> EngineConfig {
    EngineConfig { seed: cli.seed, jobs: cli.jobs, ..EngineConfig::default() }
}

pub fn read_family(path: &Path) -> Result<Family> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Family::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn family_json(family: &Family) -> Result<Value> {
    Ok(canonical(serde_json::to_value(family)?))
}

enum NormChoice {
    Polytope(PolytopeNorm),
    Euclidean,
}

fn parse_norm(spec: &str, dim: usize) -> Result<NormChoice> {
    let norm = match spec {
        "linf" => PolytopeNorm::linf(dim),
        "l1" => PolytopeNorm::l1(dim),
        "l2" => return Ok(NormChoice::Euclidean),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading norm file {path}"))?;
            let norm: PolytopeNorm = serde_json::from_str(&text).with_context(|| format!("parsing norm file {path}"))?;
            if norm.dim() != dim {
                bail!("norm has dimension {}, the family {dim}", norm.dim());
            }
            norm
        }
    };
    Ok(NormChoice::Polytope(norm))
}

fn polytope_norm(spec: &str, dim: usize) -> Result<PolytopeNorm> {
    match parse_norm(spec, dim)? {
        NormChoice::Polytope(n) => Ok(n),
        NormChoice::Euclidean => bail!("this command needs a polytope norm, not l2"),
    }
}

fn parse_vector(text: &str, dim: usize) -> Result<RationalVector> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let v = RationalVector::parse(&parts)?;
    if v.dim() != dim {
        bail!("vector {text:?} has {} coordinates, expected {dim}", v.dim());
    }
    Ok(v)
}

fn h_member(body: &ConvexBody, id: &str) -> Result<HPolytope> {
    body.as_h().cloned().ok_or_else(|| anyhow!("member {id} must be an H-polytope for this lift"))
}

pub fn check(cli: &Cli, a: &CheckArgs) -> Result<Outcome> {
    let mut colors = Vec::new();
    if let Some(path) = &a.family {
        colors.push(read_family(path)?);
    }
    for path in &a.colorful {
        colors.push(read_family(path)?);
    }
    let dim = colors.first().ok_or_else(|| anyhow!("--family or --colorful is required"))?.dim();
    let threshold = parse_rational(&a.threshold)?;
    let predicate = match a.predicate {
        PredicateKind::Nonempty => Predicate::NonemptyIntersection,
        PredicateKind::Width => {
            let v = parse_vector(a.v.as_deref().ok_or_else(|| anyhow!("--v is required for width"))?, dim)?;
            Predicate::v_width(v, &threshold)
        }
        PredicateKind::Diameter => match parse_norm(&a.norm, dim)? {
            NormChoice::Polytope(n) => Predicate::rho_diameter(n, threshold, a.strict),
            NormChoice::Euclidean => Predicate::l2_diameter(&threshold, a.strict),
        },
        PredicateKind::Lattice => Predicate::ContainsIntegerPoint,
        PredicateKind::Colinear => {
            Predicate::ContainsKColinear { k: a.k.ok_or_else(|| anyhow!("--k is required for colinear"))? }
        }
    };
    let cfg = EngineConfig { subset_cap: a.subset_cap, sample_size: a.samples, ..engine_config(cli) };
    if !a.colorful.is_empty() {
        let report = check_colorful(&ColorfulFamilies::new(colors)?, &predicate, &cfg)?;
        let ok = report.colorful_transfer != Some(false);
        return Outcome::new(report, ok);
    }
    let m = a.subset_size.ok_or_else(|| anyhow!("--subset-size is required"))?;
    let report = check_helly(&colors[0], m, &predicate, &cfg)?;
    let ok = report.helly_transfer != Some(false);
    Outcome::new(report, ok)
}

pub fn diameter(a: &DiameterArgs) -> Result<Outcome> {
    let family = read_family(&a.family)?;
    let region = Region::of(family.dim(), family.bodies())?;
    match parse_norm(&a.norm, family.dim())? {
        NormChoice::Polytope(norm) => {
            let extent = rho_diameter_region(&region, &norm)?;
            Outcome::new(json!({ "norm": norm, "family_size": family.len(), "diameter": extent }), true)
        }
        NormChoice::Euclidean => {
            let extent = l2_diameter_region(&region)?;
            Outcome::new(json!({ "norm": "l2", "family_size": family.len(), "squared_diameter": extent }), true)
        }
    }
}

pub fn lattice(a: &LatticeArgs) -> Result<Outcome> {
    let family = read_family(&a.family)?;
    let region = Region::of(family.dim(), family.bodies())?;
    match contains_k_colinear_region(&region, a.k)? {
        Some(w) => Outcome::new(w, true),
        None => Outcome::new("none", true),
    }
}

pub fn lift(a: &LiftArgs) -> Result<Outcome> {
    let family = read_family(&a.family)?;
    let d = family.dim();
    let mut lifts: Vec<LiftedBody> = Vec::with_capacity(family.len());
    for m in family.members() {
        lifts.push(match a.kind {
            LiftKindArg::Width => {
                let v = parse_vector(a.v.as_deref().ok_or_else(|| anyhow!("--v is required for width"))?, d)?;
                lift_width(&h_member(&m.body, &m.id)?, &v)?
            }
            LiftKindArg::Discrete => {
                let v = match &a.v {
                    Some(text) => parse_vector(text, d)?,
                    None => generic_direction(d, a.radius),
                };
                lift_discrete(&m.body, a.k, &v)?
            }
            LiftKindArg::Boundary => lift_boundary(&h_member(&m.body, &m.id)?, &polytope_norm(&a.norm, d)?, a.facet)?,
            LiftKindArg::Product => {
                let norm = polytope_norm(&a.norm, d)?;
                let p = lift_product(&h_member(&m.body, &m.id)?, &norm)?;
                LiftedBody {
                    base_dim: d,
                    kind: LiftKind::Product,
                    body: ConvexBody::H(p.body),
                    direction: None,
                    k: Some(norm.facet_count()),
                    facet: None,
                }
            }
        });
    }
    let ids: Vec<String> = family.members().iter().map(|m| m.id.clone()).collect();
    let lifted = Family::from_lifts(&ids, lifts)?;
    write_or_return(&lifted, a.out.as_deref(), None)
}

/// Writes the family when `out` is set and returns `extra`; otherwise returns
/// the family itself, alongside `extra` if present.
fn write_or_return(family: &Family, out: Option<&Path>, extra: Option<(Value, bool)>) -> Result<Outcome> {
    let fam = family_json(family)?;
    match (out, extra) {
        (Some(path), extra) => {
            fs::write(path, crate::render::json_text(&fam)?).with_context(|| format!("writing {}", path.display()))?;
            match extra {
                Some((v, ok)) => Ok(Outcome { value: v, ok, csv: None }),
                None => Outcome::new(json!({ "written": path.display().to_string(), "members": family.len() }), true),
            }
        }
        (None, Some((v, ok))) => Outcome::new(json!({ "family": fam, "verification": v }), ok),
        (None, None) => Ok(Outcome { value: fam, ok: true, csv: None }),
    }
}

fn parse_params(raw: &[String], allowed: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in raw.iter().filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("parameter {item:?} is not key=value"))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            bail!("unknown parameter {k:?}; expected one of {}", allowed.join(", "));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn param_usize(p: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    p.get(key).map_or(Ok(default), |v| v.parse().with_context(|| format!("parameter {key}={v}")))
}

pub fn generate(cli: &Cli, a: &GenerateArgs) -> Result<Outcome> {
    let cfg = engine_config(cli);
    let (family, report, ok) = match a.construction {
        Construction::MinkowskiTight => {
            let p = parse_params(&a.params, &["d", "norm"])?;
            let d = param_usize(&p, "d", 2)?;
            let norm = polytope_norm(p.get("norm").map_or("linf", String::as_str), d)?;
            let (f, r) = gen_minkowski_tight(&norm, &cfg)?;
            let ok = r.verified;
            (f, serde_json::to_value(r)?, ok)
        }
        Construction::DiscreteTight => {
            let p = parse_params(&a.params, &["d"])?;
            let (f, r) = gen_discrete_tight(param_usize(&p, "d", 2)?, &cfg)?;
            let ok = r.verified;
            (f, serde_json::to_value(r)?, ok)
        }
        Construction::NonpolytopeDemo => {
            let p = parse_params(&a.params, &["n", "m"])?;
            let (f, r) = gen_nonpolytope_demo(param_usize(&p, "n", 3)?, param_usize(&p, "m", 12)?, &cfg)?;
            let ok = r.verified;
            (f, serde_json::to_value(r)?, ok)
        }
    };
    write_or_return(&family, a.out.as_deref(), Some((canonical(report), ok)))
}

pub fn gamma_cmd(a: &GammaArgs) -> Result<Outcome> {
    let evals = a.c.iter().map(|&c| gamma(c, a.dmax)).collect::<helly_core::Result<Vec<_>>>()?;
    let mut csv = String::from("c,gamma,argmin_d,gaussian_limit,d_max\n");
    for g in &evals {
        let argmin = g.argmin_d.map_or("inf".to_string(), |d| d.to_string());
        csv.push_str(&format!("{},{:.15},{},{:.15},{}\n", g.c, g.value, argmin, g.gaussian_limit, g.d_max));
    }
    let mut out = if evals.len() == 1 { Outcome::new(&evals[0], true)? } else { Outcome::new(&evals, true)? };
    out.csv = Some(csv);
    Ok(out)
}

pub fn beta_cmd(a: &BetaArgs) -> Result<Outcome> {
    let evals = a
        .c
        .iter()
        .map(|&c| beta_fractional(a.alpha, c, a.d, a.colorful, a.dmax).map(|b| (c, b)))
        .collect::<helly_core::Result<Vec<_>>>()?;
    let mut csv = String::from("alpha,c,d,colorful,gamma,beta,vacuous\n");
    let mut rows = Vec::with_capacity(evals.len());
    for (c, b) in &evals {
        csv.push_str(&format!("{},{},{},{},{:.15},{:.15},{}\n", b.alpha, c, b.d, b.colorful, b.gamma, b.value, b.vacuous));
        let mut v = serde_json::to_value(b)?;
        v["c"] = json!(c);
        rows.push(v);
    }
    let value = if rows.len() == 1 { rows.remove(0) } else { Value::Array(rows) };
    Ok(Outcome { value: canonical(value), ok: true, csv: Some(csv) })
}

pub fn certify(cli: &Cli, a: &CertifyArgs) -> Result<Outcome> {
    let family = read_family(&a.family)?;
    let norm = polytope_norm(&a.norm, family.dim())?;
    let strategy = match a.strategy {
        StrategyArg::MinG => CertifyStrategy::MinG,
        StrategyArg::MaxG => CertifyStrategy::MaxG,
    };
    let outcome = certify_diameter(&family, &norm, a.steps, strategy, &engine_config(cli))?;
    let ok = matches!(outcome, CertifyOutcome::Certified(_));
    Outcome::new(outcome, ok)
}
