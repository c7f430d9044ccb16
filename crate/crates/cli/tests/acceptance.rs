//! Acceptance suite: one PASS/FAIL line per criterion, with runtimes.
//! Runs without the libtest harness so the lines always reach the output.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use helly_core::analytics::{beta_fractional, cap_fraction, gamma, r_d};
use helly_core::combinatorics::KSubsets;
use helly_core::constructions::random::{
    random_direction, random_h_family, random_lattice_family, random_point, random_polytope, random_radon_points,
    RandomShape,
};
use helly_core::engine::{
    certify_diameter, search_counterexamples, CertifyOutcome, CertifyStrategy, EngineConfig, Predicate,
};
use helly_core::geometry::rational::{int, ratio};
use helly_core::geometry::{member, parse_rational, radon_partition, ConvexBody, Rational, Region, VBody};
use helly_core::lift::lift_width;
use helly_core::norms::{l2_diameter_region, rho_diameter_region, v_width, Extent, PolytopeNorm};
use helly_core::Family;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde_json::Value;

type Outcome = Result<String, String>;

/// Number, name, time budget in seconds and check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn helly(args: &[&str]) -> (Option<i32>, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_helly")).args(args).output().expect("binary runs");
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&out.stderr).into_owned()));
    (out.status.code(), value)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn read_family(path: &Path) -> Result<Family, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    Family::from_json(&text).map_err(|e| e.to_string())
}

fn rational(v: &Value) -> Result<Rational, String> {
    parse_rational(v.as_str().ok_or("expected a rational string")?).map_err(|e| e.to_string())
}

/// Members wide enough that diameter hypotheses at threshold 1 often hold.
fn wide_shape() -> RandomShape {
    RandomShape { min_radius: 0.35, max_radius: 1.5, cuts: 1, ..RandomShape::default() }
}

fn discrete_tightness() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (d, m, subsets) in [(2usize, 7usize, 8u64), (1, 1, 2), (3, 23, 24)] {
        let file = dir.path().join(format!("d{d}.json"));
        let file_s = file.to_str().unwrap();
        let (code, gen) = helly(&["generate", "--construction", "discrete-tight", "--params", &format!("d={d}"), "-o", file_s]);
        ensure(code == Some(0) && gen["verified"] == true, format!("d={d}: generation not verified: {gen}"))?;
        let (_, rep) = helly(&["check", "--family", file_s, "-m", &m.to_string(), "--predicate", "colinear", "-k", "3"]);
        ensure(rep["alpha"] == "1", format!("d={d}: alpha = {}", rep["alpha"]))?;
        ensure(rep["total"] == subsets, format!("d={d}: {} subsets checked", rep["total"]))?;
        ensure(rep["conclusion"]["holds"] == false, format!("d={d}: conclusion holds"))?;
        let expected: Vec<Value> = (0..1usize << d)
            .map(|mask| Value::Array((0..d).map(|i| Value::String(format!("{}", 1 + ((mask >> (d - 1 - i)) & 1)))).collect()))
            .collect();
        ensure(gen["full_lattice_points"] == Value::Array(expected), format!("d={d}: lattice points differ"))?;
        notes.push(format!("d={d} m={m}"));
    }
    Ok(format!("{}: alpha = 1, conclusion false, full lattice = {{1,2}}^d", notes.join(", ")))
}

fn colinear_suite() -> Outcome {
    let cfg = EngineConfig::default();
    let pred = Predicate::ContainsKColinear { k: 2 };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut notes = Vec::new();
    for (d, m, n, count) in [(1usize, 4usize, 6usize, 300usize), (2, 16, 18, 100)] {
        let families: Vec<Family> =
            (0..count).map(|_| random_lattice_family(&mut rng, d, n, &RandomShape::lattice()).unwrap()).collect();
        let r = search_counterexamples(families, m, &pred, &pred, &cfg).map_err(|e| e.to_string())?;
        ensure(r.counterexamples.is_empty(), format!("d={d}: {} counterexamples", r.counterexamples.len()))?;
        ensure(r.errors == 0, format!("d={d}: {} evaluation errors", r.errors))?;
        ensure(r.hypothesis_satisfied > 0, format!("d={d}: hypothesis never satisfied"))?;
        notes.push(format!("d={d}: {}/{} satisfy hypothesis", r.hypothesis_satisfied, r.trials));
    }
    Ok(notes.join("; "))
}

fn minkowski_tightness() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (norm, d) in [("linf", 2usize), ("l1", 2), ("linf", 3)] {
        let start = Instant::now();
        let file = dir.path().join(format!("{norm}{d}.json"));
        let params = format!("norm={norm},d={d}");
        let (code, rep) =
            helly(&["generate", "--construction", "minkowski-tight", "--params", &params, "-o", file.to_str().unwrap()]);
        ensure(code == Some(0) && rep["verified"] == true, format!("{params}: {rep}"))?;
        // Independent recheck from the emitted file.
        let family = read_family(&file)?;
        let pn = if norm == "linf" { PolytopeNorm::linf(d) } else { PolytopeNorm::l1(d) };
        let n = family.len();
        ensure(n == 2 * d * d, format!("{params}: {n} members"))?;
        for skip in 0..n {
            let region = Region::of(d, family.members().iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, m)| &m.body))
                .map_err(|e| e.to_string())?;
            match rho_diameter_region(&region, &pn).map_err(|e| e.to_string())? {
                Extent::Finite(c) => ensure(c.value > int(2), format!("{params}: subset without {skip} has diameter {}", c.value))?,
                Extent::Unbounded => {}
                Extent::Empty => return Err(format!("{params}: empty subset intersection")),
            }
        }
        let full = Region::of(d, family.bodies()).map_err(|e| e.to_string())?;
        let full = match rho_diameter_region(&full, &pn).map_err(|e| e.to_string())? {
            Extent::Finite(c) => c.value,
            other => return Err(format!("{params}: full intersection {other:?}")),
        };
        ensure(full <= int(2), format!("{params}: full diameter {full}"))?;
        ensure(rational(&rep["full_diameter"])? == full, "report and recheck disagree")?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(60), format!("{params}: {elapsed:?}"))?;
        notes.push(format!("{norm} d={d}: {n} subsets > 2, full = {full}"));
    }
    Ok(notes.join("; "))
}

fn width_suite() -> Outcome {
    let cfg = EngineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = RandomShape::default();
    let (mut satisfied, mut trials) = (0, 0);
    for i in 0..500 {
        let d = if i % 2 == 0 { 2 } else { 3 };
        let family = random_h_family(&mut rng, d, 2 * d + 2, &shape).map_err(|e| e.to_string())?;
        let v = random_direction(&mut rng, d, 2);
        let pred = Predicate::v_width(v, &int(1));
        let r = search_counterexamples([family], 2 * d, &pred, &pred, &cfg).map_err(|e| e.to_string())?;
        ensure(r.counterexamples.is_empty(), format!("family {i}: counterexample"))?;
        ensure(r.errors == 0, format!("family {i}: evaluation error"))?;
        satisfied += r.hypothesis_satisfied;
        trials += r.trials;
    }
    ensure(satisfied > 0, "hypothesis never satisfied")?;
    let mut agree = 0;
    for _ in 0..200 {
        let d = rng.random_range(1..=3);
        let center = random_point(&mut rng, d, -1.0, 1.0, 6);
        let shape = RandomShape { min_radius: 0.2, max_radius: 0.9, ..RandomShape::default() };
        let body = random_polytope(&mut rng, &center, &shape).map_err(|e| e.to_string())?;
        let v = random_direction(&mut rng, d, 3);
        let width = v_width(&body, &v).map_err(|e| e.to_string())?.finite().ok_or("unbounded body")?.value.clone();
        let lift = lift_width(&body, &v).map_err(|e| e.to_string())?;
        let nonempty = !Region::new(2 * d).with(&lift.body).is_empty().map_err(|e| e.to_string())?;
        ensure(nonempty == (width >= int(1)), "lift equivalence fails")?;
        agree += 1;
    }
    Ok(format!("{satisfied}/{trials} families satisfy the 2d-subset hypothesis, all transfer; lift equivalence on {agree} bodies"))
}

fn rho_suite() -> Outcome {
    let cfg = EngineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let norm = PolytopeNorm::linf(2);
    let pred = Predicate::rho_diameter(norm, int(1), false);
    let families: Vec<Family> = (0..200).map(|_| random_h_family(&mut rng, 2, 10, &wide_shape()).unwrap()).collect();
    let r = search_counterexamples(families, 8, &pred, &pred, &cfg).map_err(|e| e.to_string())?;
    ensure(r.counterexamples.is_empty(), format!("{} counterexamples", r.counterexamples.len()))?;
    ensure(r.errors == 0 && r.hypothesis_satisfied > 0, format!("{r:?}"))?;
    Ok(format!("{}/{} families satisfy the 8-subset hypothesis, all transfer", r.hypothesis_satisfied, r.trials))
}

fn euclidean_suite() -> Outcome {
    let cfg = EngineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let hyp = Predicate::l2_diameter(&int(1), false);
    let concl = Predicate::l2_diameter_squared(ratio(1, 2), false);
    let shape = wide_shape();
    let (mut passing, mut trials) = (0, 0);
    while passing < 100 {
        if trials >= 5000 {
            return Err(format!("only {passing} of {trials} families pass the hypothesis"));
        }
        let family = random_h_family(&mut rng, 2, 9, &shape).map_err(|e| e.to_string())?;
        let r = search_counterexamples([family], 8, &hyp, &concl, &cfg).map_err(|e| e.to_string())?;
        ensure(r.counterexamples.is_empty(), format!("trial {trials}: full squared diameter below 1/2"))?;
        ensure(r.errors == 0, format!("trial {trials}: evaluation error"))?;
        passing += r.hypothesis_satisfied;
        trials += 1;
    }
    Ok(format!("{passing} passing instances out of {trials}, all with squared diameter >= 1/2"))
}

fn certificate_suite() -> Outcome {
    let cfg = EngineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let norm = PolytopeNorm::linf(2);
    let (mut certified, mut trials) = (0, 0);
    let mut smallest_margin: Option<Rational> = None;
    while certified < 20 {
        if trials >= 500 {
            return Err(format!("only {certified} certified in {trials} trials"));
        }
        trials += 1;
        let family = random_h_family(&mut rng, 2, 9, &wide_shape()).map_err(|e| e.to_string())?;
        let cert = match certify_diameter(&family, &norm, 20, CertifyStrategy::MinG, &cfg).map_err(|e| e.to_string())? {
            CertifyOutcome::Certified(c) => c,
            CertifyOutcome::Refused { .. } => continue,
        };
        ensure(cert.beta_sequence.len() == 20, "sequence length")?;
        for (i, b) in cert.beta_sequence.iter().enumerate() {
            let n = i as i64 + 1;
            let bound = ratio(n, n + 1);
            ensure(*b >= bound, format!("beta_{n} = {b} below {n}/{}", n + 1))?;
            ensure(*b <= cert.rho_diameter, format!("beta_{n} exceeds the diameter"))?;
            if i > 0 {
                ensure(cert.beta_sequence[i - 1] <= *b, "sequence decreases")?;
            }
            let margin = b - &bound;
            if smallest_margin.as_ref().is_none_or(|m| margin < *m) {
                smallest_margin = Some(margin);
            }
        }
        certified += 1;
    }
    Ok(format!(
        "{certified} certificates in {trials} trials; smallest beta_n - n/(n+1) = {}",
        smallest_margin.unwrap()
    ))
}

/// Fraction of the unit `d`-ball with first coordinate at least `h`,
/// sampled as `U^(1/d) * Z / sqrt(Z^2 + chi^2_(d-1))`.
fn monte_carlo_cap(d: usize, h: f64, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let chi = ChiSquared::new((d - 1) as f64).unwrap();
    let mut hits = 0usize;
    for _ in 0..samples {
        let z: f64 = StandardNormal.sample(rng);
        let rest = chi.sample(rng);
        let radius = rng.random::<f64>().powf(1.0 / d as f64);
        if radius * z / (z * z + rest).sqrt() >= h {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

fn analytics_suite() -> Outcome {
    let map = |e: helly_core::Error| e.to_string();
    let g = gamma(0.01, 200).map_err(map)?.value;
    ensure(g > 0.97, format!("gamma(0.01) = {g}"))?;
    let grid: Vec<f64> = (1..=50).map(|i| 0.05 + 1.25 * i as f64 / 51.0).collect();
    let values = grid.iter().map(|&c| gamma(c, 200).map(|g| g.value)).collect::<helly_core::Result<Vec<_>>>().map_err(map)?;
    ensure(values.windows(2).all(|w| w[1] < w[0]), "gamma not decreasing on the grid")?;
    let segment = (PI / 3.0 - 3f64.sqrt() / 4.0) / PI;
    let cap = cap_fraction(2, 0.5).map_err(map)?;
    ensure((cap - segment).abs() < 1e-9, format!("cap_fraction(2, 1/2) = {cap}, segment {segment}"))?;
    let r2 = r_d(2).map_err(map)?;
    ensure((r2 - 1.0 / PI.sqrt()).abs() < 1e-12, format!("r_2 = {r2}"))?;
    let beta = beta_fractional(1.0, 0.01, 2, false, 200).map_err(map)?.value;
    ensure(beta > 0.55, format!("beta = {beta}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let d = rng.random_range(2..=12);
        let h = rng.random_range(0.0..0.6);
        let exact = cap_fraction(d, h).map_err(map)?;
        let n = 10_000_000;
        let est = monte_carlo_cap(d, h, n, &mut rng);
        let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
        let z = (est - exact).abs() / sigma;
        ensure(z <= 3.0, format!("d={d} h={h:.4}: quadrature {exact}, sampled {est}, {z:.2} sigma"))?;
        worst = worst.max(z);
    }
    Ok(format!("gamma(0.01) = {g:.6}, beta = {beta:.6}, r_2 error {:.1e}, worst Monte-Carlo deviation {worst:.2} sigma", (r2 - 1.0 / PI.sqrt()).abs()))
}

fn nonpolytope_demo() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("np.json");
    let (code, rep) = helly(&["generate", "--construction", "nonpolytope-demo", "--params", "n=3", "-o", file.to_str().unwrap()]);
    ensure(code == Some(0) && rep["verified"] == true, format!("{rep}"))?;
    let family = read_family(&file)?;
    let mut checked = 0;
    let mut weakest: Option<Rational> = None;
    for subset in KSubsets::new(family.len(), 3) {
        let sub = family.subfamily(&subset);
        let region = Region::of(2, sub.bodies()).map_err(|e| e.to_string())?;
        match l2_diameter_region(&region).map_err(|e| e.to_string())? {
            Extent::Finite(c) => {
                ensure(c.squared >= int(1), format!("subset {subset:?} has squared diameter {}", c.squared))?;
                if weakest.as_ref().is_none_or(|w| c.squared < *w) {
                    weakest = Some(c.squared);
                }
            }
            Extent::Unbounded => {}
            Extent::Empty => return Err(format!("subset {subset:?} is empty")),
        }
        checked += 1;
    }
    let full = Region::of(2, family.bodies()).map_err(|e| e.to_string())?;
    let full = match l2_diameter_region(&full).map_err(|e| e.to_string())? {
        Extent::Finite(c) => c.squared,
        other => return Err(format!("full intersection {other:?}")),
    };
    ensure(full < int(1), format!("full squared diameter {full}"))?;
    let f = |r: &Rational| helly_core::geometry::rational::to_f64(r);
    Ok(format!(
        "{checked} triples, smallest squared diameter {:.6} >= 1; full {:.6} < 1",
        f(weakest.as_ref().unwrap_or(&int(1))),
        f(&full)
    ))
}

fn radon_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..10_000 {
        let d = rng.random_range(1..=4);
        let extra = rng.random_range(0..=1);
        let den = rng.random_range(1..=4);
        let pts = random_radon_points(&mut rng, d, d + 2 + extra, 5, den);
        let part = radon_partition(&pts).map_err(|e| e.to_string())?;
        let a = ConvexBody::V(VBody::new(part.part_a.clone()).map_err(|e| e.to_string())?);
        let b = ConvexBody::V(VBody::new(part.part_b.clone()).map_err(|e| e.to_string())?);
        let ok = member(&part.witness, &a).map_err(|e| e.to_string())? && member(&part.witness, &b).map_err(|e| e.to_string())?;
        ensure(ok, format!("instance {i}: witness outside a hull"))?;
    }
    Ok("10000 instances, every witness in both hulls".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "discrete tightness", 300, discrete_tightness),
        (2, "colinear lattice points, Helly property", 600, colinear_suite),
        (3, "Minkowski tightness", 180, minkowski_tightness),
        (4, "v-width from 2d-subsets", 300, width_suite),
        (5, "rho-diameter from kd-subsets", 300, rho_suite),
        (6, "Euclidean diameter d^(-1/2) bound", 300, euclidean_suite),
        (7, "iterative diameter certificate", 120, certificate_suite),
        (8, "cap-volume analytics", 120, analytics_suite),
        (9, "non-polytope demo", 60, nonpolytope_demo),
        (10, "Radon oracle", 60, radon_oracle),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|note| {
            if elapsed > Duration::from_secs(budget) {
                Err(format!("{note}; exceeded the {budget}s budget"))
            } else {
                Ok(note)
            }
        });
        match result {
            Ok(note) => println!("PASS  {id:>2}  {name}  [{:.2}s]  {note}", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {id:>2}  {name}  [{:.2}s]  {why}", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
