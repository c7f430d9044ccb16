use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::predicate::{Evaluation, Evaluator, Measure, Predicate};
use crate::combinatorics::{binomial, random_k_subset, KSubsets};
use crate::error::{Error, Result};
use crate::family::{ColorfulFamilies, Family};
use crate::geometry::rational::serde_str;
use crate::geometry::Rational;

/// Enumeration limits and reproducibility settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Exhaustive enumeration up to this many subsets or tuples.
    pub subset_cap: u128,
    /// Number of uniform samples drawn above the cap.
    pub sample_size: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Stop at the first subset that fails the hypothesis.
    pub fail_fast: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { subset_cap: 2_000_000, sample_size: 20_000, seed: 0, jobs: None, fail_fast: false }
    }
}

impl EngineConfig {
    pub fn fail_fast(mut self) -> Self {
        self.fail_fast = true;
        self
    }

    pub(crate) fn install<T: Send>(&self, work: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            None => Ok(work()),
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map(|pool| pool.install(work))
                .map_err(|e| Error::InvalidArgument(e.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetError {
    pub ids: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetValue {
    pub ids: Vec<String>,
    pub measure: Measure,
}

const ERROR_SAMPLES: usize = 16;
const CHUNK: usize = 1024;

/// Hypothesis statistics over `m`-subsets plus the conclusion on the full
/// intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FractionalReport {
    pub family_size: usize,
    pub subset_size: usize,
    pub hypothesis: Predicate,
    pub conclusion_predicate: Predicate,
    /// Number of subsets in the family, as a decimal string.
    pub population: String,
    pub sampled: bool,
    /// False when enumeration stopped at the first failure.
    pub complete: bool,
    pub total: u64,
    pub satisfying: u64,
    pub errors: u64,
    pub error_samples: Vec<SubsetError>,
    #[serde(with = "serde_str")]
    pub alpha: Rational,
    /// Every subset was enumerated and satisfied the hypothesis.
    pub hypothesis_holds: bool,
    pub conclusion: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion_error: Option<String>,
    /// The conclusion's verdict, present when the hypothesis holds.
    pub helly_transfer: Option<bool>,
    pub first_failure: Option<Vec<String>>,
    /// Subset with the smallest measured value; ties go to the smallest ids.
    pub weakest_subset: Option<SubsetValue>,
    pub best_subfamily: Option<SubsetValue>,
}

impl FractionalReport {
    pub fn conclusion_value(&self) -> Option<&Measure> {
        self.conclusion.as_ref().and_then(|c| c.measure.as_ref())
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    satisfying: u64,
    errors: u64,
    error_samples: Vec<SubsetError>,
    first_failure: Option<Vec<String>>,
    weakest: Option<SubsetValue>,
    stopped: bool,
}

impl Tally {
    fn absorb(&mut self, ids: Vec<String>, outcome: Result<Evaluation>, fail_fast: bool) {
        self.total += 1;
        match outcome {
            Ok(e) => {
                if e.holds {
                    self.satisfying += 1;
                } else if self.first_failure.is_none() {
                    self.first_failure = Some(ids.clone());
                }
                if !e.holds && fail_fast {
                    self.stopped = true;
                }
                if let Some(m) = e.measure {
                    let replace = match &self.weakest {
                        None => true,
                        Some(w) => match m.partial_cmp(&w.measure) {
                            Some(std::cmp::Ordering::Less) => true,
                            Some(std::cmp::Ordering::Equal) => ids < w.ids,
                            _ => false,
                        },
                    };
                    if replace {
                        self.weakest = Some(SubsetValue { ids, measure: m });
                    }
                }
            }
            Err(err) => {
                self.errors += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(ids.clone());
                }
                if fail_fast {
                    self.stopped = true;
                }
                if self.error_samples.len() < ERROR_SAMPLES {
                    self.error_samples.push(SubsetError { ids, message: err.to_string() });
                }
            }
        }
    }
}

/// Evaluates `chunks` of index lists in parallel, absorbing results in order.
fn run<I>(evaluator: &Evaluator<'_>, subsets: I, ids: impl Fn(&[usize]) -> Vec<String> + Sync, cfg: &EngineConfig) -> Result<Tally>
where
    I: Iterator<Item = Vec<usize>> + Send,
{
    cfg.install(|| {
        let mut tally = Tally::default();
        let mut subsets = subsets;
        loop {
            let chunk: Vec<Vec<usize>> = subsets.by_ref().take(if cfg.fail_fast { 16 } else { CHUNK }).collect();
            if chunk.is_empty() {
                break;
            }
            let results: Vec<Result<Evaluation>> = chunk.par_iter().map(|s| evaluator.evaluate(s)).collect();
            for (s, r) in chunk.iter().zip(results) {
                tally.absorb(ids(s), r, cfg.fail_fast);
                if tally.stopped {
                    return tally;
                }
            }
        }
        tally
    })
}

pub(crate) fn subset_source(n: usize, m: usize, cfg: &EngineConfig) -> (Box<dyn Iterator<Item = Vec<usize>> + Send>, bool) {
    if binomial(n, m) <= cfg.subset_cap {
        (Box::new(KSubsets::new(n, m)), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let samples: Vec<Vec<usize>> = (0..cfg.sample_size).map(|_| random_k_subset(&mut rng, n, m)).collect();
        (Box::new(samples.into_iter()), true)
    }
}

fn population_string(sizes: &[usize], choose: Option<usize>) -> String {
    match choose {
        Some(m) => crate::combinatorics::binomial_exact(sizes[0], m).to_string(),
        None => sizes.iter().fold(BigInt::from(1), |acc, &s| acc * s).to_string(),
    }
}

pub fn check_helly(family: &Family, m: usize, predicate: &Predicate, cfg: &EngineConfig) -> Result<FractionalReport> {
    check_helly_with(family, m, predicate, predicate, cfg)
}

/// Evaluates `hypothesis` on every `m`-subset and `conclusion` on the
/// intersection of the whole family.
pub fn check_helly_with(
    family: &Family,
    m: usize,
    hypothesis: &Predicate,
    conclusion: &Predicate,
    cfg: &EngineConfig,
) -> Result<FractionalReport> {
    let n = family.len();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!("subset size {m} must lie in 1..={n}")));
    }
    let bodies: Vec<_> = family.bodies().collect();
    let evaluator = Evaluator::new(family.dim(), bodies.clone(), hypothesis)?;
    let (source, sampled) = subset_source(n, m, cfg);
    let tally = run(&evaluator, source, |s| family.ids(s), cfg)?;

    let all: Vec<usize> = (0..n).collect();
    let concluded = if tally.stopped {
        Err(Error::Unsupported("skipped after a hypothesis failure".into()))
    } else if conclusion == hypothesis {
        evaluator.evaluate(&all)
    } else {
        Evaluator::new(family.dim(), bodies, conclusion).and_then(|e| e.evaluate(&all))
    };
    Ok(finish(n, m, hypothesis, conclusion, sampled, tally, concluded))
}

fn finish(
    n: usize,
    m: usize,
    hypothesis: &Predicate,
    conclusion: &Predicate,
    sampled: bool,
    tally: Tally,
    concluded: Result<Evaluation>,
) -> FractionalReport {
    let alpha = if tally.total == 0 {
        Rational::from_integer(0.into())
    } else {
        Rational::new(tally.satisfying.into(), tally.total.into())
    };
    let hypothesis_holds = !sampled && !tally.stopped && tally.total > 0 && tally.satisfying == tally.total;
    let (conclusion_eval, conclusion_error) = match concluded {
        Ok(e) => (Some(e), None),
        Err(_) if tally.stopped => (None, None),
        Err(e) => (None, Some(e.to_string())),
    };
    let helly_transfer = if hypothesis_holds { conclusion_eval.as_ref().map(|c| c.holds) } else { None };
    FractionalReport {
        family_size: n,
        subset_size: m,
        hypothesis: hypothesis.clone(),
        conclusion_predicate: conclusion.clone(),
        population: population_string(&[n], Some(m)),
        sampled,
        complete: !tally.stopped,
        total: tally.total,
        satisfying: tally.satisfying,
        errors: tally.errors,
        error_samples: tally.error_samples,
        alpha,
        hypothesis_holds,
        conclusion: conclusion_eval,
        conclusion_error,
        helly_transfer,
        first_failure: tally.first_failure,
        weakest_subset: tally.weakest,
        best_subfamily: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorConclusion {
    pub color: usize,
    pub evaluation: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorfulReport {
    pub colors: usize,
    pub predicate: Predicate,
    pub population: String,
    pub sampled: bool,
    pub complete: bool,
    pub total: u64,
    pub satisfying: u64,
    pub errors: u64,
    pub error_samples: Vec<SubsetError>,
    #[serde(with = "serde_str")]
    pub alpha: Rational,
    pub hypothesis_holds: bool,
    pub per_color: Vec<ColorConclusion>,
    pub concluding_colors: Vec<usize>,
    /// Present when the hypothesis holds: some color class satisfies the predicate.
    pub colorful_transfer: Option<bool>,
    pub first_failure: Option<Vec<String>>,
    pub weakest_tuple: Option<SubsetValue>,
}

/// Mixed-radix enumeration of colorful tuples as flat body indices.
struct Tuples {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.clone()?;
        let out = cur.iter().zip(&self.offsets).map(|(c, o)| c + o).collect();
        let mut next = cur;
        let mut i = next.len();
        self.current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] + 1 < self.sizes[i] {
                next[i] += 1;
                next[i + 1..].iter_mut().for_each(|c| *c = 0);
                break Some(next);
            }
        };
        Some(out)
    }
}

pub fn check_colorful(colors: &ColorfulFamilies, predicate: &Predicate, cfg: &EngineConfig) -> Result<ColorfulReport> {
    let families = colors.families();
    let sizes: Vec<usize> = families.iter().map(Family::len).collect();
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for s in &sizes {
        offsets.push(acc);
        acc += s;
    }
    let bodies: Vec<_> = families.iter().flat_map(Family::bodies).collect();
    // Flat index -> "color:id" labels.
    let labels: Vec<String> =
        families.iter().enumerate().flat_map(|(c, f)| f.members().iter().map(move |m| format!("{c}:{}", m.id))).collect();
    let evaluator = Evaluator::new(colors.dim(), bodies, predicate)?;
    let population = colors.tuple_count();
    let sampled = population > cfg.subset_cap;
    let source: Box<dyn Iterator<Item = Vec<usize>> + Send> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let samples: Vec<Vec<usize>> = (0..cfg.sample_size)
            .map(|_| {
                use rand::Rng;
                sizes.iter().zip(&offsets).map(|(&s, &o)| o + rng.random_range(0..s)).collect()
            })
            .collect();
        Box::new(samples.into_iter())
    } else {
        Box::new(Tuples { sizes: sizes.clone(), offsets: offsets.clone(), current: Some(vec![0; sizes.len()]) })
    };
    let tally = run(&evaluator, source, |s| s.iter().map(|&i| labels[i].clone()).collect(), cfg)?;

    let mut per_color = Vec::with_capacity(families.len());
    for (c, (&o, &s)) in offsets.iter().zip(&sizes).enumerate() {
        let idx: Vec<usize> = (o..o + s).collect();
        per_color.push(match evaluator.evaluate(&idx) {
            Ok(e) => ColorConclusion { color: c, evaluation: Some(e), error: None },
            Err(e) => ColorConclusion { color: c, evaluation: None, error: Some(e.to_string()) },
        });
    }
    let concluding_colors: Vec<usize> =
        per_color.iter().filter(|c| c.evaluation.as_ref().is_some_and(|e| e.holds)).map(|c| c.color).collect();
    let hypothesis_holds = !sampled && !tally.stopped && tally.total > 0 && tally.satisfying == tally.total;
    Ok(ColorfulReport {
        colors: families.len(),
        predicate: predicate.clone(),
        population: population_string(&sizes, None),
        sampled,
        complete: !tally.stopped,
        total: tally.total,
        satisfying: tally.satisfying,
        errors: tally.errors,
        error_samples: tally.error_samples,
        alpha: if tally.total == 0 {
            Rational::from_integer(0.into())
        } else {
            Rational::new(tally.satisfying.into(), tally.total.into())
        },
        hypothesis_holds,
        colorful_transfer: hypothesis_holds.then_some(!concluding_colors.is_empty()),
        per_color,
        concluding_colors,
        first_failure: tally.first_failure,
        weakest_tuple: tally.weakest,
    })
}

/// Outcome of running a Helly statement over many families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub trials: usize,
    pub hypothesis_satisfied: usize,
    pub conclusion_held: usize,
    pub errors: usize,
    pub counterexamples: Vec<Family>,
}

/// Checks "every `m`-subset satisfies `hypothesis` implies the family
/// satisfies `conclusion`" on each family; families smaller than `m` are
/// checked with `m = len`.
pub fn search_counterexamples(
    families: impl IntoIterator<Item = Family>,
    m: usize,
    hypothesis: &Predicate,
    conclusion: &Predicate,
    cfg: &EngineConfig,
) -> Result<SearchReport> {
    let cfg = cfg.clone().fail_fast();
    let mut report = SearchReport { trials: 0, hypothesis_satisfied: 0, conclusion_held: 0, errors: 0, counterexamples: Vec::new() };
    for family in families {
        report.trials += 1;
        let r = check_helly_with(&family, m.min(family.len()), hypothesis, conclusion, &cfg)?;
        if r.errors > 0 || r.conclusion_error.is_some() {
            report.errors += 1;
        }
        if r.hypothesis_holds {
            report.hypothesis_satisfied += 1;
            match r.helly_transfer {
                Some(true) => report.conclusion_held += 1,
                Some(false) => report.counterexamples.push(family),
                None => {}
            }
        }
    }
    Ok(report)
}
