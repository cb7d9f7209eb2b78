//! Seeded and exhaustive sweeps that run both density deciders side by side.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::density::{is_dense_coset, is_dense_rank, DensityOptions, DensityVerdict};
use crate::error::{Error, Result};
use crate::group::{annihilator, quotient, GroupElement, GroupSpec, Limits, Subgroup};
use crate::measure::DiscreteMeasure;
use crate::wire;

const MAX_CYCLIC_N: u64 = 64;
const MAX_EXHAUSTIVE_SUPPORT: usize = 6;
const MAX_RANDOM_SUPPORT: usize = 16;
const MAX_INSTANCES: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupFamily {
    /// Every `Z_n` with `1 <= n <= max_n`, every support enumerated.
    Cyclic { max_n: u64 },
    /// Random products of cyclic groups with order at most `max_order`.
    Product { max_order: u64, max_factors: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum SubgroupPolicy {
    All,
    Random { k: usize },
}

fn default_policy() -> SubgroupPolicy {
    SubgroupPolicy::All
}

fn default_min_support() -> usize {
    1
}

fn default_rel_tol() -> f64 {
    crate::density::DEFAULT_REL_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: GroupFamily,
    #[serde(default = "default_policy")]
    pub subgroups: SubgroupPolicy,
    #[serde(default = "default_min_support")]
    pub min_support: usize,
    pub max_support: usize,
    /// Number of random instances, or a cap on exhaustive enumeration.
    #[serde(default)]
    pub instances: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Random positive weights instead of unit weights.
    #[serde(default)]
    pub random_weights: bool,
}

impl SweepConfig {
    fn validate(&self, limits: &Limits) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.min_support == 0 || self.min_support > self.max_support {
            return bad(format!(
                "support sizes {}..={} are empty or include 0",
                self.min_support, self.max_support
            ));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return bad(format!("rel_tol {} must lie in (0, 1)", self.rel_tol));
        }
        if self.instances.is_some_and(|n| n > MAX_INSTANCES) {
            return bad(format!("at most {MAX_INSTANCES} instances"));
        }
        match self.family {
            GroupFamily::Cyclic { max_n } => {
                if max_n == 0 || max_n > MAX_CYCLIC_N {
                    return bad(format!("cyclic max_n must lie in 1..={MAX_CYCLIC_N}"));
                }
                if self.max_support > MAX_EXHAUSTIVE_SUPPORT {
                    return bad(format!(
                        "exhaustive supports are limited to size {MAX_EXHAUSTIVE_SUPPORT}"
                    ));
                }
            }
            GroupFamily::Product {
                max_order,
                max_factors,
            } => {
                if max_order == 0 || max_order > limits.max_order {
                    return bad(format!("max_order must lie in 1..={}", limits.max_order));
                }
                if max_factors == 0 {
                    return bad("max_factors must be positive".into());
                }
                if self.max_support > MAX_RANDOM_SUPPORT {
                    return bad(format!("supports are limited to size {MAX_RANDOM_SUPPORT}"));
                }
                if self.instances.is_none() {
                    return bad("random product sweeps need `instances`".into());
                }
                if self.subgroups == SubgroupPolicy::All {
                    return bad("product sweeps draw subgroups at random; use policy `random`".into());
                }
            }
        }
        Ok(())
    }
}

/// One density question: does `P(H)` fill `L^α(μ)`?
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: GroupSpec,
    pub h: Subgroup,
    pub measure: DiscreteMeasure,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub rank: DensityVerdict,
    pub coset: DensityVerdict,
}

impl Outcome {
    pub fn agree(&self) -> bool {
        self.rank.dense == self.coset.dense
    }
}

/// Runs both deciders on one instance.
pub fn evaluate(inst: &Instance, opts: &DensityOptions) -> Result<Outcome> {
    let q = quotient(&inst.spec, &annihilator(&inst.spec, &inst.h)?)?;
    Ok(Outcome {
        rank: is_dense_rank(&inst.measure, &inst.h, 2.0, opts)?,
        coset: is_dense_coset(&inst.measure, &q)?,
    })
}

pub fn random_element<R: Rng>(rng: &mut R, spec: &GroupSpec) -> GroupElement {
    let coords: Vec<i64> = spec
        .factors()
        .iter()
        .map(|&n| rng.random_range(0..n) as i64)
        .collect();
    spec.element(&coords).expect("rank matches")
}

/// A random product of at most `max_factors` cyclic groups with order at most `max_order`.
pub fn random_group<R: Rng>(rng: &mut R, max_order: u64, max_factors: usize) -> GroupSpec {
    let rank = rng.random_range(1..=max_factors);
    let mut factors = Vec::with_capacity(rank);
    let mut budget = max_order;
    for _ in 0..rank {
        if budget < 2 {
            break;
        }
        // Log-uniform sizes keep small and large factors both common.
        let log = rng.random_range(0.0..(budget as f64).ln());
        let n = (log.exp().round() as u64).clamp(2, budget);
        factors.push(n as i64);
        budget /= n;
    }
    if factors.is_empty() {
        factors.push(1);
    }
    GroupSpec::new(&factors).expect("order within the default bound")
}

/// Subgroup generated by `0..=max_gens` random elements.
pub fn random_subgroup<R: Rng>(rng: &mut R, spec: &GroupSpec, max_gens: usize) -> Subgroup {
    let count = rng.random_range(0..=max_gens);
    let gens: Vec<GroupElement> = (0..count)
        .map(|_| {
            // Scale by a random divisor-ish multiplier to favour proper subgroups.
            let g = random_element(rng, spec);
            let k = rng.random_range(1..=4) as u64;
            let coords: Vec<i64> = g.coords().iter().map(|&c| (c * k) as i64).collect();
            spec.element(&coords).expect("rank matches")
        })
        .collect();
    Subgroup::from_generators(spec, &gens).expect("generators are valid")
}

/// Random element of a subgroup as an integer combination of its generators.
pub fn random_member<R: Rng>(rng: &mut R, h: &Subgroup) -> GroupElement {
    let spec = h.parent();
    h.generators().iter().fold(spec.zero(), |acc, g| {
        let k = rng.random_range(0..spec.order().max(1));
        let coords: Vec<i64> = g
            .coords()
            .iter()
            .zip(spec.factors())
            .map(|(&c, &n)| ((c as u128 * k as u128) % n as u128) as i64)
            .collect();
        spec.add(&acc, &spec.element(&coords).expect("rank matches"))
    })
}

/// `size` distinct points; about half of the draws plant shared cosets by
/// adding random annihilator elements to earlier points.
pub fn random_support<R: Rng>(rng: &mut R, spec: &GroupSpec, lambda: &Subgroup, size: usize) -> Vec<GroupElement> {
    let size = size.min(spec.order() as usize);
    let plant = rng.random_bool(0.5) && lambda.order() > 1;
    let mut points: Vec<GroupElement> = Vec::with_capacity(size);
    let mut attempts = 0;
    while points.len() < size {
        attempts += 1;
        let p = if plant && !points.is_empty() && rng.random_bool(0.4) && attempts < 64 * size {
            let base = &points[rng.random_range(0..points.len())];
            spec.add(base, &random_member(rng, lambda))
        } else {
            random_element(rng, spec)
        };
        if !points.contains(&p) {
            points.push(p);
        }
    }
    points
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Instances in a deterministic order fixed by the config (and its seed).
pub fn generate(config: &SweepConfig, limits: &Limits) -> Result<Vec<Instance>> {
    config.validate(limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let cap = config.instances.unwrap_or(u64::MAX) as usize;
    let mut out = Vec::new();
    let weight = |rng: &mut ChaCha8Rng| {
        if config.random_weights {
            rng.random_range(0.1..3.0)
        } else {
            1.0
        }
    };

    match config.family {
        GroupFamily::Cyclic { max_n } => {
            'outer: for n in 1..=max_n {
                let spec = GroupSpec::new(&[n as i64])?;
                let mut ds = divisors(n);
                if let SubgroupPolicy::Random { k } = config.subgroups {
                    let picked = sample(&mut rng, ds.len(), k.min(ds.len()));
                    let mut chosen: Vec<u64> = picked.iter().map(|i| ds[i]).collect();
                    chosen.sort_unstable();
                    ds = chosen;
                }
                for d in ds {
                    let h = Subgroup::from_generators(&spec, &[spec.element(&[d as i64])?])?;
                    for size in config.min_support..=config.max_support {
                        let mut stop = false;
                        let mut failure = None;
                        combinations(n as usize, size, |idx| {
                            if out.len() >= cap {
                                stop = true;
                                return false;
                            }
                            let atoms: Vec<(GroupElement, f64)> = idx
                                .iter()
                                .map(|&i| (spec.element_at(i), weight(&mut rng)))
                                .collect();
                            match DiscreteMeasure::nonnegative(&spec, atoms) {
                                Ok(measure) => out.push(Instance {
                                    spec: spec.clone(),
                                    h: h.clone(),
                                    measure,
                                }),
                                Err(e) => {
                                    failure = Some(e);
                                    return false;
                                }
                            }
                            true
                        });
                        if let Some(e) = failure {
                            return Err(e);
                        }
                        if stop {
                            break 'outer;
                        }
                    }
                }
            }
        }
        GroupFamily::Product {
            max_order,
            max_factors,
        } => {
            let k = match config.subgroups {
                SubgroupPolicy::Random { k } => k,
                SubgroupPolicy::All => unreachable!("rejected by validate"),
            };
            for _ in 0..cap {
                let spec = random_group(&mut rng, max_order, max_factors);
                let h = random_subgroup(&mut rng, &spec, k);
                let lambda = annihilator(&spec, &h)?;
                let size = rng.random_range(config.min_support..=config.max_support);
                let points = random_support(&mut rng, &spec, &lambda, size);
                let atoms = points.into_iter().map(|p| (p, weight(&mut rng))).collect();
                out.push(Instance {
                    measure: DiscreteMeasure::nonnegative(&spec, atoms)?,
                    spec,
                    h,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub config: SweepConfig,
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub dense: usize,
    pub not_dense: usize,
    pub disagreement_dumps: Vec<Value>,
}

fn dump(inst: &Instance, out: &Outcome) -> Value {
    json!({
        "group": { "invariant_factors": inst.spec.factors() },
        "subgroup": wire::subgroup_json(&inst.h),
        "measure": wire::measure_json(&inst.measure),
        "rank_verdict": wire::verdict_json(&out.rank),
        "coset_verdict": wire::verdict_json(&out.coset),
    })
}

/// Generates and evaluates every instance; the report depends only on the config.
pub fn equivalence_sweep(config: &SweepConfig, limits: &Limits) -> Result<SweepReport> {
    let instances = generate(config, limits)?;
    let opts = DensityOptions {
        rel_tol: config.rel_tol,
        limits: *limits,
    };
    let outcomes: Vec<Outcome> = instances
        .par_iter()
        .map(|inst| evaluate(inst, &opts))
        .collect::<Result<_>>()?;

    let mut report = SweepReport {
        seed: config.seed,
        config: config.clone(),
        instances: instances.len(),
        agreements: 0,
        disagreements: 0,
        dense: 0,
        not_dense: 0,
        disagreement_dumps: Vec::new(),
    };
    for (inst, out) in instances.iter().zip(&outcomes) {
        if out.coset.dense {
            report.dense += 1;
        } else {
            report.not_dense += 1;
        }
        if out.agree() {
            report.agreements += 1;
        } else {
            report.disagreements += 1;
            report.disagreement_dumps.push(dump(inst, out));
        }
    }
    Ok(report)
}
