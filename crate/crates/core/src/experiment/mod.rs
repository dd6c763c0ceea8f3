//! Structure and knowledge experiments on δ-adjusted subcontexts, and
//! enumeration timings.
//!
//! All randomness comes from ChaCha8 generators. Repetition `r` of a
//! knowledge experiment with seed `s` uses `ChaCha8Rng::seed_from_u64(s)`
//! on stream `r` and draws, in order: the label attribute, the train/test
//! permutation, then the sampled feature set. Serial and parallel runs
//! therefore agree exactly.

mod timing;
mod tree;

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adjust::{delta_adjust, AdjustedSelection};
use crate::lattice::{canonical_base, count_concepts};
use crate::par::map_ordered;
use crate::{Error, Execution, FormalContext, Result};

pub use timing::{benchmark_enumeration, Algorithm, AlgorithmTiming, TimingReport};
pub use tree::DecisionTree;

/// Number of seeds averaged for the sampled arm of structure metrics.
pub const STRUCTURE_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Adjusted,
    Sampled,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Adjusted => "adjusted",
            Method::Sampled => "sampled",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjusted" => Ok(Method::Adjusted),
            "sampled" => Ok(Method::Sampled),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub delta: f64,
    pub repetitions: usize,
    pub split_fraction: f64,
    pub seed: u64,
    /// Arms to run; both share labels and splits per repetition.
    pub methods: Vec<Method>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            delta: 0.5,
            repetitions: 1000,
            split_fraction: 0.5,
            seed: 0,
            methods: vec![Method::Adjusted, Method::Sampled],
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidArgument(format!(
                "delta must lie in [0, 1], got {}",
                self.delta
            )));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument("repetitions must be positive".into()));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "split fraction must lie in (0, 1), got {}",
                self.split_fraction
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("no method selected".into()));
        }
        Ok(())
    }
}

/// `n` attributes drawn uniformly without replacement, ascending.
pub fn sample_attributes(ctx: &FormalContext, n: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_from(&mut rng, &(0..ctx.n_attributes()).collect::<Vec<_>>(), n)
}

fn sample_from(rng: &mut ChaCha8Rng, pool: &[usize], n: usize) -> Result<Vec<usize>> {
    if n > pool.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot sample {n} of {} attributes",
            pool.len()
        )));
    }
    let mut out: Vec<usize> = index::sample(rng, pool.len(), n)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    out.sort_unstable();
    Ok(out)
}

fn split(rng: &mut ChaCha8Rng, n: usize, fraction: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    let n_train = (n as f64 * fraction).floor() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::InvalidArgument(format!(
            "split fraction {fraction} leaves an empty side for {n} objects"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let test = order.split_off(n_train);
    Ok((order, test))
}

/// Accuracy of a tree predicting `label` from `features` on a random split.
/// The first `⌊n · split_fraction⌋` objects of a seeded permutation train.
pub fn decision_tree_accuracy(
    data: &FormalContext,
    features: &[usize],
    label: usize,
    split_fraction: f64,
    seed: u64,
) -> Result<f64> {
    check_tree_input(data, features, label)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (train, test) = split(&mut rng, data.n_objects(), split_fraction)?;
    Ok(tree::accuracy(data, features, label, &train, &test))
}

fn check_tree_input(data: &FormalContext, features: &[usize], label: usize) -> Result<()> {
    data.attribute_set(features)?;
    data.attribute_set(&[label])?;
    if features.contains(&label) {
        return Err(Error::InvalidArgument("label is among the features".into()));
    }
    if data.n_objects() < 2 {
        return Err(Error::InvalidArgument("need at least two objects".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    pub method: Method,
    pub label: String,
    pub features: Vec<String>,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmSummary {
    pub method: Method,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    /// Concepts of the arm's subcontext; the sampled arm averages
    /// [`STRUCTURE_SAMPLES`] selections.
    pub concept_count: f64,
    pub base_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub selected: Vec<String>,
    pub arms: Vec<ArmSummary>,
    pub repetitions: Vec<RepetitionRecord>,
}

impl ExperimentResult {
    pub fn arm(&self, method: Method) -> Option<&ArmSummary> {
        self.arms.iter().find(|a| a.method == method)
    }

    /// `method,mean_accuracy,std_accuracy,concepts,base_size`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("method,mean_accuracy,std_accuracy,concepts,base_size\n");
        for a in &self.arms {
            let _ = writeln!(
                out,
                "{},{:.4},{:.4},{},{}",
                a.method.name(),
                a.mean_accuracy,
                a.std_accuracy,
                a.concept_count,
                a.base_size
            );
        }
        out
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Repeated label prediction from δ-adjusted versus size-matched random
/// attribute sets. The adjusted selection is computed once; a label inside
/// it is dropped from the features without replacement.
pub fn run_knowledge_experiment(
    ctx: &FormalContext,
    cfg: &ExperimentConfig,
    exec: Execution,
) -> Result<ExperimentResult> {
    cfg.validate()?;
    if ctx.n_attributes() == 0 {
        return Err(Error::InvalidArgument("context has no attributes".into()));
    }
    if ctx.n_objects() < 2 {
        return Err(Error::InvalidArgument("need at least two objects".into()));
    }
    let selection = delta_adjust(ctx, cfg.delta, exec)?;
    split(&mut ChaCha8Rng::seed_from_u64(0), ctx.n_objects(), cfg.split_fraction)?;

    let per_rep: Vec<Vec<RepetitionRecord>> = map_ordered(
        exec,
        (0..cfg.repetitions).collect(),
        |rep| repetition(ctx, cfg, &selection, rep),
    );
    let records: Vec<RepetitionRecord> = per_rep.into_iter().flatten().collect();

    let structure = run_structure_experiment(ctx, cfg.delta, cfg.seed, exec)?;
    let arms = cfg
        .methods
        .iter()
        .map(|&method| {
            let accs: Vec<f64> = records
                .iter()
                .filter(|r| r.method == method)
                .map(|r| r.accuracy)
                .collect();
            let (mean_accuracy, std_accuracy) = mean_std(&accs);
            let (concept_count, base_size) = match method {
                Method::Adjusted => (
                    structure.concepts_adjusted as f64,
                    structure.base_adjusted as f64,
                ),
                Method::Sampled => (structure.sampled_concepts_mean, structure.sampled_base_mean),
            };
            ArmSummary {
                method,
                mean_accuracy,
                std_accuracy,
                concept_count,
                base_size,
            }
        })
        .collect();
    Ok(ExperimentResult {
        config: cfg.clone(),
        selected: selection
            .attributes
            .iter()
            .map(|&m| ctx.attribute_label(m).to_string())
            .collect(),
        arms,
        repetitions: records,
    })
}

fn repetition(
    ctx: &FormalContext,
    cfg: &ExperimentConfig,
    selection: &AdjustedSelection,
    rep: usize,
) -> Vec<RepetitionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep as u64);
    let label = rng.random_range(0..ctx.n_attributes());
    let (train, test) =
        split(&mut rng, ctx.n_objects(), cfg.split_fraction).expect("split checked up front");
    let adjusted: Vec<usize> = selection
        .attributes
        .iter()
        .copied()
        .filter(|&m| m != label)
        .collect();
    let pool: Vec<usize> = (0..ctx.n_attributes()).filter(|&m| m != label).collect();
    let sampled = sample_from(&mut rng, &pool, adjusted.len()).expect("adjusted fits the pool");

    cfg.methods
        .iter()
        .map(|&method| {
            let features = match method {
                Method::Adjusted => &adjusted,
                Method::Sampled => &sampled,
            };
            RepetitionRecord {
                repetition: rep,
                method,
                label: ctx.attribute_label(label).to_string(),
                features: features
                    .iter()
                    .map(|&m| ctx.attribute_label(m).to_string())
                    .collect(),
                accuracy: tree::accuracy(ctx, features, label, &train, &test),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledStructure {
    pub seed: u64,
    pub attributes: Vec<String>,
    pub concepts: usize,
    pub base: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureResult {
    pub delta: f64,
    pub selected: Vec<String>,
    pub concepts_original: usize,
    pub concepts_adjusted: usize,
    pub base_original: usize,
    pub base_adjusted: usize,
    pub sampled_concepts_mean: f64,
    pub sampled_base_mean: f64,
    pub sampled: Vec<SampledStructure>,
}

/// Concept counts and canonical-base sizes of the context, its δ-adjusted
/// subcontext, and [`STRUCTURE_SAMPLES`] random subcontexts of the same size
/// (seeds `seed, seed + 1, ...`).
pub fn run_structure_experiment(
    ctx: &FormalContext,
    delta: f64,
    seed: u64,
    exec: Execution,
) -> Result<StructureResult> {
    let selection = delta_adjust(ctx, delta, exec)?;
    let adjusted = selection.subcontext(ctx)?;
    let n = selection.attributes.len();
    let seeds: Vec<u64> = (0..STRUCTURE_SAMPLES as u64).map(|i| seed.wrapping_add(i)).collect();
    let samples = seeds
        .iter()
        .map(|&s| sample_attributes(ctx, n, s).map(|attrs| (s, attrs)))
        .collect::<Result<Vec<_>>>()?;
    let sampled: Vec<SampledStructure> = map_ordered(exec, samples, |(s, attrs)| {
        let sub = ctx
            .apply_selection(&ctx.select_attributes(attrs.iter().copied()).expect("in range"))
            .expect("selection of ctx");
        SampledStructure {
            seed: s,
            attributes: attrs.iter().map(|&m| ctx.attribute_label(m).to_string()).collect(),
            concepts: count_concepts(&sub),
            base: canonical_base(&sub).len(),
        }
    });
    let (sampled_concepts_mean, _) =
        mean_std(&sampled.iter().map(|s| s.concepts as f64).collect::<Vec<_>>());
    let (sampled_base_mean, _) = mean_std(&sampled.iter().map(|s| s.base as f64).collect::<Vec<_>>());
    Ok(StructureResult {
        delta,
        selected: selection
            .attributes
            .iter()
            .map(|&m| ctx.attribute_label(m).to_string())
            .collect(),
        concepts_original: count_concepts(ctx),
        concepts_adjusted: count_concepts(&adjusted),
        base_original: canonical_base(ctx).len(),
        base_adjusted: canonical_base(&adjusted).len(),
        sampled_concepts_mean,
        sampled_base_mean,
        sampled,
    })
}
