//! Leave-one-out evaluation, repeated and ranked.
//!
//! For every learner and repeat each project is held out in turn, the
//! learner is fitted on the rest (after any reductions, which only ever see
//! the training fold), and the holdout is predicted with its effort hidden.
//! Predictions become Standardized Error values that are ranked with
//! Scott-Knott. Every random choice draws from a seed derived from the
//! master seed, the dataset, the learner and the repeat, so cells may run in
//! any order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cocomo::reduce::{restrict_dataset, restrict_project, select_columns};
use crate::cocomo::{reduce_ranges, reduce_rows, RangeMode, RowLimit};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorSpec, FitContext, Registry};
use crate::model::{Dataset, TuningTable};
use crate::rng::{derive_seed, SeedPart};
use crate::stats::{baseline_guess, scott_knott, standardized_error_against, RankedGroup, StatConfig, TreatmentResult};

/// How holdout predictions are turned into error measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeGranularity {
    /// One SE per repeat over all holdouts, with the guessing baseline drawn
    /// from the pooled training folds.
    PerRepeat,
    /// One SE per holdout, with the baseline drawn from that fold's training
    /// efforts.
    PerHoldout,
    /// One value per holdout: its term of the repeat's SE,
    /// `100 * |actual_i - predicted_i| / mean_j |actual_j - sampled|`, with the
    /// shared denominator of [`SeGranularity::PerRepeat`]. The mean of a
    /// repeat's terms is that repeat's SE.
    #[default]
    HoldoutTerms,
}

impl fmt::Display for SeGranularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeGranularity::PerRepeat => "per-repeat",
            SeGranularity::PerHoldout => "per-holdout",
            SeGranularity::HoldoutTerms => "holdout-terms",
        })
    }
}

impl FromStr for SeGranularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-repeat" | "repeat" => Ok(SeGranularity::PerRepeat),
            "per-holdout" | "holdout" => Ok(SeGranularity::PerHoldout),
            "holdout-terms" | "terms" => Ok(SeGranularity::HoldoutTerms),
            other => Err(Error::InvalidConfig(format!("unknown SE granularity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigConfig {
    pub repeats: usize,
    pub seed: u64,
    pub learners: Vec<EstimatorSpec>,
    pub granularity: SeGranularity,
    pub stats: StatConfig,
}

impl RigConfig {
    pub fn new(learners: Vec<EstimatorSpec>, seed: u64) -> Self {
        RigConfig { repeats: 10, seed, learners, granularity: SeGranularity::default(), stats: StatConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::InvalidConfig("repeats must be >= 1".into()));
        }
        if self.learners.is_empty() {
            return Err(Error::InvalidConfig("at least one learner is required".into()));
        }
        self.stats.validate()
    }
}

/// What happened to one holdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Fold {
    pub holdout: usize,
    pub actual: f64,
    /// The prediction, or the fit/estimate error as text.
    pub prediction: std::result::Result<f64, String>,
    pub degenerate: bool,
}

impl Fold {
    pub fn pair(&self) -> Option<(f64, f64)> {
        self.prediction.as_ref().ok().map(|p| (self.actual, *p))
    }
}

fn fold_table(spec: &EstimatorSpec) -> TuningTable {
    let table = TuningTable::coc2000();
    match spec.reduction.range_mode {
        RangeMode::SixPoint => table,
        RangeMode::ThreePoint => reduce_ranges(&table),
    }
}

fn run_fold(
    dataset: &Dataset,
    holdout: usize,
    spec: &EstimatorSpec,
    registry: &Registry,
    table: &TuningTable,
    seed: u64,
) -> Result<(f64, bool)> {
    let mut training = dataset.without(holdout);
    let mut query = dataset.projects()[holdout].clone();
    query.effort = None;

    if let RowLimit::First(n) = spec.reduction.row_limit {
        training = reduce_rows(&training, n, derive_seed(seed, &[SeedPart::Str("rows")]))?;
    }
    let fraction = spec.reduction.column_fraction.value();
    if fraction < 1.0 {
        let keep = select_columns(&training, fraction)?;
        training = restrict_dataset(&training, &keep);
        query = restrict_project(&query, &keep);
    }
    let ctx = FitContext { seed: derive_seed(seed, &[SeedPart::Str("fit")]), table: table.clone() };
    let model = registry.build(spec)?.fit(&training, &ctx)?;
    let estimate = model.estimate(&query)?;
    if !estimate.is_finite() {
        return Err(Error::InvalidConfig(format!("non-finite estimate {estimate}")));
    }
    Ok((estimate, model.degenerate()))
}

/// One prediction per project, each from a model that never saw it.
pub fn leave_one_out_with(
    registry: &Registry,
    dataset: &Dataset,
    spec: &EstimatorSpec,
    seed: u64,
) -> Result<Vec<Fold>> {
    if dataset.len() < 2 {
        return Err(Error::InsufficientTraining { need: 2, have: dataset.len() });
    }
    registry.build(spec)?;
    let table = fold_table(spec);
    let efforts = dataset.efforts();
    Ok((0..dataset.len())
        .map(|i| {
            let fold_seed = derive_seed(seed, &[SeedPart::Str("fold"), SeedPart::Int(i as u64)]);
            let outcome = run_fold(dataset, i, spec, registry, &table, fold_seed);
            Fold {
                holdout: i,
                actual: efforts[i],
                degenerate: outcome.as_ref().map(|o| o.1).unwrap_or(false),
                prediction: outcome.map(|o| o.0).map_err(|e| e.to_string()),
            }
        })
        .collect())
}

pub fn leave_one_out(dataset: &Dataset, spec: &EstimatorSpec, seed: u64) -> Result<Vec<Fold>> {
    leave_one_out_with(&Registry::default(), dataset, spec, seed)
}

/// SE measurements for one repeat's folds. Undefined values are skipped and
/// counted.
pub fn fold_errors(
    dataset: &Dataset,
    folds: &[Fold],
    granularity: SeGranularity,
    seed: u64,
) -> Result<(Vec<f64>, usize)> {
    let efforts = dataset.efforts();
    let baseline_seed = derive_seed(seed, &[SeedPart::Str("baseline")]);
    let mut undefined = 0;
    let mut out = Vec::new();
    match granularity {
        SeGranularity::PerRepeat | SeGranularity::HoldoutTerms => {
            let pairs: Vec<(f64, f64)> = folds.iter().filter_map(Fold::pair).collect();
            if pairs.is_empty() {
                return Ok((out, 0));
            }
            let pooled: Vec<f64> = folds
                .iter()
                .filter(|f| f.prediction.is_ok())
                .flat_map(|f| efforts.iter().enumerate().filter(move |(j, _)| *j != f.holdout).map(|(_, e)| *e))
                .collect();
            let sampled = baseline_guess(&pooled, baseline_seed)?;
            if granularity == SeGranularity::HoldoutTerms {
                let n = pairs.len() as f64;
                let denominator = pairs.iter().map(|(a, _)| (a - sampled).abs()).sum::<f64>() / n;
                if !(denominator > 0.0) {
                    return Ok((out, pairs.len()));
                }
                out.extend(pairs.iter().map(|(a, p)| 100.0 * (a - p).abs() / denominator));
                return Ok((out, 0));
            }
            match standardized_error_against(&pairs, sampled) {
                Ok(se) => out.push(se),
                Err(Error::UndefinedStandardizedError) => undefined += 1,
                Err(e) => return Err(e),
            }
        }
        SeGranularity::PerHoldout => {
            for f in folds {
                let Some(pair) = f.pair() else { continue };
                let training: Vec<f64> =
                    efforts.iter().enumerate().filter(|(j, _)| *j != f.holdout).map(|(_, e)| *e).collect();
                let sampled =
                    baseline_guess(&training, derive_seed(baseline_seed, &[SeedPart::Int(f.holdout as u64)]))?;
                match standardized_error_against(&[pair], sampled) {
                    Ok(se) => out.push(se),
                    Err(Error::UndefinedStandardizedError) => undefined += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((out, undefined))
}

/// Results of one learner.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerRun {
    pub spec: EstimatorSpec,
    pub name: String,
    /// `folds[repeat][holdout]`
    pub folds: Vec<Vec<Fold>>,
    /// SE values per repeat.
    pub errors: Vec<Vec<f64>>,
    pub seeds: Vec<u64>,
    pub undefined_se: usize,
}

impl LearnerRun {
    pub fn all_errors(&self) -> Vec<f64> {
        self.errors.iter().flatten().copied().collect()
    }

    pub fn failed_folds(&self) -> usize {
        self.folds.iter().flatten().filter(|f| f.prediction.is_err()).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub dataset: String,
    pub projects: usize,
    pub config: RigConfig,
    pub learners: Vec<LearnerRun>,
    pub groups: Vec<RankedGroup>,
    /// Learners left out of the ranking because no SE value was defined.
    pub unranked: Vec<String>,
}

impl ExperimentReport {
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.groups.iter().find(|g| g.members.iter().any(|m| m.name == name)).map(|g| g.rank)
    }

    pub fn median_of(&self, name: &str) -> Option<f64> {
        self.groups.iter().flat_map(|g| &g.members).find(|m| m.name == name).map(|m| m.median)
    }

    pub fn rank_one(&self) -> Vec<String> {
        self.groups.first().map(|g| g.members.iter().map(|m| m.name.clone()).collect()).unwrap_or_default()
    }

    /// Configuration lines for report headers.
    pub fn describe(&self) -> Vec<(String, String)> {
        let c = &self.config;
        let learners: Vec<String> = c.learners.iter().map(|l| l.to_string()).collect();
        vec![
            ("dataset".into(), format!("{} ({} projects)", self.dataset, self.projects)),
            ("seed".into(), c.seed.to_string()),
            ("repeats".into(), c.repeats.to_string()),
            ("learners".into(), learners.join(",")),
            ("se".into(), c.granularity.to_string()),
            (
                "ranking".into(),
                format!(
                    "scott-knott bootstrap={} confidence={} a12={}",
                    c.stats.bootstrap_resamples, c.stats.confidence, c.stats.a12_threshold
                ),
            ),
        ]
    }
}

/// Seed, folds, SE values and undefined-SE count of one (learner, repeat).
type Cell = (u64, Vec<Fold>, Vec<f64>, usize);

pub fn cell_seed(master: u64, dataset: &str, learner: &str, repeat: usize) -> u64 {
    derive_seed(master, &[SeedPart::Str(dataset), SeedPart::Str(learner), SeedPart::Int(repeat as u64)])
}

pub fn run_experiment_with(registry: &Registry, dataset: &Dataset, cfg: &RigConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    if dataset.len() < 2 {
        return Err(Error::InsufficientTraining { need: 2, have: dataset.len() });
    }
    for spec in &cfg.learners {
        registry.build(spec)?;
    }
    let cells: Vec<(usize, usize)> =
        (0..cfg.learners.len()).flat_map(|l| (0..cfg.repeats).map(move |r| (l, r))).collect();
    let results: Vec<Result<Cell>> = cells
        .par_iter()
        .map(|&(l, r)| {
            let spec = &cfg.learners[l];
            let seed = cell_seed(cfg.seed, dataset.name(), &spec.to_string(), r);
            let folds = leave_one_out_with(registry, dataset, spec, seed)?;
            let (errors, undefined) = fold_errors(dataset, &folds, cfg.granularity, seed)?;
            Ok((seed, folds, errors, undefined))
        })
        .collect();

    let mut learners: Vec<LearnerRun> = cfg
        .learners
        .iter()
        .map(|spec| LearnerRun {
            spec: spec.clone(),
            name: spec.display_name(),
            folds: Vec::new(),
            errors: Vec::new(),
            seeds: Vec::new(),
            undefined_se: 0,
        })
        .collect();
    for (&(l, _), result) in cells.iter().zip(results) {
        let (seed, folds, errors, undefined) = result?;
        let run = &mut learners[l];
        run.seeds.push(seed);
        run.folds.push(folds);
        run.errors.push(errors);
        run.undefined_se += undefined;
    }

    let mut treatments = Vec::new();
    let mut unranked = Vec::new();
    for run in &learners {
        let errors = run.all_errors();
        if errors.is_empty() {
            unranked.push(run.name.clone());
        } else {
            treatments.push(TreatmentResult::new(run.name.clone(), errors)?);
        }
    }
    let stats = StatConfig {
        seed: derive_seed(cfg.seed, &[SeedPart::Str(dataset.name()), SeedPart::Str("rank")]),
        ..cfg.stats.clone()
    };
    let groups = if treatments.is_empty() { Vec::new() } else { scott_knott(&treatments, &stats)? };
    Ok(ExperimentReport {
        dataset: dataset.name().to_string(),
        projects: dataset.len(),
        config: cfg.clone(),
        learners,
        groups,
        unranked,
    })
}

pub fn run_experiment(dataset: &Dataset, cfg: &RigConfig) -> Result<ExperimentReport> {
    run_experiment_with(&Registry::default(), dataset, cfg)
}
