//! Macroaveraged MAE, the uniform and categorical rating baselines, and the
//! cross-validation experiment harness.
//!
//! Macroaveraged MAE scores each rating class separately — the mean absolute
//! error over test rows whose true rating is that class — and averages the
//! per-class values unweighted, so rare classes count as much as common
//! ones. Classes absent from a test set are skipped.
//!
//! The experiment harness runs the full pipeline per fold: build the
//! probabilistic graph from the training ratings, extract language features
//! for the training pairs, fit the logistic model, extract features for the
//! test pairs, predict, and score. Test pairs whose user or item never
//! appears in the training graph cannot get features; they fall back to the
//! categorical baseline's (seeded, pair-keyed) prediction so every test row
//! is scored.

use std::fs;
use std::io;
use std::path::{Path as FsPath, PathBuf};

use rand::Rng;
use thiserror::Error;

use crate::features::{extract_features, FeatureError, LanguageSet};
use crate::graph::GraphError;
use crate::infer::derive_pair_seed;
use crate::learn::{train_multiclass, LearnError, TrainOptions};
use crate::recsys::{build_graph, item_node_id, user_node_id, GraphBuildConfig, RatingsTable, RecsysError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no rows to evaluate")]
    Empty,
    #[error("predictions and truths have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rating class {0} outside 1..=5")]
    BadClass(u8),
    #[error("prediction {0} is not finite")]
    BadPrediction(f64),
    #[error("class distribution must be non-negative and sum to 1")]
    BadDistribution,
    #[error("unknown feature set {0} (expected F1 or F2)")]
    UnknownFeatureSet(String),
    #[error("fold {0} has a .base file but no matching .test file")]
    MissingTestFile(String),
    #[error("no uN.base/uN.test fold pairs found in {0}")]
    NoFolds(String),
    #[error(transparent)]
    Ratings(#[from] RecsysError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Per-class and macroaveraged MAE over one set of predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// MAE per rating class 1..=5; `None` when the class has no test rows.
    pub per_class: [Option<f64>; 5],
    /// Number of test rows per class.
    pub counts: [usize; 5],
    /// Unweighted mean of the present per-class MAEs.
    pub macro_mae: f64,
}

/// Scores predictions against true rating classes, grouping rows by their
/// true class. Row order never matters.
pub fn mae_macro(predictions: &[f64], truths: &[u8]) -> Result<EvalReport, EvalError> {
    if predictions.len() != truths.len() {
        return Err(EvalError::LengthMismatch(predictions.len(), truths.len()));
    }
    if predictions.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut sums = [0.0f64; 5];
    let mut counts = [0usize; 5];
    for (&pred, &truth) in predictions.iter().zip(truths) {
        if !(1..=5).contains(&truth) {
            return Err(EvalError::BadClass(truth));
        }
        if !pred.is_finite() {
            return Err(EvalError::BadPrediction(pred));
        }
        let j = usize::from(truth) - 1;
        sums[j] += (pred - f64::from(truth)).abs();
        counts[j] += 1;
    }
    let mut per_class = [None; 5];
    let mut macro_sum = 0.0;
    let mut present = 0usize;
    for j in 0..5 {
        if counts[j] > 0 {
            let mae = sums[j] / counts[j] as f64;
            per_class[j] = Some(mae);
            macro_sum += mae;
            present += 1;
        }
    }
    Ok(EvalReport { per_class, counts, macro_mae: macro_sum / present as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Uniform,
    Categorical,
}

/// A rating predictor that ignores the graph: it draws the predicted class
/// from a fixed distribution over 1..=5.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselinePredictor {
    kind: BaselineKind,
    probs: [f64; 5],
    /// Integer class counts when the distribution came from counting;
    /// `expected_mae` then works in exact integer arithmetic until one
    /// final division. The uniform distribution is the counts (1,1,1,1,1).
    counts: Option<[u64; 5]>,
}

impl BaselinePredictor {
    /// Every class with probability 1/5.
    pub fn uniform() -> Self {
        Self { kind: BaselineKind::Uniform, probs: [0.2; 5], counts: Some([1; 5]) }
    }

    /// Class `k` with probability `probs[k-1]`.
    pub fn categorical(probs: [f64; 5]) -> Result<Self, EvalError> {
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(EvalError::BadDistribution);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(EvalError::BadDistribution);
        }
        Ok(Self { kind: BaselineKind::Categorical, probs, counts: None })
    }

    /// Categorical distribution with `p_k = counts[k] / total`.
    pub fn from_counts(counts: [u64; 5]) -> Result<Self, EvalError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(EvalError::BadDistribution);
        }
        let probs =
            core::array::from_fn(|j| counts[j] as f64 / total as f64);
        Ok(Self { kind: BaselineKind::Categorical, probs, counts: Some(counts) })
    }

    pub fn kind(&self) -> BaselineKind {
        self.kind
    }

    pub fn probs(&self) -> &[f64; 5] {
        &self.probs
    }

    /// Closed-form expected MAE against each true class `j`
    /// (`Σ_k p_k |k − j|`) and their macro average.
    ///
    /// A count-backed distribution is evaluated as an exact integer sum with
    /// one final division, so rationals such as the uniform 7/5 land on
    /// their nearest float: (2.0, 1.4, 1.2, 1.4, 2.0) with macro 1.6.
    pub fn expected_mae(&self) -> ([f64; 5], f64) {
        if let Some(counts) = self.counts {
            let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();
            let numerators: [u128; 5] = core::array::from_fn(|j| {
                counts
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| u128::from(c) * (k as i64 - j as i64).unsigned_abs() as u128)
                    .sum()
            });
            let per_class = numerators.map(|n| n as f64 / total as f64);
            let macro_mae =
                numerators.iter().sum::<u128>() as f64 / (5 * total) as f64;
            return (per_class, macro_mae);
        }
        let per_class = core::array::from_fn(|j| {
            self.probs
                .iter()
                .enumerate()
                .map(|(k, &p)| p * (k as f64 - j as f64).abs())
                .sum()
        });
        let macro_mae = per_class.iter().sum::<f64>() / 5.0;
        (per_class, macro_mae)
    }

    /// Draws one predicted class.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u8 {
        self.class_at(rng.random())
    }

    /// A deterministic prediction keyed by the pair's node identifiers: the
    /// same pair always gets the same draw under the same seed, regardless
    /// of evaluation order.
    pub fn predict_for(&self, source_id: &str, target_id: &str, seed: u64) -> u8 {
        let s = derive_pair_seed(seed, source_id, target_id);
        self.class_at((s >> 11) as f64 / (1u64 << 53) as f64)
    }

    fn class_at(&self, u: f64) -> u8 {
        let mut acc = 0.0;
        for (k, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return (k + 1) as u8;
            }
        }
        5
    }

    /// Empirical MAE of the random baseline against a fixed true class.
    pub fn simulate_class_mae(&self, class: u8, draws: usize, seed: u64) -> f64 {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut total = 0.0;
        for _ in 0..draws {
            total += (f64::from(self.draw(&mut rng)) - f64::from(class)).abs();
        }
        total / draws as f64
    }
}

/// Closed-form expected MAE of a baseline against each true class, plus the
/// macro average.
pub fn baseline_expected_mae(predictor: &BaselinePredictor) -> ([f64; 5], f64) {
    predictor.expected_mae()
}

/// Everything a fold run needs; one seed drives sampling end to end.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub feature_set: String,
    pub k: usize,
    pub min_cosupport: usize,
    pub samples: usize,
    pub seed: u64,
    pub c: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let build = GraphBuildConfig::default();
        let train = TrainOptions::default();
        Self {
            feature_set: "F1".to_string(),
            k: build.k,
            min_cosupport: build.min_cosupport,
            samples: 100,
            seed: 42,
            c: train.c,
            tolerance: train.tolerance,
            max_iter: train.max_iter,
        }
    }
}

/// One fold's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub fold: String,
    pub report: EvalReport,
    pub train_rows: usize,
    pub test_rows: usize,
    /// Test rows predicted by the categorical fallback because their user
    /// or item does not exist in the training graph.
    pub fallback_rows: usize,
}

/// All folds plus cross-fold aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub folds: Vec<FoldOutcome>,
    pub macro_mean: f64,
    /// Sample standard deviation of the per-fold macro MAE (0 for a single
    /// fold).
    pub macro_std: f64,
    /// Per-class MAE averaged over the folds where the class appears.
    pub per_class_mean: [Option<f64>; 5],
}

/// Runs one fold end to end: graph from the training ratings, features,
/// model, test features, predictions, score.
pub fn run_fold(
    base: &FsPath,
    test: &FsPath,
    fold: &str,
    config: &ExperimentConfig,
) -> Result<FoldOutcome, EvalError> {
    let languages = LanguageSet::builtin(&config.feature_set)
        .ok_or_else(|| EvalError::UnknownFeatureSet(config.feature_set.clone()))?;
    let train_ratings = RatingsTable::load_from_path(base)?;
    let test_ratings = RatingsTable::load_from_path(test)?;
    let graph = build_graph(
        &train_ratings,
        &GraphBuildConfig { k: config.k, min_cosupport: config.min_cosupport },
    )?;

    let train_pairs: Vec<(String, String, u8)> = train_ratings
        .triples()
        .map(|(u, i, r)| (user_node_id(u), item_node_id(i), r))
        .collect();
    let train_table =
        extract_features(&graph, &train_pairs, &languages, config.samples, config.seed)?;
    let (xs, ys) = train_table.training_data();
    let options =
        TrainOptions { c: config.c, tolerance: config.tolerance, max_iter: config.max_iter };
    let model = train_multiclass(&xs, &ys, &options)?;

    let fallback = BaselinePredictor::from_counts(train_ratings.class_counts())?;
    let test_pairs: Vec<(String, String, u8)> = test_ratings
        .triples()
        .map(|(u, i, r)| (user_node_id(u), item_node_id(i), r))
        .collect();
    let known: Vec<(String, String, u8)> = test_pairs
        .iter()
        .filter(|(u, i, _)| graph.node_id(u).is_some() && graph.node_id(i).is_some())
        .cloned()
        .collect();
    let known_table = if known.is_empty() {
        None
    } else {
        Some(extract_features(&graph, &known, &languages, config.samples, config.seed)?)
    };

    let mut known_rows =
        known_table.as_ref().map(|t| t.rows()).unwrap_or_default().iter();
    let mut predictions = Vec::with_capacity(test_pairs.len());
    let mut truths = Vec::with_capacity(test_pairs.len());
    let mut fallback_rows = 0usize;
    for (u, i, r) in &test_pairs {
        let in_graph = graph.node_id(u).is_some() && graph.node_id(i).is_some();
        let pred = if in_graph {
            let row = known_rows.next().expect("known rows align with known pairs");
            let (class, _) = model.predict(&row.x)?;
            class
        } else {
            fallback_rows += 1;
            fallback.predict_for(u, i, config.seed)
        };
        predictions.push(f64::from(pred));
        truths.push(*r);
    }
    let report = mae_macro(&predictions, &truths)?;
    Ok(FoldOutcome {
        fold: fold.to_string(),
        report,
        train_rows: train_pairs.len(),
        test_rows: test_pairs.len(),
        fallback_rows,
    })
}

/// Finds `uN.base`/`uN.test` pairs in a directory, numerically ordered.
pub fn discover_folds(dir: &FsPath) -> Result<Vec<(String, PathBuf, PathBuf)>, EvalError> {
    let mut folds = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(stem) = name.strip_suffix(".base") else { continue };
        let Some(num) = stem.strip_prefix('u').and_then(|s| s.parse::<u32>().ok()) else {
            continue;
        };
        let test = dir.join(format!("{stem}.test"));
        if !test.exists() {
            return Err(EvalError::MissingTestFile(stem.to_string()));
        }
        folds.push((num, stem.to_string(), entry.path(), test));
    }
    if folds.is_empty() {
        return Err(EvalError::NoFolds(dir.display().to_string()));
    }
    folds.sort_by_key(|(num, ..)| *num);
    Ok(folds.into_iter().map(|(_, stem, base, test)| (stem, base, test)).collect())
}

/// Runs every fold in the directory and aggregates the scores.
pub fn run_experiment(
    folds_dir: &FsPath,
    config: &ExperimentConfig,
) -> Result<ExperimentReport, EvalError> {
    let folds = discover_folds(folds_dir)?;
    let mut outcomes = Vec::with_capacity(folds.len());
    for (name, base, test) in &folds {
        outcomes.push(run_fold(base, test, name, config)?);
    }
    Ok(summarize(config.clone(), outcomes))
}

/// Aggregates fold outcomes into the cross-fold report.
pub fn summarize(config: ExperimentConfig, folds: Vec<FoldOutcome>) -> ExperimentReport {
    let macros: Vec<f64> = folds.iter().map(|f| f.report.macro_mae).collect();
    let n = macros.len() as f64;
    let macro_mean = macros.iter().sum::<f64>() / n;
    let macro_std = if macros.len() > 1 {
        (macros.iter().map(|m| (m - macro_mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let per_class_mean = core::array::from_fn(|j| {
        let values: Vec<f64> =
            folds.iter().filter_map(|f| f.report.per_class[j]).collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    });
    ExperimentReport { config, folds, macro_mean, macro_std, per_class_mean }
}

fn tsv_cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.4}"),
        None => "-".to_string(),
    }
}

impl ExperimentReport {
    /// One row per fold plus a mean row: fold, per-class MAE, macro MAE.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("fold\tmae_r1\tmae_r2\tmae_r3\tmae_r4\tmae_r5\tmae_macro\n");
        for f in &self.folds {
            out.push_str(&f.fold);
            for j in 0..5 {
                out.push('\t');
                out.push_str(&tsv_cell(f.report.per_class[j]));
            }
            out.push_str(&format!("\t{:.4}\n", f.report.macro_mae));
        }
        out.push_str("mean");
        for j in 0..5 {
            out.push('\t');
            out.push_str(&tsv_cell(self.per_class_mean[j]));
        }
        out.push_str(&format!("\t{:.4}\n", self.macro_mean));
        out
    }

    /// Machine-readable `key=value` lines covering config and results.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        out.push_str(&format!("feature_set={}\n", c.feature_set));
        out.push_str(&format!("k={}\n", c.k));
        out.push_str(&format!("min_cosupport={}\n", c.min_cosupport));
        out.push_str(&format!("samples={}\n", c.samples));
        out.push_str(&format!("seed={}\n", c.seed));
        out.push_str(&format!("C={}\n", c.c));
        out.push_str(&format!("tolerance={}\n", c.tolerance));
        out.push_str(&format!("max_iter={}\n", c.max_iter));
        out.push_str(&format!("folds={}\n", self.folds.len()));
        for f in &self.folds {
            out.push_str(&format!("fold_{}_mae_macro={:.6}\n", f.fold, f.report.macro_mae));
            out.push_str(&format!("fold_{}_fallback_rows={}\n", f.fold, f.fallback_rows));
        }
        for j in 0..5 {
            if let Some(v) = self.per_class_mean[j] {
                out.push_str(&format!("mae_r{}_mean={v:.6}\n", j + 1));
            }
        }
        out.push_str(&format!("mae_macro_mean={:.6}\n", self.macro_mean));
        out.push_str(&format!("mae_macro_std={:.6}\n", self.macro_std));
        out
    }
}
