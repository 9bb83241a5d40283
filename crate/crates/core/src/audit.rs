//! Covariate-shift audits.
//!
//! An audit merges the selected and not-selected rows under a binary label
//! `s`, partitions them once into stratified folds, and runs a random search
//! over tree hyperparameters. Each candidate model is trained on every
//! fold's training part and scored by the MCC on the held-out part; folds
//! whose MCC is undefined are dropped from that model's mean. The shift score
//! is the best model's mean MCC, and its reliability is the standard
//! deviation of that model's fold MCCs.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{encode_split, label_selection, CustomerTable, Encoded, LabeledTable};
use crate::error::{Error, Result};
use crate::metrics::mcc_of;
use crate::rng;
use crate::tree::{fit_prepared, ClassWeights, PurityMeasure, SortedColumns, TrainingSet, TreeModelParams};

/// Score threshold above which a feature set is reported as shifted.
pub const DEFAULT_SHIFT_THRESHOLD: f64 = 0.2;

/// Attached to every report.
pub const LOW_MCC_CAVEAT: &str =
    "An MCC at or below the threshold does not prove that the inspected sample is free of covariate shift; only a high MCC is evidence of shift.";

/// Half-open integer range `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub const fn new(start: usize, end: usize) -> Self {
        IntRange { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRanges {
    pub max_leaves: IntRange,
    pub max_depth: IntRange,
    pub purity: Vec<PurityMeasure>,
    pub min_samples_leaf: IntRange,
    pub min_samples_split: IntRange,
}

impl Default for ParamRanges {
    fn default() -> Self {
        ParamRanges {
            max_leaves: IntRange::new(2, 20),
            max_depth: IntRange::new(1, 20),
            purity: vec![PurityMeasure::Entropy, PurityMeasure::Gini],
            min_samples_leaf: IntRange::new(1, 20),
            min_samples_split: IntRange::new(2, 20),
        }
    }
}

impl ParamRanges {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("max_leaves", self.max_leaves, 2),
            ("max_depth", self.max_depth, 1),
            ("min_samples_leaf", self.min_samples_leaf, 1),
            ("min_samples_split", self.min_samples_split, 2),
        ];
        for (name, r, floor) in named {
            if r.start >= r.end {
                return Err(Error::Config(format!("{name} range [{}, {}) is empty", r.start, r.end)));
            }
            if r.start < floor {
                return Err(Error::Config(format!("{name} range must start at {floor} or above")));
            }
        }
        if self.purity.is_empty() {
            return Err(Error::Config("no purity measure to draw from".into()));
        }
        Ok(())
    }
}

/// Draw one hyperparameter configuration, each parameter independently uniform.
pub fn sample_model_params<R: Rng + ?Sized>(rng: &mut R, ranges: &ParamRanges) -> TreeModelParams {
    fn draw<R: Rng + ?Sized>(rng: &mut R, r: IntRange) -> usize {
        rng.random_range(r.start..r.end)
    }
    let max_leaves = draw(rng, ranges.max_leaves);
    let max_depth = draw(rng, ranges.max_depth);
    let purity = ranges.purity[rng.random_range(0..ranges.purity.len())];
    let min_samples_leaf = draw(rng, ranges.min_samples_leaf);
    let min_samples_split = draw(rng, ranges.min_samples_split);
    TreeModelParams {
        max_leaves,
        max_depth,
        purity,
        min_samples_leaf,
        min_samples_split,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassWeighting {
    /// `w_c = n / (2 n_c)`, computed on each fold's training rows.
    #[default]
    Balanced,
    Explicit(ClassWeights),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub k: usize,
    pub n_models: usize,
    pub seed: u64,
    pub param_ranges: ParamRanges,
    pub class_weighting: ClassWeighting,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            k: 10,
            n_models: 100,
            seed: 0,
            param_ranges: ParamRanges::default(),
            class_weighting: ClassWeighting::Balanced,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config("k must be at least 2".into()));
        }
        if self.n_models < 1 {
            return Err(Error::Config("at least one model candidate is required".into()));
        }
        self.param_ranges.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold partition of labels `s`.
///
/// Each class is shuffled with its own stream and dealt round-robin; the
/// not-selected class continues where the selected class stopped so fold
/// sizes differ by at most one overall.
pub fn stratified_folds_for_labels(s: &[u8], k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::Config("k must be at least 2".into()));
    }
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for (i, &v) in s.iter().enumerate() {
        if v != 0 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    if pos.len() < k || neg.len() < k {
        return Err(Error::InsufficientRows {
            k,
            positives: pos.len(),
            negatives: neg.len(),
        });
    }
    pos.shuffle(&mut rng::stream(seed, "folds/selected", 0));
    neg.shuffle(&mut rng::stream(seed, "folds/not_selected", 0));

    let mut assignment = vec![0usize; s.len()];
    let offset = pos.len() % k;
    for (j, &i) in pos.iter().enumerate() {
        assignment[i] = j % k;
    }
    for (j, &i) in neg.iter().enumerate() {
        assignment[i] = (j + offset) % k;
    }
    let folds = (0..k)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..s.len()).partition(|&i| assignment[i] == f);
            Fold { train, test }
        })
        .collect();
    Ok(folds)
}

pub fn stratified_folds(table: &LabeledTable, k: usize, seed: u64) -> Result<Vec<Fold>> {
    stratified_folds_for_labels(&table.s, k, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelTrace {
    pub index: usize,
    pub params: TreeModelParams,
    /// Test MCC per fold, `None` where undefined.
    pub fold_mccs: Vec<Option<f64>>,
    pub mean_mcc: Option<f64>,
    pub std_mcc: Option<f64>,
    pub folds_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditResult {
    pub mcc_max_mean: f64,
    pub reliability: f64,
    pub winning_params: TreeModelParams,
    pub winning_index: usize,
    /// Undefined fold MCCs of the winning model.
    pub folds_skipped: usize,
    /// Undefined fold MCCs summed over all models.
    pub total_folds_skipped: usize,
    pub per_model_trace: Vec<ModelTrace>,
    /// Test indices of each fold, shared by every model.
    pub fold_tests: Vec<Vec<usize>>,
    pub n_selected: usize,
    pub n_not_selected: usize,
}

/// What is known about an audit that produced no defined MCC.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditDiagnostics {
    pub models_evaluated: usize,
    pub folds: usize,
    pub n_selected: usize,
    pub n_not_selected: usize,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Run the audit on an already-labeled table.
pub fn quantify_labeled(table: &LabeledTable, config: &AuditConfig) -> Result<AuditResult> {
    config.validate()?;
    let folds = stratified_folds(table, config.k, config.seed)?;

    let mut param_rng = rng::stream(config.seed, "model_params", 0);
    let candidates: Vec<TreeModelParams> = (0..config.n_models)
        .map(|_| sample_model_params(&mut param_rng, &config.param_ranges))
        .collect();

    let sorted = SortedColumns::new(&table.matrix)?;
    let prepared: Vec<(TrainingSet, ClassWeights)> = folds
        .par_iter()
        .map(|fold| {
            let set = TrainingSet::from_sorted(&table.matrix, &sorted, &fold.train, &table.s)?;
            let weights = match config.class_weighting {
                ClassWeighting::Balanced => {
                    let [n0, n1] = set.class_counts();
                    ClassWeights::balanced(n0, n1)?
                }
                ClassWeighting::Explicit(w) => w,
            };
            Ok((set, weights))
        })
        .collect::<Result<_>>()?;
    let test_labels: Vec<Vec<u8>> = folds
        .iter()
        .map(|f| f.test.iter().map(|&i| table.s[i]).collect())
        .collect();

    let k = folds.len();
    let cells: Vec<Option<f64>> = (0..candidates.len() * k)
        .into_par_iter()
        .map(|cell| {
            let (m, f) = (cell / k, cell % k);
            let (set, weights) = &prepared[f];
            let tree = fit_prepared(set, &candidates[m], weights)?;
            let pred = tree.predict_rows(&table.matrix, &folds[f].test)?;
            Ok(mcc_of(&test_labels[f], &pred)?.value())
        })
        .collect::<Result<_>>()?;

    let trace: Vec<ModelTrace> = candidates
        .iter()
        .enumerate()
        .map(|(m, params)| {
            let fold_mccs = cells[m * k..(m + 1) * k].to_vec();
            let defined: Vec<f64> = fold_mccs.iter().flatten().copied().collect();
            let (mean_mcc, std_mcc) = if defined.is_empty() {
                (None, None)
            } else {
                let (mean, std) = mean_std(&defined);
                (Some(mean), Some(std))
            };
            ModelTrace {
                index: m,
                params: *params,
                folds_used: defined.len(),
                fold_mccs,
                mean_mcc,
                std_mcc,
            }
        })
        .collect();

    let [n_not_selected, n_selected] = table.class_counts();
    let mut best: Option<&ModelTrace> = None;
    for t in &trace {
        if let Some(mean) = t.mean_mcc {
            if best.is_none_or(|b| mean > b.mean_mcc.unwrap()) {
                best = Some(t);
            }
        }
    }
    let Some(best) = best else {
        return Err(Error::Inconclusive(AuditDiagnostics {
            models_evaluated: trace.len(),
            folds: k,
            n_selected,
            n_not_selected,
        }));
    };
    Ok(AuditResult {
        mcc_max_mean: best.mean_mcc.unwrap(),
        reliability: best.std_mcc.unwrap(),
        winning_params: best.params,
        winning_index: best.index,
        folds_skipped: k - best.folds_used,
        total_folds_skipped: trace.iter().map(|t| k - t.folds_used).sum(),
        fold_tests: folds.into_iter().map(|f| f.test).collect(),
        per_model_trace: trace,
        n_selected,
        n_not_selected,
    })
}

/// Audit the shift between a selected and a not-selected encoded sample.
pub fn quantify_shift(selected: &Encoded, not_selected: &Encoded, config: &AuditConfig) -> Result<AuditResult> {
    let table = label_selection(selected, not_selected)?;
    quantify_labeled(&table, config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Shifted,
    NotShifted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Shifted => "shifted",
            Verdict::NotShifted => "not_shifted",
        }
    }
}

/// `Shifted` iff the score is strictly above `threshold`.
pub fn shift_verdict(result: &AuditResult, threshold: f64) -> Verdict {
    verdict_for_score(result.mcc_max_mean, threshold)
}

pub fn verdict_for_score(score: f64, threshold: f64) -> Verdict {
    if score > threshold {
        Verdict::Shifted
    } else {
        Verdict::NotShifted
    }
}

/// A named subset of schema features.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSet {
    pub label: String,
    pub features: Vec<String>,
}

impl FeatureSet {
    /// Label is the feature names joined with " + ", or "All" when the set
    /// covers every schema feature.
    pub fn new(features: Vec<String>, all_features: &[&str]) -> Self {
        let covers_all = all_features.len() > 1 && all_features.iter().all(|f| features.iter().any(|g| g == f));
        let label = if covers_all {
            "All".to_string()
        } else {
            features.join(" + ")
        };
        FeatureSet { label, features }
    }

    pub fn singletons(all_features: &[&str]) -> Vec<FeatureSet> {
        all_features
            .iter()
            .map(|f| FeatureSet::new(vec![f.to_string()], all_features))
            .collect()
    }

    pub fn pairs(all_features: &[&str]) -> Vec<FeatureSet> {
        let mut out = Vec::new();
        for i in 0..all_features.len() {
            for j in i + 1..all_features.len() {
                out.push(FeatureSet::new(
                    vec![all_features[i].to_string(), all_features[j].to_string()],
                    all_features,
                ));
            }
        }
        out
    }

    pub fn all(all_features: &[&str]) -> FeatureSet {
        FeatureSet::new(all_features.iter().map(|f| f.to_string()).collect(), all_features)
    }
}

#[derive(Debug)]
pub struct ReportRow {
    pub feature_set: FeatureSet,
    pub outcome: Result<AuditResult>,
}

impl ReportRow {
    pub fn score(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.mcc_max_mean)
    }
}

/// Sort by score descending; failed rows last, input order kept among equals.
pub fn sort_report(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| match (a.score(), b.score()) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
}

/// One audit per feature set, sorted by descending score.
///
/// Per-set failures (unknown feature, too few rows, inconclusive audit) are
/// kept as rows and do not stop the other sets.
pub fn audit_features(
    population: &CustomerTable,
    inspected: &[bool],
    feature_sets: &[FeatureSet],
    config: &AuditConfig,
) -> Result<Vec<ReportRow>> {
    config.validate()?;
    if inspected.len() != population.len() {
        return Err(Error::LengthMismatch(inspected.len(), population.len()));
    }
    let mut rows: Vec<ReportRow> = feature_sets
        .iter()
        .map(|fs| {
            let outcome = encode_split(population, inspected, &fs.features, None)
                .and_then(|(sel, not)| quantify_shift(&sel, &not, config));
            ReportRow {
                feature_set: fs.clone(),
                outcome,
            }
        })
        .collect();
    sort_report(&mut rows);
    Ok(rows)
}
