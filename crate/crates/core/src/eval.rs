//! Accuracy, ROC/AUC and the repeated random-split benchmark.
//!
//! The positive class is label 1 (attrition "Yes") throughout.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{majority_baseline, split_indices, Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::model::{Classifier, ModelConfig};
use crate::rng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }
}

pub fn accuracy(predictions: &[u8], truth: &[u8]) -> Result<(f64, ConfusionMatrix)> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch(predictions.len(), truth.len()));
    }
    if truth.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &t) in predictions.iter().zip(truth) {
        match (p == 1, t == 1) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fn_ += 1,
        }
    }
    Ok((cm.accuracy(), cm))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    /// `thresholds[k]` is the cutoff producing `points[k]` under the rule
    /// "predict positive iff score >= cutoff". The first entry is +∞ (the
    /// empty prediction set) and serializes as `null`.
    pub thresholds: Vec<f64>,
}

impl RocCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fpr,tpr,threshold\n");
        for (p, t) in self.points.iter().zip(&self.thresholds) {
            let t = if t.is_finite() { format!("{t}") } else { "inf".into() };
            writeln!(out, "{},{},{}", p.fpr, p.tpr, t).unwrap();
        }
        out
    }
}

/// Sweeps the cutoff from +∞ down through every distinct score. Tied
/// scores enter together as one step.
pub fn roc_curve(scores: &[f64], truth: &[u8]) -> Result<RocCurve> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch(scores.len(), truth.len()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidParam("scores contain NaN".into()));
    }
    let positives = truth.iter().filter(|&&t| t == 1).count();
    let negatives = truth.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::RocUndefined);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0 }];
    let mut thresholds = vec![f64::INFINITY];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut k = 0;
    while k < order.len() {
        let cutoff = scores[order[k]];
        while k < order.len() && scores[order[k]] == cutoff {
            if truth[order[k]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
        });
        thresholds.push(cutoff);
    }
    Ok(RocCurve { points, thresholds })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitProvenance {
    pub seed: u64,
    pub test_fraction: f64,
    pub stratified: bool,
    pub n_train: usize,
    pub n_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub model: String,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub auc: f64,
    pub roc: RocCurve,
    pub split: SplitProvenance,
    /// Accuracy of predicting the majority class on the same test rows.
    pub test_majority_baseline: f64,
}

/// Scores every test row and assembles accuracy, confusion counts and ROC.
pub fn evaluate(
    model: &dyn Classifier,
    name: &str,
    test: &Dataset,
    split: SplitProvenance,
) -> Result<EvalReport> {
    let x = test.features();
    let scores = x.iter_rows().map(|r| model.score(r)).collect::<Result<Vec<f64>>>()?;
    let threshold = model.decision_threshold();
    let predictions: Vec<u8> = scores.iter().map(|&s| u8::from(s > threshold)).collect();
    let (acc, confusion) = accuracy(&predictions, test.labels())?;
    let roc = roc_curve(&scores, test.labels())?;
    Ok(EvalReport {
        model: name.to_string(),
        accuracy: acc,
        confusion,
        auc: auc(&roc),
        roc,
        split,
        test_majority_baseline: majority_baseline(test.labels()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchmarkConfig {
    pub n_iterations: usize,
    pub master_seed: u64,
    pub test_fraction: f64,
    pub stratified: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            n_iterations: 3,
            master_seed: 42,
            test_fraction: 0.30,
            stratified: false,
        }
    }
}

impl BenchmarkConfig {
    /// Split seed of iteration `k` (0-based).
    pub fn split_seed(&self, k: usize) -> u64 {
        rng::mix(self.master_seed, k as u64)
    }

    /// Seed handed to model `m` (0-based) within iteration `k`.
    pub fn model_seed(&self, k: usize, m: usize) -> u64 {
        rng::mix(self.split_seed(k), 1 + m as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkCell {
    pub model: String,
    pub report: Option<EvalReport>,
    /// Training or evaluation failure for this cell.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkIteration {
    /// 1-based, matching table row labels.
    pub iteration: usize,
    pub split_seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub test_majority_baseline: f64,
    pub cells: Vec<BenchmarkCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkTable {
    pub config: BenchmarkConfig,
    pub models: Vec<String>,
    pub dataset_rows: usize,
    /// Majority-class accuracy over the whole dataset.
    pub majority_baseline: f64,
    pub iterations: Vec<BenchmarkIteration>,
}

impl BenchmarkTable {
    pub fn accuracy(&self, iteration: usize, model: usize) -> Option<f64> {
        self.iterations[iteration].cells[model].report.as_ref().map(|r| r.accuracy)
    }

    pub fn auc(&self, iteration: usize, model: usize) -> Option<f64> {
        self.iterations[iteration].cells[model].report.as_ref().map(|r| r.auc)
    }

    pub fn model_index(&self, name: &str) -> Option<usize> {
        self.models.iter().position(|m| m == name)
    }

    /// Mean accuracy per model over the iterations where it succeeded.
    pub fn mean_accuracy(&self, model: usize) -> Option<f64> {
        let vals: Vec<f64> = (0..self.iterations.len()).filter_map(|k| self.accuracy(k, model)).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    /// Iterations × models accuracy grid to four decimals, with per-model
    /// means and the majority-class baselines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration");
        for m in &self.models {
            write!(out, ",{m}").unwrap();
        }
        out.push_str(",majority_baseline,test_majority_baseline\n");
        for it in &self.iterations {
            write!(out, "{}", it.iteration).unwrap();
            for c in &it.cells {
                match &c.report {
                    Some(r) => write!(out, ",{:.4}", r.accuracy).unwrap(),
                    None => out.push_str(",ERR"),
                }
            }
            writeln!(out, ",{:.4},{:.4}", self.majority_baseline, it.test_majority_baseline).unwrap();
        }
        out.push_str("mean");
        for m in 0..self.models.len() {
            match self.mean_accuracy(m) {
                Some(v) => write!(out, ",{v:.4}").unwrap(),
                None => out.push_str(",ERR"),
            }
        }
        let test_mean = self.iterations.iter().map(|i| i.test_majority_baseline).sum::<f64>()
            / self.iterations.len() as f64;
        writeln!(out, ",{:.4},{:.4}", self.majority_baseline, test_mean).unwrap();
        out
    }

    /// Same grid with AUC instead of accuracy.
    pub fn auc_csv(&self) -> String {
        let mut out = String::from("iteration");
        for m in &self.models {
            write!(out, ",{m}").unwrap();
        }
        out.push('\n');
        for (k, it) in self.iterations.iter().enumerate() {
            write!(out, "{}", it.iteration).unwrap();
            for m in 0..self.models.len() {
                match self.auc(k, m) {
                    Some(v) => write!(out, ",{v:.4}").unwrap(),
                    None => out.push_str(",ERR"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every model on `n_iterations` seeded random splits. Within an
/// iteration all models see the same train and test rows; models of one
/// iteration train in parallel with per-model seeds fixed up front, so the
/// table depends only on the inputs. Cell failures are recorded in the
/// table instead of aborting the run.
pub fn run_benchmark(
    data: &Dataset,
    specs: &[ModelConfig],
    config: &BenchmarkConfig,
) -> Result<BenchmarkTable> {
    if config.n_iterations == 0 {
        return Err(Error::InvalidParam("n_iterations must be at least 1".into()));
    }
    if specs.is_empty() {
        return Err(Error::InvalidParam("no models to benchmark".into()));
    }
    let mut iterations = Vec::with_capacity(config.n_iterations);
    for k in 0..config.n_iterations {
        let split_seed = config.split_seed(k);
        let spec = SplitSpec::new(config.test_fraction, split_seed, config.stratified)?;
        let idx = split_indices(data.labels(), &spec)?;
        let (train, test) = (data.subset(&idx.train), data.subset(&idx.test));
        let provenance = SplitProvenance {
            seed: split_seed,
            test_fraction: config.test_fraction,
            stratified: config.stratified,
            n_train: idx.train.len(),
            n_test: idx.test.len(),
        };
        let cells = specs
            .par_iter()
            .enumerate()
            .map(|(m, cfg)| {
                let cfg = cfg.with_seed(config.model_seed(k, m));
                let outcome = cfg
                    .train(&train)
                    .and_then(|model| evaluate(&model, cfg.name(), &test, provenance));
                match outcome {
                    Ok(report) => BenchmarkCell {
                        model: cfg.name().to_string(),
                        report: Some(report),
                        error: None,
                    },
                    Err(e) => BenchmarkCell {
                        model: cfg.name().to_string(),
                        report: None,
                        error: Some(format!("{}: {e}", e.module())),
                    },
                }
            })
            .collect();
        iterations.push(BenchmarkIteration {
            iteration: k + 1,
            split_seed,
            n_train: idx.train.len(),
            n_test: idx.test.len(),
            test_majority_baseline: majority_baseline(test.labels()),
            cells,
        });
    }
    Ok(BenchmarkTable {
        config: *config,
        models: specs.iter().map(|s| s.name().to_string()).collect(),
        dataset_rows: data.n_rows(),
        majority_baseline: majority_baseline(data.labels()),
        iterations,
    })
}
