//! AdaBoost over decision stumps and bagged random forests of CART trees.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::Classifier;
use crate::rng;
use crate::trees::{
    check_dim, fit_stump, train_cart_on_rows, CartParams, FeaturesPerSplit, SortedColumns, Stump,
    Tree,
};

/// Lower clamp on a round's weighted error so a perfect stump gets a finite
/// stage weight.
pub const MIN_ERROR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaBoostParams {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for AdaBoostParams {
    fn default() -> Self {
        AdaBoostParams {
            n_estimators: 1000,
            learning_rate: 0.1,
            seed: 0,
        }
    }
}

impl AdaBoostParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::InvalidParam("n_estimators must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    /// A stump fit the training set perfectly.
    PerfectFit,
    /// The best stump was no better than chance.
    NoImprovement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaBoostModel {
    pub stumps: Vec<Stump>,
    pub alphas: Vec<f64>,
    pub params: AdaBoostParams,
    pub n_features: usize,
    pub stop_reason: StopReason,
}

/// Per-round diagnostics recorded during boosting.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoostTrace {
    /// Weighted error of each accepted stump, before clamping.
    pub errors: Vec<f64>,
    /// Mean exponential loss `(1/n) Σ exp(-y_i F(x_i))` after each round,
    /// with labels in {-1, +1} and `F = Σ α_t h_t`.
    pub exp_loss: Vec<f64>,
    /// Sum and minimum of the instance weights after each reweighting.
    pub weight_sums: Vec<f64>,
    pub min_weights: Vec<f64>,
}

fn require_both_classes(labels: &[u8]) -> Result<()> {
    let pos = labels.iter().filter(|&&y| y == 1).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::SingleClass);
    }
    Ok(())
}

#[inline]
fn signed(class: u8) -> f64 {
    if class == 1 {
        1.0
    } else {
        -1.0
    }
}

pub fn train_adaboost(train: &Dataset, params: &AdaBoostParams) -> Result<AdaBoostModel> {
    train_adaboost_traced(train, params).map(|(m, _)| m)
}

/// Discrete AdaBoost with shrinkage.
///
/// Each round fits the stump with the lowest weighted error `ε`, sets
/// `α = learning_rate · ½ ln((1-ε)/ε)` and rescales every weight by
/// `exp(-α y h(x))` before renormalizing. The weights therefore stay
/// proportional to each row's exponential loss. Training stops early after
/// a perfect stump (`ε = 0`, clamped to [`MIN_ERROR`]) or when no stump
/// beats chance (`ε >= 0.5`, stump discarded).
pub fn train_adaboost_traced(
    train: &Dataset,
    params: &AdaBoostParams,
) -> Result<(AdaBoostModel, BoostTrace)> {
    params.validate()?;
    let y = train.labels();
    require_both_classes(y)?;
    let x = train.features();
    let n = x.rows();
    let sorted = SortedColumns::new(x);

    let mut w = vec![1.0 / n as f64; n];
    let mut margin = vec![0.0f64; n];
    let mut stumps = Vec::new();
    let mut alphas = Vec::new();
    let mut trace = BoostTrace::default();
    let mut stop_reason = StopReason::Completed;

    for _ in 0..params.n_estimators {
        let (stump, err) = fit_stump(x, y, &w, &sorted);
        if err >= 0.5 {
            stop_reason = StopReason::NoImprovement;
            break;
        }
        let eps = err.max(MIN_ERROR);
        let alpha = params.learning_rate * 0.5 * ((1.0 - eps) / eps).ln();

        let mut total = 0.0;
        for i in 0..n {
            let agreement = signed(y[i]) * signed(stump.predict_row(x.row(i)));
            w[i] *= (-alpha * agreement).exp();
            margin[i] += alpha * agreement;
            total += w[i];
        }
        for wi in &mut w {
            *wi /= total;
        }

        trace.errors.push(err);
        trace.exp_loss.push(margin.iter().map(|m| (-m).exp()).sum::<f64>() / n as f64);
        trace.weight_sums.push(w.iter().sum());
        trace.min_weights.push(w.iter().copied().fold(f64::INFINITY, f64::min));
        stumps.push(stump);
        alphas.push(alpha);

        if err <= 0.0 {
            stop_reason = StopReason::PerfectFit;
            break;
        }
    }
    if stumps.is_empty() {
        return Err(Error::NoWeakLearner);
    }
    Ok((
        AdaBoostModel {
            stumps,
            alphas,
            params: *params,
            n_features: x.cols(),
            stop_reason,
        },
        trace,
    ))
}

impl AdaBoostModel {
    /// `Σ α_t s_t(x) / Σ α_t` with `s_t ∈ {-1, +1}`; lies in [-1, 1].
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        if self.stumps.is_empty() {
            return Err(Error::EmptyModel);
        }
        check_dim(self.n_features, x)?;
        let (mut num, mut den) = (0.0, 0.0);
        for (s, a) in self.stumps.iter().zip(&self.alphas) {
            num += a * signed(s.predict_row(x));
            den += a;
        }
        Ok(num / den)
    }
}

impl Classifier for AdaBoostModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn decision_threshold(&self) -> f64 {
        0.0
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        AdaBoostModel::score(self, x)
    }
}

pub fn adaboost_score(model: &AdaBoostModel, x: &[f64]) -> Result<f64> {
    model.score(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub cart: CartParams,
    pub seed: u64,
    /// Resample each tree's rows with replacement. Disabling it trains
    /// every tree on the full training set in original order.
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            cart: CartParams {
                max_depth: None,
                min_samples_leaf: 1,
                features_per_split: FeaturesPerSplit::Sqrt,
                seed: 0,
            },
            seed: 0,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    /// Seed each tree was grown from, `rng::mix(params.seed, t)`.
    pub tree_seeds: Vec<u64>,
    pub params: ForestParams,
    pub n_features: usize,
}

/// Bagged CART ensemble. Tree `t` draws its bootstrap sample from
/// `rng::seeded(seed_t)` and its per-split feature subsets from
/// `rng::mix(seed_t, 1)`, where `seed_t = rng::mix(seed, t)`; trees are
/// grown in parallel with results identical to a serial run.
pub fn train_forest(train: &Dataset, params: &ForestParams) -> Result<ForestModel> {
    if params.n_trees == 0 {
        return Err(Error::InvalidParam("n_trees must be at least 1".into()));
    }
    let y = train.labels();
    require_both_classes(y)?;
    let x = train.features();
    params.cart.validate(x.cols())?;
    let n = x.rows();

    let tree_seeds: Vec<u64> = (0..params.n_trees as u64).map(|t| rng::mix(params.seed, t)).collect();
    let trees = tree_seeds
        .par_iter()
        .map(|&seed_t| {
            let rows: Vec<usize> = if params.bootstrap {
                let mut r = rng::seeded(seed_t);
                (0..n).map(|_| r.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let cart = CartParams {
                seed: rng::mix(seed_t, 1),
                ..params.cart
            };
            train_cart_on_rows(x, y, None, rows, &cart)
        })
        .collect::<Result<Vec<Tree>>>()?;

    Ok(ForestModel {
        trees,
        tree_seeds,
        params: *params,
        n_features: x.cols(),
    })
}

impl ForestModel {
    /// Majority vote (ties to class 0) and the fraction of trees voting 1.
    pub fn predict_with_score(&self, x: &[f64]) -> Result<(u8, f64)> {
        if self.trees.is_empty() {
            return Err(Error::EmptyModel);
        }
        check_dim(self.n_features, x)?;
        let ones = self.trees.iter().filter(|t| t.predict_row(x) == 1).count();
        let zeros = self.trees.len() - ones;
        Ok((u8::from(ones > zeros), ones as f64 / self.trees.len() as f64))
    }
}

impl Classifier for ForestModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn decision_threshold(&self) -> f64 {
        0.5
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        self.predict_with_score(x).map(|(_, s)| s)
    }
}

pub fn forest_predict(model: &ForestModel, x: &[f64]) -> Result<(u8, f64)> {
    model.predict_with_score(x)
}
