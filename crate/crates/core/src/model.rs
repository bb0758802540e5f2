//! Common interface over the three classifiers, their configurations and
//! the versioned JSON model document.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::ensemble::{train_adaboost, train_forest, AdaBoostModel, AdaBoostParams, ForestModel, ForestParams};
use crate::error::{Error, Result};
use crate::svm::{train_svm, SvmModel, SvmParams};

/// A trained binary classifier with a real-valued decision score.
///
/// Class 1 is predicted iff the score is strictly above
/// [`decision_threshold`](Classifier::decision_threshold); a score exactly
/// at the threshold predicts class 0.
pub trait Classifier {
    fn n_features(&self) -> usize;

    fn decision_threshold(&self) -> f64;

    fn score(&self, x: &[f64]) -> Result<f64>;

    fn predict(&self, x: &[f64]) -> Result<u8> {
        Ok(u8::from(self.score(x)? > self.decision_threshold()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum ModelConfig {
    Adaboost(AdaBoostParams),
    Svm(SvmParams),
    RandomForest(ForestParams),
}

impl ModelConfig {
    /// AdaBoost (1000 stumps, learning rate 0.1), linear SVM with C = 1 and
    /// a 100-tree forest.
    pub fn benchmark_defaults() -> Vec<ModelConfig> {
        vec![
            ModelConfig::Adaboost(AdaBoostParams::default()),
            ModelConfig::Svm(SvmParams::default()),
            ModelConfig::RandomForest(ForestParams::default()),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::Adaboost(_) => "adaboost",
            ModelConfig::Svm(_) => "svm",
            ModelConfig::RandomForest(_) => "random_forest",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ModelConfig::Adaboost(p) => p.seed,
            ModelConfig::Svm(p) => p.seed,
            ModelConfig::RandomForest(p) => p.seed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            ModelConfig::Adaboost(p) => p.seed = seed,
            ModelConfig::Svm(p) => p.seed = seed,
            ModelConfig::RandomForest(p) => p.seed = seed,
        }
        self
    }

    pub fn train(&self, data: &Dataset) -> Result<TrainedModel> {
        Ok(match self {
            ModelConfig::Adaboost(p) => TrainedModel::Adaboost(train_adaboost(data, p)?),
            ModelConfig::Svm(p) => TrainedModel::Svm(train_svm(data, p)?),
            ModelConfig::RandomForest(p) => TrainedModel::RandomForest(train_forest(data, p)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum TrainedModel {
    Adaboost(AdaBoostModel),
    Svm(SvmModel),
    RandomForest(ForestModel),
}

impl TrainedModel {
    pub fn name(&self) -> &'static str {
        match self {
            TrainedModel::Adaboost(_) => "adaboost",
            TrainedModel::Svm(_) => "svm",
            TrainedModel::RandomForest(_) => "random_forest",
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            TrainedModel::Adaboost(m) => m,
            TrainedModel::Svm(m) => m,
            TrainedModel::RandomForest(m) => m,
        }
    }
}

impl Classifier for TrainedModel {
    fn n_features(&self) -> usize {
        self.inner().n_features()
    }

    fn decision_threshold(&self) -> f64 {
        self.inner().decision_threshold()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        self.inner().score(x)
    }
}

pub const MODEL_FORMAT: &str = "attrition-model";
pub const MODEL_VERSION: u32 = 1;

/// Serialized form of a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    /// Feature names in the column order the model expects.
    pub feature_names: Vec<String>,
    pub model: TrainedModel,
}

impl ModelDocument {
    pub fn new(model: TrainedModel, feature_names: Vec<String>) -> Self {
        ModelDocument {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            feature_names,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::ModelFormat(format!("unexpected format tag {:?}", doc.format)));
        }
        if doc.version != MODEL_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported version {} (expected {MODEL_VERSION})",
                doc.version
            )));
        }
        if doc.feature_names.len() != doc.model.n_features() {
            return Err(Error::ModelFormat(format!(
                "{} feature names for a model over {} features",
                doc.feature_names.len(),
                doc.model.n_features()
            )));
        }
        Ok(doc)
    }

    /// Checks that `data` has the columns the model was trained on.
    pub fn check_compatible(&self, data: &Dataset) -> Result<()> {
        if data.feature_names() != self.feature_names.as_slice() {
            return Err(Error::ModelFormat(
                "dataset feature columns differ from the model's training columns".into(),
            ));
        }
        Ok(())
    }
}
