//! Employee-attrition modelling: dataset loading and encoding, exploratory
//! statistics, decision stumps and CART trees, AdaBoost, random forests, an
//! SMO-trained SVM, and accuracy/ROC evaluation over repeated random splits.

pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod model;
pub mod rng;
pub mod stats;
pub mod svg;
pub mod svm;
pub mod trees;

pub use dataset::{
    load_dataset, majority_baseline, split, split_indices, ColumnKind, ColumnSpec, Dataset, EncodingPolicy,
    Matrix, Schema, SplitIndices, SplitSpec,
};
pub use ensemble::{
    adaboost_score, forest_predict, train_adaboost, train_forest, AdaBoostModel, AdaBoostParams, ForestModel,
    ForestParams,
};
pub use error::{Error, Result};
pub use eval::{accuracy, auc, roc_curve, run_benchmark, BenchmarkConfig, BenchmarkTable, EvalReport, RocCurve};
pub use model::{Classifier, ModelConfig, ModelDocument, TrainedModel};
pub use svm::{svm_score, train_svm, GammaPolicy, Kernel, SvmModel, SvmParams};
pub use trees::{train_cart, train_stump, CartParams, FeaturesPerSplit, Stump, Tree};
