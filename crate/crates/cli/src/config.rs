//! Run configuration: defaults, a key=value file, the output-directory
//! environment variable and command-line overrides, applied in that order.

use std::fmt;
use std::path::{Path, PathBuf};

use attrition_core::dataset::EncodingPolicy;
use attrition_core::eval::BenchmarkConfig;
use attrition_core::{AdaBoostParams, FeaturesPerSplit, ForestParams, GammaPolicy, Kernel, ModelConfig, SvmParams};

pub const OUT_DIR_ENV: &str = "ATTRITION_OUT_DIR";

/// Bad configuration file, key or value. Reported with exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: PathBuf,
    pub schema: PathBuf,
    /// Replaces the schema's own drop list when set.
    pub drop: Option<Vec<String>>,
    pub encoding: EncodingPolicy,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub test_fraction: f64,
    pub stratified: bool,
    pub iterations: usize,
    /// Benchmark order; also fixes each model's seed stream.
    pub models: Vec<String>,
    pub adaboost: AdaBoostParams,
    pub svm: SvmParams,
    pub forest: ForestParams,
    /// Algorithm for `train` and `evaluate`.
    pub model: Option<String>,
    pub model_file: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: PathBuf::from("data/ibm_hr_attrition.csv"),
            schema: PathBuf::from("data/ibm_hr_attrition.schema"),
            drop: None,
            encoding: EncodingPolicy::IntegerCodes,
            out_dir: PathBuf::from("out"),
            seed: 42,
            test_fraction: 0.30,
            stratified: false,
            iterations: 3,
            models: ["adaboost", "svm", "random_forest"].map(String::from).to_vec(),
            adaboost: AdaBoostParams::default(),
            svm: SvmParams::default(),
            forest: ForestParams::default(),
            model: None,
            model_file: None,
        }
    }
}

pub const MODEL_NAMES: [&str; 3] = ["adaboost", "svm", "random_forest"];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError(format!("{key}: expected true or false, got {value:?}"))),
    }
}

fn model_name(key: &str, value: &str) -> Result<String> {
    if MODEL_NAMES.contains(&value) {
        Ok(value.to_string())
    } else {
        Err(ConfigError(format!(
            "{key}: unknown model {value:?} (expected one of {})",
            MODEL_NAMES.join(", ")
        )))
    }
}

/// Relative paths in a config file are taken from the file's directory;
/// on the command line, from the working directory.
fn path_in(base: Option<&Path>, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<()> {
        let value = value.trim();
        match key {
            "data" => self.data = path_in(base, value),
            "schema" => self.schema = path_in(base, value),
            "out_dir" => self.out_dir = path_in(base, value),
            "model_file" => self.model_file = Some(path_in(base, value)),
            "drop" => {
                self.drop = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect(),
                )
            }
            "encoding" => self.encoding = value.parse().map_err(|e| ConfigError(format!("{key}: {e}")))?,
            "seed" => self.seed = parse(key, value)?,
            "test_fraction" => {
                let f: f64 = parse(key, value)?;
                if !(f > 0.0 && f < 1.0) {
                    return Err(ConfigError(format!("{key}: must lie strictly between 0 and 1, got {f}")));
                }
                self.test_fraction = f;
            }
            "stratified" => self.stratified = parse_bool(key, value)?,
            "iterations" => {
                self.iterations = parse(key, value)?;
                if self.iterations == 0 {
                    return Err(ConfigError(format!("{key}: must be at least 1")));
                }
            }
            "models" => {
                let names = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| model_name(key, s))
                    .collect::<Result<Vec<_>>>()?;
                if names.is_empty() {
                    return Err(ConfigError(format!("{key}: empty model list")));
                }
                self.models = names;
            }
            "model" => self.model = Some(model_name(key, value)?),
            "adaboost.n_estimators" => self.adaboost.n_estimators = parse(key, value)?,
            "adaboost.learning_rate" => self.adaboost.learning_rate = parse(key, value)?,
            "svm.c" => self.svm.c = parse(key, value)?,
            "svm.kernel" => {
                self.svm.kernel = match value {
                    "linear" => Kernel::Linear,
                    "rbf" => Kernel::Rbf,
                    _ => return Err(ConfigError(format!("{key}: expected linear or rbf, got {value:?}"))),
                }
            }
            "svm.gamma" => {
                self.svm.gamma = match value {
                    "one_over_instances" => GammaPolicy::OneOverInstances,
                    "one_over_features" => GammaPolicy::OneOverFeatures,
                    v => GammaPolicy::Explicit(parse(key, v)?),
                }
            }
            "svm.tolerance" => self.svm.tolerance = parse(key, value)?,
            "svm.max_passes" => self.svm.max_passes = parse(key, value)?,
            "svm.standardize" => self.svm.standardize = parse_bool(key, value)?,
            "forest.n_trees" => self.forest.n_trees = parse(key, value)?,
            "forest.bootstrap" => self.forest.bootstrap = parse_bool(key, value)?,
            "forest.max_depth" => {
                self.forest.cart.max_depth = match value {
                    "none" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "forest.min_samples_leaf" => self.forest.cart.min_samples_leaf = parse(key, value)?,
            "forest.features_per_split" => {
                self.forest.cart.features_per_split = match value {
                    "sqrt" => FeaturesPerSplit::Sqrt,
                    "all" => FeaturesPerSplit::All,
                    v => FeaturesPerSplit::Count(parse(key, v)?),
                }
            }
            _ => return Err(ConfigError(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file. `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
            self.set(k.trim(), v, Some(&base))
                .map_err(|e| ConfigError(format!("{}:{}: {e}", path.display(), n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("--set expects key=value, got {pair:?}")))?;
        self.set(k.trim(), v, None)
    }

    pub fn benchmark(&self) -> BenchmarkConfig {
        BenchmarkConfig {
            n_iterations: self.iterations,
            master_seed: self.seed,
            test_fraction: self.test_fraction,
            stratified: self.stratified,
        }
    }

    pub fn model_config(&self, name: &str) -> ModelConfig {
        match name {
            "adaboost" => ModelConfig::Adaboost(self.adaboost),
            "svm" => ModelConfig::Svm(self.svm),
            "random_forest" => ModelConfig::RandomForest(self.forest),
            other => unreachable!("model names are validated on input: {other}"),
        }
    }

    pub fn model_configs(&self) -> Vec<ModelConfig> {
        self.models.iter().map(|m| self.model_config(m)).collect()
    }

    /// The model chosen for `train`/`evaluate` and its position in the
    /// benchmark list, which fixes its seed.
    pub fn selected_model(&self) -> Result<(usize, ModelConfig)> {
        let name = match (&self.model, self.models.as_slice()) {
            (Some(m), _) => m.clone(),
            (None, [only]) => only.clone(),
            (None, _) => return Err(ConfigError("choose a model with --model or `model = ...`".into())),
        };
        let index = self
            .models
            .iter()
            .position(|m| *m == name)
            .ok_or_else(|| ConfigError(format!("model {name:?} is not in the models list")))?;
        Ok((index, self.model_config(&name)))
    }

    pub fn model_path(&self, name: &str) -> PathBuf {
        self.model_file
            .clone()
            .unwrap_or_else(|| self.out_dir.join(format!("model_{name}.json")))
    }
}
