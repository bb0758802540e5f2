//! Soft-margin support-vector classifier trained on the dual problem.
//!
//! The solver minimizes `½ αᵀQα − Σα` subject to `0 ≤ α ≤ C` and
//! `Σ α_i y_i = 0`, with `Q_ij = y_i y_j K(x_i, x_j)`, by sequential
//! minimal optimization. Each iteration picks the working pair with the
//! second-order rule: `i` is the maximal violator in the "up" set, and `j`
//! maximizes the guaranteed objective decrease among "low" candidates. Ties
//! go to whichever index comes first in a seeded permutation of the rows.
//! The solver stops once the maximal KKT violation `m(α) − M(α)` drops
//! below `tolerance`.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::model::Classifier;
use crate::rng;
use crate::trees::check_dim;

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaPolicy {
    /// `1 / (number of training instances)`.
    OneOverInstances,
    /// `1 / (number of features)`.
    OneOverFeatures,
    Explicit(f64),
}

impl GammaPolicy {
    pub fn resolve(self, n: usize, d: usize) -> f64 {
        match self {
            GammaPolicy::OneOverInstances => 1.0 / n as f64,
            GammaPolicy::OneOverFeatures => 1.0 / d as f64,
            GammaPolicy::Explicit(g) => g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub kernel: Kernel,
    pub gamma: GammaPolicy,
    /// Stopping threshold on the maximal KKT violation.
    pub tolerance: f64,
    /// Iteration budget in units of `n` pair updates.
    pub max_passes: usize,
    pub seed: u64,
    /// Fit a per-feature standardizer on the training rows.
    pub standardize: bool,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            kernel: Kernel::Linear,
            gamma: GammaPolicy::OneOverInstances,
            tolerance: 1e-3,
            max_passes: 1000,
            seed: 0,
            standardize: true,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParam(format!("C must be positive, got {}", self.c)));
        }
        if let GammaPolicy::Explicit(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidParam(format!("gamma must be positive, got {g}")));
            }
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParam("tolerance must be positive".into()));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidParam("max_passes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-feature standardization fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub means: Vec<f64>,
    /// Population standard deviations; zero-variance features get 1.
    pub stds: Vec<f64>,
}

impl Scaler {
    pub fn fit(x: &Matrix) -> Self {
        let n = x.rows() as f64;
        let (means, stds) = (0..x.cols())
            .map(|j| {
                let col = x.column(j);
                let mean = col.iter().sum::<f64>() / n;
                let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                let std = var.sqrt();
                (mean, if std > 0.0 { std } else { 1.0 })
            })
            .unzip();
        Scaler { means, stds }
    }

    pub fn identity(d: usize) -> Self {
        Scaler {
            means: vec![0.0; d],
            stds: vec![1.0; d],
        }
    }

    pub fn transform_row(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn transform(&self, x: &Matrix) -> Matrix {
        let data = x.iter_rows().flat_map(|r| self.transform_row(r)).collect();
        Matrix::new(x.rows(), x.cols(), data).expect("shape preserved")
    }
}

pub fn rbf_kernel(x: &[f64], z: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: z.len(),
        });
    }
    Ok(rbf(x, z, gamma))
}

#[inline]
fn rbf(x: &[f64], z: &[f64], gamma: f64) -> f64 {
    let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

#[inline]
fn dot(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum DecisionFunction {
    Linear {
        weights: Vec<f64>,
        bias: f64,
    },
    Rbf {
        gamma: f64,
        support_vectors: Vec<Vec<f64>>,
        /// `α_i y_i` for each support vector.
        dual_coef: Vec<f64>,
        bias: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub decision: DecisionFunction,
    pub scaler: Scaler,
    pub params: SvmParams,
    pub n_features: usize,
    pub n_support: usize,
    pub iterations: usize,
    /// False when the iteration budget ran out before the KKT tolerance was
    /// met; the model is still usable.
    pub converged: bool,
    /// Final dual objective `Σα − ½ αᵀQα`.
    pub dual_objective: f64,
}

impl SvmModel {
    /// Signed decision value on the scaled row; positive means class 1.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.n_features, x)?;
        let z = self.scaler.transform_row(x);
        Ok(match &self.decision {
            DecisionFunction::Linear { weights, bias } => dot(weights, &z) + bias,
            DecisionFunction::Rbf {
                gamma,
                support_vectors,
                dual_coef,
                bias,
            } => {
                support_vectors
                    .iter()
                    .zip(dual_coef)
                    .map(|(sv, c)| c * rbf(sv, &z, *gamma))
                    .sum::<f64>()
                    + bias
            }
        })
    }
}

impl Classifier for SvmModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn decision_threshold(&self) -> f64 {
        0.0
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        SvmModel::score(self, x)
    }
}

pub fn svm_score(model: &SvmModel, x: &[f64]) -> Result<f64> {
    model.score(x)
}

/// Solver state exposed for diagnostics and optimality checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmTrainInfo {
    /// Dual variables, one per training row.
    pub alphas: Vec<f64>,
    /// Dual objective after every pair update (first entry: α = 0).
    pub objective_trace: Vec<f64>,
    /// `m(α) − M(α)` at termination.
    pub final_violation: f64,
}

pub fn train_svm(train: &Dataset, params: &SvmParams) -> Result<SvmModel> {
    train_svm_traced(train, params).map(|(m, _)| m)
}

pub fn train_svm_traced(train: &Dataset, params: &SvmParams) -> Result<(SvmModel, SvmTrainInfo)> {
    params.validate()?;
    let labels = train.labels();
    let pos = labels.iter().filter(|&&l| l == 1).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::SingleClass);
    }
    let raw = train.features();
    let (n, d) = (raw.rows(), raw.cols());
    let scaler = if params.standardize {
        Scaler::fit(raw)
    } else {
        Scaler::identity(d)
    };
    let x = scaler.transform(raw);
    let y: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    let gamma = params.gamma.resolve(n, d);

    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = match params.kernel {
                Kernel::Linear => dot(x.row(i), x.row(j)),
                Kernel::Rbf => rbf(x.row(i), x.row(j), gamma),
            };
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(params.seed));
    let solution = solve_dual(&kernel, &y, params.c, params.tolerance, params.max_passes * n, &order);

    let bias = -solution.rho;
    let support: Vec<usize> = (0..n).filter(|&i| solution.alphas[i] > 0.0).collect();
    let decision = match params.kernel {
        Kernel::Linear => {
            let mut weights = vec![0.0; d];
            for &i in &support {
                let c = solution.alphas[i] * y[i];
                for (w, v) in weights.iter_mut().zip(x.row(i)) {
                    *w += c * v;
                }
            }
            DecisionFunction::Linear { weights, bias }
        }
        Kernel::Rbf => DecisionFunction::Rbf {
            gamma,
            support_vectors: support.iter().map(|&i| x.row(i).to_vec()).collect(),
            dual_coef: support.iter().map(|&i| solution.alphas[i] * y[i]).collect(),
            bias,
        },
    };
    let model = SvmModel {
        decision,
        scaler,
        params: *params,
        n_features: d,
        n_support: support.len(),
        iterations: solution.iterations,
        converged: solution.converged,
        dual_objective: *solution.objective_trace.last().expect("trace starts at zero"),
    };
    let info = SvmTrainInfo {
        alphas: solution.alphas,
        objective_trace: solution.objective_trace,
        final_violation: solution.violation,
    };
    Ok((model, info))
}

struct DualSolution {
    alphas: Vec<f64>,
    rho: f64,
    iterations: usize,
    converged: bool,
    violation: f64,
    objective_trace: Vec<f64>,
}

/// SMO on a precomputed `n×n` kernel matrix. `order` fixes the scan order
/// used for tie-breaking.
fn solve_dual(
    kernel: &[f64],
    y: &[f64],
    c: f64,
    eps: f64,
    max_iter: usize,
    order: &[usize],
) -> DualSolution {
    let n = y.len();
    let k = |i: usize, j: usize| kernel[i * n + j];
    let mut alpha = vec![0.0f64; n];
    // gradient of ½αᵀQα − Σα
    let mut grad = vec![-1.0f64; n];
    let objective = |alpha: &[f64], grad: &[f64]| -> f64 {
        0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (1.0 - g)).sum::<f64>()
    };
    let mut trace = vec![0.0];
    let in_up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let in_low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    let mut iterations = 0;
    let mut converged = false;
    let mut violation = f64::INFINITY;
    while iterations < max_iter {
        let mut i = usize::MAX;
        let mut gmax = f64::NEG_INFINITY;
        for &t in order {
            if in_up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v > gmax {
                    gmax = v;
                    i = t;
                }
            }
        }
        let mut j = usize::MAX;
        let mut gmin = f64::INFINITY;
        let mut best_gain = f64::INFINITY;
        for &t in order {
            if !in_low(alpha[t], y[t]) {
                continue;
            }
            let v = -y[t] * grad[t];
            if v < gmin {
                gmin = v;
            }
            if i == usize::MAX {
                continue;
            }
            let b = gmax - v;
            if b > 0.0 {
                let a = k(i, i) + k(t, t) - 2.0 * k(i, t);
                let gain = -(b * b) / if a > 0.0 { a } else { TAU };
                if gain < best_gain {
                    best_gain = gain;
                    j = t;
                }
            }
        }
        violation = gmax - gmin;
        if i == usize::MAX || j == usize::MAX || violation < eps {
            converged = true;
            break;
        }

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qij = y[i] * y[j] * k(i, j);
        if y[i] != y[j] {
            let quad = k(i, i) + k(j, j) + 2.0 * qij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = k(i, i) + k(j, j) - 2.0 * qij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(i, t) * di + y[j] * k(j, t) * dj);
        }
        iterations += 1;
        trace.push(objective(&alpha, &grad));
    }

    // Bias from free vectors, or the midpoint of the feasible interval.
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum_free) = (0usize, 0.0);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    let rho = if free > 0 {
        sum_free / free as f64
    } else {
        (ub + lb) / 2.0
    };

    DualSolution {
        alphas: alpha,
        rho,
        iterations,
        converged,
        violation,
        objective_trace: trace,
    }
}
