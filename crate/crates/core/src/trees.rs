//! Decision stumps (the boosting base learner) and Gini CART trees (the
//! forest base learner).
//!
//! Both share one routing convention: a row goes left iff
//! `x[feature] <= threshold`. Candidate thresholds are midpoints between
//! consecutive distinct sorted values of a feature.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::Matrix;
use crate::error::{Error, Result};
use crate::rng;

/// Depth-one tree. Polarity `+1` sends the left side to class 0 and the
/// right side to class 1; `-1` is the reverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: i8,
    pub vote_left: u8,
    pub vote_right: u8,
    /// Set when no split exists and the stump votes one class everywhere.
    pub degenerate: bool,
    pub n_features: usize,
}

impl Stump {
    fn split(feature: usize, threshold: f64, polarity: i8, n_features: usize) -> Self {
        let (vote_left, vote_right) = if polarity > 0 { (0, 1) } else { (1, 0) };
        Stump {
            feature,
            threshold,
            polarity,
            vote_left,
            vote_right,
            degenerate: false,
            n_features,
        }
    }

    fn constant(class: u8, n_features: usize) -> Self {
        Stump {
            feature: 0,
            threshold: 0.0,
            polarity: if class == 1 { 1 } else { -1 },
            vote_left: class,
            vote_right: class,
            degenerate: true,
            n_features,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        check_dim(self.n_features, x)?;
        Ok(self.predict_row(x))
    }

    #[inline]
    pub(crate) fn predict_row(&self, x: &[f64]) -> u8 {
        if self.degenerate || x[self.feature] <= self.threshold {
            self.vote_left
        } else {
            self.vote_right
        }
    }
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

/// Midpoint threshold that stays strictly below `hi`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m < hi {
        m
    } else {
        lo
    }
}

/// Per-feature row orderings, computed once and reused across boosting
/// rounds.
#[derive(Debug, Clone)]
pub struct SortedColumns {
    order: Vec<Vec<usize>>,
}

impl SortedColumns {
    pub fn new(x: &Matrix) -> Self {
        let order = (0..x.cols())
            .map(|f| {
                let mut idx: Vec<usize> = (0..x.rows()).collect();
                idx.sort_by(|&a, &b| x.get(a, f).total_cmp(&x.get(b, f)).then(a.cmp(&b)));
                idx
            })
            .collect();
        SortedColumns { order }
    }
}

/// Fits the stump minimizing weighted 0-1 error. Ties go to the lowest
/// feature index, then the lowest threshold, then polarity `+1`.
pub fn train_stump(x: &Matrix, y: &[u8], w: &[f64]) -> Result<(Stump, f64)> {
    validate_weighted(x, y, w)?;
    Ok(fit_stump(x, y, w, &SortedColumns::new(x)))
}

fn validate_weighted(x: &Matrix, y: &[u8], w: &[f64]) -> Result<()> {
    if x.rows() == 0 {
        return Err(Error::EmptyInput);
    }
    if y.len() != x.rows() {
        return Err(Error::LengthMismatch(x.rows(), y.len()));
    }
    if w.len() != x.rows() {
        return Err(Error::LengthMismatch(x.rows(), w.len()));
    }
    if w.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidParam("weights must be finite and non-negative".into()));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParam(format!("weights sum to {total}, expected 1")));
    }
    if y.iter().any(|&c| c > 1) {
        return Err(Error::InvalidParam("labels must be 0 or 1".into()));
    }
    Ok(())
}

pub(crate) fn fit_stump(x: &Matrix, y: &[u8], w: &[f64], sorted: &SortedColumns) -> (Stump, f64) {
    let mut totals = [0.0f64; 2];
    for (&c, &wi) in y.iter().zip(w) {
        totals[usize::from(c)] += wi;
    }
    let mut best: Option<(f64, Stump)> = None;
    for (f, order) in sorted.order.iter().enumerate() {
        let mut left = [0.0f64; 2];
        for k in 0..order.len() - 1 {
            let i = order[k];
            left[usize::from(y[i])] += w[i];
            let (lo, hi) = (x.get(i, f), x.get(order[k + 1], f));
            if lo == hi {
                continue;
            }
            // +1: left votes 0, so left positives and right negatives are wrong
            let err_pos = left[1] + (totals[0] - left[0]);
            let err_neg = left[0] + (totals[1] - left[1]);
            let (err, polarity) = if err_neg < err_pos { (err_neg, -1) } else { (err_pos, 1) };
            if best.as_ref().is_none_or(|(b, _)| err < *b) {
                best = Some((err, Stump::split(f, midpoint(lo, hi), polarity, x.cols())));
            }
        }
    }
    match best {
        Some((err, stump)) => (stump, err.clamp(0.0, 0.5)),
        None => {
            let class = u8::from(totals[1] > totals[0]);
            (Stump::constant(class, x.cols()), totals[0].min(totals[1]))
        }
    }
}

/// Gini impurity of a node with class weights `w0`, `w1`.
pub fn gini(w0: f64, w1: f64) -> f64 {
    let total = w0 + w1;
    if total <= 0.0 {
        return 0.0;
    }
    let (p0, p1) = (w0 / total, w1 / total);
    1.0 - p0 * p0 - p1 * p1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeaturesPerSplit {
    All,
    /// `floor(sqrt(d))`, at least one.
    Sqrt,
    Count(usize),
}

impl FeaturesPerSplit {
    pub fn resolve(self, d: usize) -> usize {
        match self {
            FeaturesPerSplit::All => d,
            FeaturesPerSplit::Sqrt => ((d as f64).sqrt().floor() as usize).max(1),
            FeaturesPerSplit::Count(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartParams {
    /// `None` grows until another stopping rule applies.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub features_per_split: FeaturesPerSplit,
    pub seed: u64,
}

impl Default for CartParams {
    fn default() -> Self {
        CartParams {
            max_depth: None,
            min_samples_leaf: 1,
            features_per_split: FeaturesPerSplit::All,
            seed: 0,
        }
    }
}

impl CartParams {
    pub fn validate(&self, d: usize) -> Result<()> {
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidParam("min_samples_leaf must be at least 1".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::InvalidParam("max_depth must be positive".into()));
        }
        let k = self.features_per_split.resolve(d);
        if k == 0 || k > d {
            return Err(Error::InvalidParam(format!(
                "features_per_split must be in 1..={d}, got {k}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        label: u8,
        /// Weighted class totals `[class 0, class 1]` of the training rows
        /// that reached the leaf.
        distribution: [f64; 2],
    },
}

impl TreeNode {
    fn leaf(distribution: [f64; 2]) -> Self {
        TreeNode::Leaf {
            label: u8::from(distribution[1] > distribution[0]),
            distribution,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub root: TreeNode,
    pub n_features: usize,
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        check_dim(self.n_features, x)?;
        Ok(self.predict_row(x))
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> u8 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return *label,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => node = if x[*feature] <= *threshold { left } else { right },
            }
        }
    }
}

/// Grows a Gini CART tree on all rows of `x`.
pub fn train_cart(x: &Matrix, y: &[u8], w: Option<&[f64]>, params: &CartParams) -> Result<Tree> {
    let rows: Vec<usize> = (0..x.rows()).collect();
    train_cart_on_rows(x, y, w, rows, params)
}

/// Grows a tree on a multiset of row indices (a bootstrap resample may
/// repeat rows). `min_samples_leaf` counts entries of the multiset.
pub fn train_cart_on_rows(
    x: &Matrix,
    y: &[u8],
    w: Option<&[f64]>,
    rows: Vec<usize>,
    params: &CartParams,
) -> Result<Tree> {
    if x.rows() == 0 || rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y.len() != x.rows() {
        return Err(Error::LengthMismatch(x.rows(), y.len()));
    }
    if let Some(w) = w {
        if w.len() != x.rows() {
            return Err(Error::LengthMismatch(x.rows(), w.len()));
        }
        if w.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParam("weights must be finite and non-negative".into()));
        }
    }
    params.validate(x.cols())?;
    let mut builder = CartBuilder {
        x,
        y,
        w,
        params,
        k: params.features_per_split.resolve(x.cols()),
        rng: rng::seeded(params.seed),
        features: (0..x.cols()).collect(),
    };
    let root = builder.grow(rows, 0);
    Ok(Tree {
        root,
        n_features: x.cols(),
    })
}

struct CartBuilder<'a> {
    x: &'a Matrix,
    y: &'a [u8],
    w: Option<&'a [f64]>,
    params: &'a CartParams,
    k: usize,
    rng: rng::Rng,
    features: Vec<usize>,
}

struct Candidate {
    impurity: f64,
    feature: usize,
    threshold: f64,
}

impl CartBuilder<'_> {
    fn weight(&self, i: usize) -> f64 {
        self.w.map_or(1.0, |w| w[i])
    }

    fn class_weights(&self, rows: &[usize]) -> [f64; 2] {
        let mut t = [0.0; 2];
        for &i in rows {
            t[usize::from(self.y[i])] += self.weight(i);
        }
        t
    }

    fn grow(&mut self, mut rows: Vec<usize>, depth: usize) -> TreeNode {
        let dist = self.class_weights(&rows);
        let parent = gini(dist[0], dist[1]);
        let at_depth_limit = self.params.max_depth.is_some_and(|m| depth >= m);
        if parent == 0.0 || at_depth_limit || rows.len() < 2 * self.params.min_samples_leaf {
            return TreeNode::leaf(dist);
        }
        let Some(best) = self.best_split(&mut rows, dist) else {
            return TreeNode::leaf(dist);
        };
        if best.impurity >= parent - 1e-12 {
            return TreeNode::leaf(dist);
        }
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&i| self.x.get(i, best.feature) <= best.threshold);
        TreeNode::Internal {
            feature: best.feature,
            threshold: best.threshold,
            left: Box::new(self.grow(left, depth + 1)),
            right: Box::new(self.grow(right, depth + 1)),
        }
    }

    /// Scans candidate features until `k` of them vary within the node.
    /// With `k < d` the scan order is a fresh seeded shuffle per node.
    fn best_split(&mut self, rows: &mut [usize], dist: [f64; 2]) -> Option<Candidate> {
        let d = self.x.cols();
        if self.k < d {
            self.features.shuffle(&mut self.rng);
        }
        let total = dist[0] + dist[1];
        let min_leaf = self.params.min_samples_leaf;
        let mut best: Option<Candidate> = None;
        let mut visited = 0;
        for fi in 0..d {
            if visited == self.k {
                break;
            }
            let f = self.features[fi];
            let x = self.x;
            rows.sort_by(|&a, &b| x.get(a, f).total_cmp(&x.get(b, f)));
            if x.get(rows[0], f) == x.get(rows[rows.len() - 1], f) {
                continue;
            }
            visited += 1;
            let mut left = [0.0f64; 2];
            for p in 0..rows.len() - 1 {
                let i = rows[p];
                left[usize::from(self.y[i])] += self.weight(i);
                let (lo, hi) = (x.get(i, f), x.get(rows[p + 1], f));
                if lo == hi || p + 1 < min_leaf || rows.len() - (p + 1) < min_leaf {
                    continue;
                }
                let right = [dist[0] - left[0], dist[1] - left[1]];
                let (wl, wr) = (left[0] + left[1], right[0] + right[1]);
                let impurity = if total > 0.0 {
                    (wl * gini(left[0], left[1]) + wr * gini(right[0], right[1])) / total
                } else {
                    0.0
                };
                let threshold = midpoint(lo, hi);
                let better = match &best {
                    None => true,
                    Some(b) => match impurity.total_cmp(&b.impurity) {
                        Ordering::Less => true,
                        Ordering::Equal => (f, threshold) < (b.feature, b.threshold),
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some(Candidate {
                        impurity,
                        feature: f,
                        threshold,
                    });
                }
            }
        }
        best
    }
}
