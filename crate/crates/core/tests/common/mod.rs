//! Independent oracles and check suites shared by the integration tests
//! and the acceptance runner. Nothing here calls the library code it is
//! checking; each oracle recomputes its answer from first principles.

#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;
use std::time::Instant;

use attrition_core::dataset::{load_dataset, split, Dataset, EncodingPolicy, Matrix, Schema, SplitSpec};
use attrition_core::ensemble::train_adaboost_traced;
use attrition_core::eval::{auc, roc_curve, run_benchmark, BenchmarkConfig, RocPoint};
use attrition_core::rng;
use attrition_core::stats::pearson_matrix;
use attrition_core::svm::train_svm_traced;
use attrition_core::trees::{train_cart, train_stump, CartParams, FeaturesPerSplit, TreeNode};
use attrition_core::{AdaBoostParams, GammaPolicy, Kernel, ModelConfig, SvmParams};
use rand::Rng as _;

pub type Check = Result<String, String>;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn ibm() -> Dataset {
    let schema = Schema::from_file(data_dir().join("ibm_hr_attrition.schema")).expect("schema");
    load_dataset(data_dir().join("ibm_hr_attrition.csv"), &schema, EncodingPolicy::IntegerCodes).expect("dataset")
}

pub fn dataset(rows: &[Vec<f64>], labels: Vec<u8>) -> Dataset {
    let names = (0..rows[0].len()).map(|j| format!("f{j}")).collect();
    Dataset::new(Matrix::from_rows(rows).unwrap(), names, labels).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn both_classes(rng: &mut rng::Rng, n: usize) -> Vec<u8> {
    loop {
        let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        if y.contains(&0) && y.contains(&1) {
            return y;
        }
    }
}

// ---------------------------------------------------------------- AUC

/// Probability that a random positive outscores a random negative, ties
/// counting one half.
pub fn pair_count_auc(scores: &[f64], truth: &[u8]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &si) in scores.iter().enumerate() {
        for (j, &sj) in scores.iter().enumerate() {
            if truth[i] == 1 && truth[j] == 0 {
                pairs += 1.0;
                if si > sj {
                    wins += 1.0;
                } else if si == sj {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// ROC points from scanning every distinct score as a `>=` cutoff.
pub fn brute_force_roc(scores: &[f64], truth: &[u8]) -> Vec<(f64, f64)> {
    let mut cutoffs: Vec<f64> = scores.to_vec();
    cutoffs.sort_by(|a, b| b.total_cmp(a));
    cutoffs.dedup();
    let p = truth.iter().filter(|&&t| t == 1).count() as f64;
    let n = truth.len() as f64 - p;
    let mut pts = vec![(0.0, 0.0)];
    for t in cutoffs {
        let tp = scores.iter().zip(truth).filter(|(&s, &y)| s >= t && y == 1).count() as f64;
        let fp = scores.iter().zip(truth).filter(|(&s, &y)| s >= t && y == 0).count() as f64;
        pts.push((fp / n, tp / p));
    }
    pts
}

fn random_scored(rng: &mut rng::Rng) -> (Vec<f64>, Vec<u8>) {
    let n = rng.gen_range(2..=50);
    let truth = both_classes(rng, n);
    // coarse scores so that ties are common
    let levels = rng.gen_range(2..12);
    let scores = (0..n).map(|_| f64::from(rng.gen_range(0..levels)) / 3.0 - 1.0).collect();
    (scores, truth)
}

pub fn check_auc_pair_counting(fixtures: usize) -> Check {
    let mut rng = rng::seeded(0xA0C);
    let mut worst: f64 = 0.0;
    for k in 0..fixtures {
        let (scores, truth) = random_scored(&mut rng);
        let curve = roc_curve(&scores, &truth).map_err(|e| e.to_string())?;
        let diff = (auc(&curve) - pair_count_auc(&scores, &truth)).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-9, || format!("fixture {k}: trapezoid and pair count differ by {diff:e}"))?;
    }
    Ok(format!("{fixtures} fixtures, max |diff| = {worst:.1e}"))
}

pub fn check_roc_brute_force(fixtures: usize) -> Check {
    let mut rng = rng::seeded(0x20C);
    for k in 0..fixtures {
        let (scores, truth) = random_scored(&mut rng);
        let curve = roc_curve(&scores, &truth).map_err(|e| e.to_string())?;
        let got: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.fpr, p.tpr)).collect();
        ensure(got == brute_force_roc(&scores, &truth), || format!("fixture {k}: curves differ"))?;
    }
    Ok(format!("{fixtures} fixtures match the threshold scan"))
}

// ---------------------------------------------------------------- stumps

/// Lowest weighted 0-1 error over every feature, midpoint threshold and
/// polarity, scanning in (feature, threshold, polarity +1 then -1) order
/// and keeping the first strict improvement.
pub fn brute_force_stump(x: &[Vec<f64>], y: &[u8], w: &[f64]) -> Option<(usize, f64, i8, f64)> {
    let d = x[0].len();
    let mut best: Option<(usize, f64, i8, f64)> = None;
    for f in 0..d {
        let mut vals: Vec<f64> = x.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let t = (pair[0] + pair[1]) / 2.0;
            for polarity in [1i8, -1] {
                let err: f64 = x
                    .iter()
                    .zip(y)
                    .zip(w)
                    .filter(|((r, &c), _)| {
                        let right = r[f] > t;
                        let pred = if polarity > 0 { u8::from(right) } else { u8::from(!right) };
                        pred != c
                    })
                    .map(|(_, &wi)| wi)
                    .sum();
                if best.is_none_or(|b| err < b.3) {
                    best = Some((f, t, polarity, err));
                }
            }
        }
    }
    best
}

pub fn check_stump_exhaustive(instances: usize) -> Check {
    let mut rng = rng::seeded(0x57);
    for k in 0..instances {
        let n = rng.gen_range(2..=12);
        let d = rng.gen_range(1..=4);
        // small integer grid for ties; dyadic weights keep every sum exact
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| f64::from(rng.gen_range(0..5))).collect()).collect();
        let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(1..8)).collect();
        let total: u32 = raw.iter().sum();
        let scale = total.next_power_of_two();
        let mut w: Vec<f64> = raw.iter().map(|&r| f64::from(r) / f64::from(scale)).collect();
        w[0] += f64::from(scale - total) / f64::from(scale);

        let (stump, err) = train_stump(&Matrix::from_rows(&x).unwrap(), &y, &w).map_err(|e| e.to_string())?;
        match brute_force_stump(&x, &y, &w) {
            Some((f, t, p, e)) => {
                ensure(!stump.degenerate && (stump.feature, stump.threshold, stump.polarity) == (f, t, p) && err == e, || {
                    format!(
                        "instance {k}: got (f{}, {}, {:+}, err {err}), oracle (f{f}, {t}, {p:+}, err {e})",
                        stump.feature, stump.threshold, stump.polarity
                    )
                })?;
            }
            None => {
                let pos: f64 = y.iter().zip(&w).filter(|(&c, _)| c == 1).map(|(_, &wi)| wi).sum();
                ensure(stump.degenerate && err == pos.min(1.0 - pos), || format!("instance {k}: constant features"))?;
            }
        }
        let recomputed: f64 = x
            .iter()
            .zip(&y)
            .zip(&w)
            .filter(|((r, &c), _)| stump.predict(r).unwrap() != c)
            .map(|(_, &wi)| wi)
            .sum();
        ensure(recomputed == err, || format!("instance {k}: reported error {err}, realized {recomputed}"))?;
    }
    Ok(format!("{instances} instances agree with exhaustive search"))
}

// ---------------------------------------------------------------- SVM dual

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gram(x: &[Vec<f64>], y: &[u8], kernel: Kernel, gamma: f64) -> Vec<Vec<f64>> {
    let s = |c: u8| if c == 1 { 1.0 } else { -1.0 };
    x.iter()
        .enumerate()
        .map(|(i, a)| {
            x.iter()
                .enumerate()
                .map(|(j, b)| {
                    let k = match kernel {
                        Kernel::Linear => dot(a, b),
                        Kernel::Rbf => (-gamma * a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>()).exp(),
                    };
                    s(y[i]) * s(y[j]) * k
                })
                .collect()
        })
        .collect()
}

pub fn dual_value(q: &[Vec<f64>], a: &[f64]) -> f64 {
    let quad: f64 = (0..a.len()).map(|i| (0..a.len()).map(|j| a[i] * q[i][j] * a[j]).sum::<f64>()).sum();
    a.iter().sum::<f64>() - 0.5 * quad
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let k = rhs.len();
    for c in 0..k {
        let p = (c..k).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < 1e-10 {
            return None;
        }
        m.swap(c, p);
        rhs.swap(c, p);
        for r in c + 1..k {
            let f = m[r][c] / m[c][c];
            for cc in c..k {
                m[r][cc] -= f * m[c][cc];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    let mut out = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| m[r][c] * out[c]).sum();
        out[r] = (rhs[r] - s) / m[r][r];
    }
    Some(out)
}

/// Maximum of `Σα − ½αᵀQα` over `0 ≤ α ≤ C`, `Σ α_i y_i = 0`.
///
/// Visits every face of the box (each coordinate at 0, at C, or free). On
/// a face the concave objective restricted to the constraint hyperplane is
/// maximized where its Lagrange system holds; faces whose system is
/// singular are skipped, since a maximizer there also lies on a smaller
/// face.
pub fn face_enumeration_max(q: &[Vec<f64>], y: &[u8], c: f64) -> f64 {
    let n = y.len();
    let s: Vec<f64> = y.iter().map(|&v| if v == 1 { 1.0 } else { -1.0 }).collect();
    let mut best = f64::NEG_INFINITY;
    for code in 0..3usize.pow(n as u32) {
        let mut state = vec![0u8; n];
        let mut rest = code;
        for st in &mut state {
            *st = (rest % 3) as u8;
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut a: Vec<f64> = state.iter().map(|&st| if st == 1 { c } else { 0.0 }).collect();
        if free.is_empty() {
            if dot(&a, &s).abs() > 1e-12 {
                continue;
            }
        } else {
            // unknowns: α_F then the multiplier b
            let k = free.len();
            let mut m = vec![vec![0.0; k + 1]; k + 1];
            let mut rhs = vec![0.0; k + 1];
            for (r, &i) in free.iter().enumerate() {
                for (cc, &j) in free.iter().enumerate() {
                    m[r][cc] = q[i][j];
                }
                m[r][k] = s[i];
                rhs[r] = 1.0 - (0..n).filter(|j| state[*j] == 1).map(|j| q[i][j] * c).sum::<f64>();
            }
            for (cc, &j) in free.iter().enumerate() {
                m[k][cc] = s[j];
            }
            rhs[k] = -(0..n).filter(|j| state[*j] == 1).map(|j| s[j] * c).sum::<f64>();
            let Some(sol) = solve(m, rhs) else { continue };
            if free.iter().zip(&sol).any(|(_, &v)| !(-1e-9..=c + 1e-9).contains(&v)) {
                continue;
            }
            for (&i, &v) in free.iter().zip(&sol) {
                a[i] = v.clamp(0.0, c);
            }
        }
        best = best.max(dual_value(q, &a));
    }
    best
}

/// Zooming grid search over the first `n − 1` coordinates, the last one
/// being fixed by the equality constraint.
pub fn zoom_grid_max(q: &[Vec<f64>], y: &[u8], c: f64) -> f64 {
    let n = y.len();
    let s: Vec<f64> = y.iter().map(|&v| if v == 1 { 1.0 } else { -1.0 }).collect();
    let m = n - 1;
    let steps = 24;
    let mut lo = vec![0.0; m];
    let mut hi = vec![c; m];
    let mut best = (f64::NEG_INFINITY, vec![0.0; n]);
    for _ in 0..60 {
        let mut idx = vec![0usize; m];
        loop {
            let mut a: Vec<f64> = (0..m).map(|k| lo[k] + (hi[k] - lo[k]) * idx[k] as f64 / steps as f64).collect();
            let last = -(0..m).map(|k| s[k] * a[k]).sum::<f64>() * s[m];
            if (-1e-12..=c + 1e-12).contains(&last) {
                a.push(last.clamp(0.0, c));
                let v = dual_value(q, &a);
                if v > best.0 {
                    best = (v, a);
                }
            }
            let mut k = 0;
            while k < m {
                idx[k] += 1;
                if idx[k] <= steps {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
        for k in 0..m {
            let half = (hi[k] - lo[k]) / 4.0;
            lo[k] = (best.1[k] - half).max(0.0);
            hi[k] = (best.1[k] + half).min(c);
        }
    }
    best.0
}

pub struct SvmFixture {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<u8>,
    pub c: f64,
    pub kernel: Kernel,
    pub gamma: f64,
}

impl SvmFixture {
    pub fn params(&self) -> SvmParams {
        SvmParams {
            c: self.c,
            kernel: self.kernel,
            gamma: GammaPolicy::Explicit(self.gamma),
            standardize: false,
            ..SvmParams::default()
        }
    }

    pub fn gram(&self) -> Vec<Vec<f64>> {
        gram(&self.x, &self.y, self.kernel, self.gamma)
    }
}

pub fn svm_fixtures(count: usize) -> Vec<SvmFixture> {
    let mut rng = rng::seeded(0x5F);
    let mut out = vec![
        // hand-checkable: two points, optimum α = 2/|x1 - x2|² each
        SvmFixture {
            x: vec![vec![1.0, 1.0], vec![-1.0, -1.0]],
            y: vec![1, 0],
            c: 10.0,
            kernel: Kernel::Linear,
            gamma: 1.0,
        },
        // the four-point instance also checked by the zooming grid
        SvmFixture {
            x: vec![vec![2.0, 0.5], vec![0.5, 1.5], vec![-1.0, -0.5], vec![0.0, -2.0]],
            y: vec![1, 1, 0, 0],
            c: 1.0,
            kernel: Kernel::Linear,
            gamma: 1.0,
        },
    ];
    while out.len() < count {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(1..=3);
        let x = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let y = both_classes(&mut rng, n);
        let c = [0.1, 1.0, 10.0][rng.gen_range(0..3)];
        let kernel = if rng.gen_bool(0.5) { Kernel::Linear } else { Kernel::Rbf };
        out.push(SvmFixture {
            x,
            y,
            c,
            kernel,
            gamma: 0.5,
        });
    }
    out
}

pub fn check_svm_dual_oracle(count: usize) -> Check {
    let mut worst: f64 = 0.0;
    for (k, fx) in svm_fixtures(count).iter().enumerate() {
        let data = dataset(&fx.x, fx.y.clone());
        let (model, info) = train_svm_traced(&data, &fx.params()).map_err(|e| e.to_string())?;
        let q = fx.gram();
        let oracle = face_enumeration_max(&q, &fx.y, fx.c);
        let diff = (model.dual_objective - oracle).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-4, || {
            format!("fixture {k}: solver {} vs enumeration {oracle} (n = {})", model.dual_objective, fx.y.len())
        })?;
        // the reported objective must be the value of the returned alphas
        let realized = dual_value(&q, &info.alphas);
        ensure((realized - model.dual_objective).abs() <= 1e-9, || {
            format!("fixture {k}: reported objective {} but alphas give {realized}", model.dual_objective)
        })?;
        if fx.y.len() == 4 {
            let grid = zoom_grid_max(&q, &fx.y, fx.c);
            ensure((grid - oracle).abs() <= 1e-6, || format!("fixture {k}: grid {grid} vs enumeration {oracle}"))?;
        }
    }
    Ok(format!("{count} fixtures (n ≤ 6), max |solver − oracle| = {worst:.1e}"))
}

// ---------------------------------------------------------------- reference accuracy arithmetic

pub const REFERENCE_ACCURACY: [[f64; 3]; 3] = [[0.8707, 0.8571, 0.8503], [0.8775, 0.8820, 0.8798], [0.8820, 0.8775, 0.8775]];
pub const REFERENCE_MEANS: [f64; 3] = [0.8767, 0.8722, 0.8692];

/// Smallest k with k/441 equal to `v` at four decimals, by rounding or by
/// truncation.
pub fn over_441(v: f64) -> Option<(u32, &'static str)> {
    let target = (v * 1e4).round() as i64;
    (0..=441u32).find_map(|k| {
        let exact = f64::from(k) / 441.0 * 1e4;
        if exact.round() as i64 == target {
            Some((k, "rounded"))
        } else if (exact + 1e-9).floor() as i64 == target {
            Some((k, "truncated"))
        } else {
            None
        }
    })
}

// ---------------------------------------------------------------- invariant suites

fn timed(limit_secs: f64, body: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = body()?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < limit_secs, || format!("took {secs:.1}s"))?;
    Ok(format!("{detail} [{secs:.2}s]"))
}

pub fn suite_correlation(data: &Dataset) -> Check {
    timed(60.0, || {
        let m = pearson_matrix(data);
        let d = m.dim();
        for i in 0..d {
            for j in 0..d {
                ensure(m.value(i, j) == m.value(j, i), || format!("asymmetric at ({i}, {j})"))?;
                if let Some(r) = m.get(i, j) {
                    ensure(r.abs() <= 1.0, || format!("|r| > 1 at ({i}, {j})"))?;
                }
            }
            if let Some(r) = m.get(i, i) {
                ensure((r - 1.0).abs() <= 1e-12, || format!("diagonal {i} is {r}"))?;
            }
        }
        let mut rng = rng::seeded(0xC0);
        let x = data.features();
        for _ in 0..50 {
            let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let (a, b) = (rng.gen_range(0.1..10.0), rng.gen_range(-100.0..100.0));
            let (ci, cj) = (x.column(i), x.column(j));
            let Some(base) = attrition_core::stats::pearson(&ci, &cj) else { continue };
            let moved: Vec<f64> = ci.iter().map(|v| a * v + b).collect();
            let flipped: Vec<f64> = ci.iter().map(|v| -a * v + b).collect();
            let r1 = attrition_core::stats::pearson(&moved, &cj).unwrap();
            let r2 = attrition_core::stats::pearson(&flipped, &cj).unwrap();
            ensure((r1 - base).abs() <= 1e-12 && (r2 + base).abs() <= 1e-12, || {
                format!("affine change of column {i} moved r({i},{j}) from {base} to {r1} / {r2}")
            })?;
        }
        Ok(format!("{d}×{d} symmetric, unit diagonal, affine-invariant"))
    })
}

pub fn suite_boosting(data: &Dataset) -> Check {
    timed(60.0, || {
        let (train, _) = split(data, &SplitSpec::new(0.3, 7, false).unwrap()).map_err(|e| e.to_string())?;
        let mut checked = 0;
        let mut runs = vec![(train, AdaBoostParams { seed: 1, ..AdaBoostParams::default() })];
        let mut rng = rng::seeded(0xB0);
        for _ in 0..20 {
            let n = rng.gen_range(4..40);
            let x: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let y = both_classes(&mut rng, n);
            runs.push((
                dataset(&x, y),
                AdaBoostParams {
                    n_estimators: 50,
                    learning_rate: [0.1, 0.5, 1.0][rng.gen_range(0..3)],
                    seed: 0,
                },
            ));
        }
        for (d, params) in &runs {
            let (_, trace) = train_adaboost_traced(d, params).map_err(|e| e.to_string())?;
            for (t, w) in trace.exp_loss.windows(2).enumerate() {
                ensure(w[1] <= w[0] * (1.0 + 1e-12), || format!("exp-loss rose at round {}: {} -> {}", t + 1, w[0], w[1]))?;
            }
            ensure(trace.exp_loss.first().is_none_or(|&l| l <= 1.0 + 1e-12), || "first round above 1".into())?;
            for (t, (&s, &m)) in trace.weight_sums.iter().zip(&trace.min_weights).enumerate() {
                ensure((s - 1.0).abs() <= 1e-9 && m > 0.0, || format!("round {t}: weight sum {s}, min {m}"))?;
            }
            checked += trace.exp_loss.len();
        }
        Ok(format!("{checked} boosting rounds: exp-loss non-increasing, weights sum to 1"))
    })
}

fn gini(c: [f64; 2]) -> f64 {
    let t = c[0] + c[1];
    if t == 0.0 {
        0.0
    } else {
        1.0 - (c[0] / t).powi(2) - (c[1] / t).powi(2)
    }
}

/// Routes the rows through every internal node and checks that the
/// weighted child impurity is below the parent's.
fn impurity_decreases(node: &TreeNode, x: &[Vec<f64>], y: &[u8], rows: &[usize], count: &mut usize) -> Result<(), String> {
    let counts = |rs: &[usize]| {
        let mut c = [0.0; 2];
        for &r in rs {
            c[usize::from(y[r])] += 1.0;
        }
        c
    };
    if let TreeNode::Internal { feature, threshold, left, right } = node {
        let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][*feature] <= *threshold);
        ensure(!l.is_empty() && !r.is_empty(), || "empty child".into())?;
        let n = rows.len() as f64;
        let parent = gini(counts(rows));
        let children = l.len() as f64 / n * gini(counts(&l)) + r.len() as f64 / n * gini(counts(&r));
        ensure(children < parent, || format!("split on f{feature} at {threshold}: {parent} -> {children}"))?;
        *count += 1;
        impurity_decreases(left, x, y, &l, count)?;
        impurity_decreases(right, x, y, &r, count)?;
    }
    Ok(())
}

pub fn suite_cart(data: &Dataset) -> Check {
    timed(60.0, || {
        let mut rng = rng::seeded(0xCA);
        let mut splits = 0;
        let mut cases: Vec<(Vec<Vec<f64>>, Vec<u8>, CartParams)> = Vec::new();
        let x: Vec<Vec<f64>> = data.features().iter_rows().map(<[f64]>::to_vec).collect();
        cases.push((
            x,
            data.labels().to_vec(),
            CartParams {
                features_per_split: FeaturesPerSplit::Sqrt,
                seed: 3,
                ..CartParams::default()
            },
        ));
        for _ in 0..30 {
            let n = rng.gen_range(2..80);
            let x: Vec<Vec<f64>> = (0..n).map(|_| (0..4).map(|_| f64::from(rng.gen_range(0..6))).collect()).collect();
            let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let params = CartParams {
                max_depth: [None, Some(3)][rng.gen_range(0..2)],
                min_samples_leaf: rng.gen_range(1..4),
                features_per_split: [FeaturesPerSplit::All, FeaturesPerSplit::Sqrt][rng.gen_range(0..2)],
                seed: rng.gen(),
            };
            cases.push((x, y, params));
        }
        for (x, y, params) in &cases {
            let tree = train_cart(&Matrix::from_rows(x).unwrap(), y, None, params).map_err(|e| e.to_string())?;
            let rows: Vec<usize> = (0..y.len()).collect();
            impurity_decreases(&tree.root, x, y, &rows, &mut splits)?;
        }
        Ok(format!("{splits} splits in {} trees all reduce Gini impurity", cases.len()))
    })
}

pub fn suite_svm_kkt(data: &Dataset) -> Check {
    timed(60.0, || {
        let (train, _) = split(data, &SplitSpec::new(0.3, 11, false).unwrap()).map_err(|e| e.to_string())?;
        let mut fixtures: Vec<(Dataset, SvmParams)> = vec![(train, SvmParams { seed: 5, ..SvmParams::default() })];
        for fx in svm_fixtures(30) {
            fixtures.push((dataset(&fx.x, fx.y.clone()), fx.params()));
        }
        let mut checked = 0;
        for (k, (d, params)) in fixtures.iter().enumerate() {
            let (model, info) = train_svm_traced(d, params).map_err(|e| e.to_string())?;
            ensure(model.converged && info.final_violation <= params.tolerance, || {
                format!("case {k}: not converged (violation {})", info.final_violation)
            })?;
            let tol = params.tolerance + 1e-9;
            let sum: f64 = info.alphas.iter().zip(d.labels()).map(|(a, &l)| if l == 1 { *a } else { -*a }).sum();
            ensure(sum.abs() <= 1e-9, || format!("case {k}: Σ α y = {sum}"))?;
            for (i, (&a, row)) in info.alphas.iter().zip(d.features().iter_rows()).enumerate() {
                ensure((0.0..=params.c).contains(&a), || format!("case {k}: α_{i} = {a} outside the box"))?;
                let yf = if d.labels()[i] == 1 { 1.0 } else { -1.0 } * model.score(row).unwrap();
                let ok = if a <= 0.0 {
                    yf >= 1.0 - tol
                } else if a >= params.c {
                    yf <= 1.0 + tol
                } else {
                    (yf - 1.0).abs() <= tol
                };
                ensure(ok, || format!("case {k}: row {i} with α = {a} has y·f = {yf}"))?;
            }
            for (t, w) in info.objective_trace.windows(2).enumerate() {
                ensure(w[1] >= w[0] - 1e-9, || format!("case {k}: dual objective fell at step {t}"))?;
            }
            checked += info.alphas.len();
        }
        Ok(format!("{} problems, {checked} multipliers satisfy KKT within the tolerance", fixtures.len()))
    })
}

pub fn suite_roc() -> Check {
    timed(60.0, || {
        let mut rng = rng::seeded(0x0C);
        for k in 0..300 {
            let (scores, truth) = random_scored(&mut rng);
            let c = roc_curve(&scores, &truth).map_err(|e| e.to_string())?;
            ensure(c.points.first() == Some(&RocPoint { fpr: 0.0, tpr: 0.0 }), || format!("fixture {k}: bad start"))?;
            ensure(c.points.last() == Some(&RocPoint { fpr: 1.0, tpr: 1.0 }), || format!("fixture {k}: bad end"))?;
            ensure(c.points.windows(2).all(|w| w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr), || {
                format!("fixture {k}: not monotone")
            })?;
            ensure(c.thresholds.windows(2).all(|w| w[1] < w[0]), || format!("fixture {k}: cutoffs not decreasing"))?;
        }
        Ok("300 curves start at (0,0), end at (1,1) and are monotone".into())
    })
}

pub fn suite_determinism(data: &Dataset) -> Check {
    timed(60.0, || {
        let cfg = BenchmarkConfig::default();
        let specs = ModelConfig::benchmark_defaults();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run_benchmark(data, &specs, &cfg)).map(|t| serde_json::to_string(&t).unwrap())
        };
        let a = run(1).map_err(|e| e.to_string())?;
        let b = run(4).map_err(|e| e.to_string())?;
        let c = run(4).map_err(|e| e.to_string())?;
        ensure(a == b && b == c, || "benchmark output changed between reruns".into())?;
        Ok(format!("3 reruns (1 and 4 threads) produced identical {}-byte reports", a.len()))
    })
}
