//! Correlation analytics and figure data: the Pearson matrix, 2D count
//! grids, 3D point clouds and per-group distribution summaries.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Sample Pearson coefficient by the two-pass mean-centered formula.
/// Returns `None` when either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson inputs differ in length");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    feature_names: Vec<String>,
    /// Row-major d×d; degenerate entries hold 0.
    values: Vec<f64>,
    degenerate: Vec<bool>,
}

impl CorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Coefficient for the pair, or 0 where it is undefined.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim() + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let k = i * self.dim() + j;
        (!self.degenerate[k]).then_some(self.values[k])
    }

    pub fn is_degenerate(&self, i: usize, j: usize) -> bool {
        self.degenerate[i * self.dim() + j]
    }

    pub fn by_name(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.feature_names.iter().position(|n| n == a)?;
        let j = self.feature_names.iter().position(|n| n == b)?;
        self.get(i, j)
    }

    /// Off-diagonal pairs ordered by decreasing |r|.
    pub fn strongest_pairs(&self, limit: usize) -> Vec<(String, String, f64)> {
        let d = self.dim();
        let mut pairs: Vec<(usize, usize, f64)> = (0..d)
            .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
            .filter_map(|(i, j)| self.get(i, j).map(|r| (i, j, r)))
            .collect();
        pairs.sort_by(|a, b| b.2.abs().total_cmp(&a.2.abs()).then((a.0, a.1).cmp(&(b.0, b.1))));
        pairs
            .into_iter()
            .take(limit)
            .map(|(i, j, r)| (self.feature_names[i].clone(), self.feature_names[j].clone(), r))
            .collect()
    }

    /// Square grid with a header row and column of feature names.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature");
        for name in &self.feature_names {
            out.push(',');
            out.push_str(&csv_field(name));
        }
        out.push('\n');
        for (i, name) in self.feature_names.iter().enumerate() {
            out.push_str(&csv_field(name));
            for j in 0..self.dim() {
                write!(out, ",{:.6}", self.value(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn pearson_matrix(data: &Dataset) -> CorrelationMatrix {
    let d = data.n_features();
    let columns: Vec<Vec<f64>> = (0..d).map(|j| data.features().column(j)).collect();
    let mut values = vec![0.0; d * d];
    let mut degenerate = vec![false; d * d];
    for i in 0..d {
        for j in i..d {
            let r = if i == j {
                pearson(&columns[i], &columns[i]).map(|_| 1.0)
            } else {
                pearson(&columns[i], &columns[j])
            };
            for k in [i * d + j, j * d + i] {
                match r {
                    Some(r) => values[k] = r,
                    None => degenerate[k] = true,
                }
            }
        }
    }
    CorrelationMatrix {
        feature_names: data.feature_names().to_vec(),
        values,
        degenerate,
    }
}

/// How one histogram axis is binned.
#[derive(Debug, Clone, PartialEq)]
pub enum BinSpec {
    /// `k` equal-width bins spanning the observed range.
    EqualWidth(usize),
    /// Explicit increasing edges; bin `i` is `[e_i, e_{i+1})`, the last bin
    /// is closed.
    Edges(Vec<f64>),
    /// One bin per category (declared levels, or the distinct values).
    Categories,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Axis {
    Edges { name: String, edges: Vec<f64> },
    Categories {
        name: String,
        labels: Vec<String>,
        values: Vec<f64>,
    },
}

impl Axis {
    pub fn name(&self) -> &str {
        match self {
            Axis::Edges { name, .. } | Axis::Categories { name, .. } => name,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Edges { edges, .. } => edges.len() - 1,
            Axis::Categories { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bin for `v`; values outside the axis clamp to the nearest edge bin.
    pub fn bin(&self, v: f64) -> usize {
        match self {
            Axis::Edges { edges, .. } => {
                let last = edges.len() - 2;
                // first edge strictly greater than v, minus one
                let k = edges.partition_point(|&e| e <= v);
                k.saturating_sub(1).min(last)
            }
            Axis::Categories { values, .. } => {
                let k = values.partition_point(|&c| c < v);
                if k == values.len() || (k > 0 && (v - values[k - 1]) < (values[k] - v)) {
                    k - 1
                } else {
                    k
                }
            }
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            Axis::Edges { edges, .. } => edges
                .windows(2)
                .map(|w| format!("[{}, {})", fmt_num(w[0]), fmt_num(w[1])))
                .collect(),
            Axis::Categories { labels, .. } => labels.clone(),
        }
    }

    /// Range `[lo, hi)` covered by an edge bin; `None` for category axes.
    pub fn bin_range(&self, k: usize) -> Option<(f64, f64)> {
        match self {
            Axis::Edges { edges, .. } => Some((edges[k], edges[k + 1])),
            Axis::Categories { .. } => None,
        }
    }

    /// Numeric value of a category bin; `None` for edge axes.
    pub fn category_value(&self, k: usize) -> Option<f64> {
        match self {
            Axis::Categories { values, .. } => Some(values[k]),
            Axis::Edges { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram2D {
    pub x_axis: Axis,
    pub y_axis: Axis,
    /// `counts[i][j]`: rows in x bin `i` and y bin `j`.
    pub counts: Vec<Vec<u64>>,
}

impl Histogram2D {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// First cell (row-major) holding the maximum count.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0, 0);
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > best.2 {
                    best = (i, j, c);
                }
            }
        }
        (best.0, best.1)
    }

    /// Grid with x bins as rows and y bins as columns.
    pub fn to_csv(&self) -> String {
        let mut out = csv_field(&format!("{} \\ {}", self.x_axis.name(), self.y_axis.name()));
        for l in self.y_axis.labels() {
            out.push(',');
            out.push_str(&csv_field(&l));
        }
        out.push('\n');
        for (label, row) in self.x_axis.labels().iter().zip(&self.counts) {
            out.push_str(&csv_field(label));
            for c in row {
                write!(out, ",{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

struct Column<'a> {
    name: &'a str,
    values: Vec<f64>,
    levels: Option<Vec<String>>,
    categorical: bool,
}

/// Resolves a feature name, or the label column's name.
fn column<'a>(data: &'a Dataset, name: &'a str) -> Result<Column<'a>> {
    if let Some(j) = data.feature_index(name) {
        let levels = data.feature_levels(j).map(<[String]>::to_vec);
        return Ok(Column {
            name,
            values: data.features().column(j),
            categorical: levels.is_some(),
            levels,
        });
    }
    if name == data.label_name() {
        return Ok(Column {
            name,
            values: data.labels().iter().map(|&y| f64::from(y)).collect(),
            levels: None,
            categorical: true,
        });
    }
    Err(Error::UnknownColumn(name.to_string()))
}

/// Bin spec used when none is given: one bin per category for categorical
/// columns and the label, ten equal-width bins otherwise.
pub fn default_bins(data: &Dataset, name: &str) -> Result<BinSpec> {
    let c = column(data, name)?;
    Ok(if c.categorical {
        BinSpec::Categories
    } else {
        BinSpec::EqualWidth(10)
    })
}

fn build_axis(col: &Column<'_>, spec: &BinSpec) -> Result<Axis> {
    let name = col.name.to_string();
    match spec {
        BinSpec::EqualWidth(0) => Err(Error::InvalidParam("bin count must be positive".into())),
        BinSpec::EqualWidth(k) => {
            let lo = col.values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
            let width = (hi - lo) / *k as f64;
            let mut edges: Vec<f64> = (0..*k).map(|i| lo + width * i as f64).collect();
            edges.push(hi);
            Ok(Axis::Edges { name, edges })
        }
        BinSpec::Edges(edges) => {
            if edges.len() < 2 || edges.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
                return Err(Error::InvalidParam(format!(
                    "bin edges for {name} must be at least two strictly increasing values"
                )));
            }
            Ok(Axis::Edges {
                name,
                edges: edges.clone(),
            })
        }
        BinSpec::Categories => {
            let (labels, values) = match &col.levels {
                Some(levels) => (levels.clone(), (0..levels.len()).map(|k| k as f64).collect()),
                None => {
                    let mut values = col.values.clone();
                    values.sort_by(f64::total_cmp);
                    values.dedup();
                    (values.iter().map(|&v| fmt_num(v)).collect(), values)
                }
            };
            Ok(Axis::Categories {
                name,
                labels,
                values,
            })
        }
    }
}

pub fn histogram2d(
    data: &Dataset,
    x: &str,
    y: &str,
    x_bins: &BinSpec,
    y_bins: &BinSpec,
) -> Result<Histogram2D> {
    let xc = column(data, x)?;
    let yc = column(data, y)?;
    let x_axis = build_axis(&xc, x_bins)?;
    let y_axis = build_axis(&yc, y_bins)?;
    let mut counts = vec![vec![0u64; y_axis.len()]; x_axis.len()];
    for (&a, &b) in xc.values.iter().zip(&yc.values) {
        counts[x_axis.bin(a)][y_axis.bin(b)] += 1;
    }
    Ok(Histogram2D {
        x_axis,
        y_axis,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scatter3D {
    pub axis_names: [String; 3],
    pub points: Vec<[f64; 3]>,
    /// Attrition label of each point's row.
    pub point_class: Vec<u8>,
}

impl Scatter3D {
    pub fn to_csv(&self) -> String {
        let [a, b, c] = &self.axis_names;
        let mut out = format!("{},{},{},class\n", csv_field(a), csv_field(b), csv_field(c));
        for (p, y) in self.points.iter().zip(&self.point_class) {
            writeln!(out, "{},{},{},{y}", fmt_num(p[0]), fmt_num(p[1]), fmt_num(p[2])).unwrap();
        }
        out
    }
}

pub fn scatter3d(data: &Dataset, x: &str, y: &str, z: &str) -> Result<Scatter3D> {
    let (xc, yc, zc) = (column(data, x)?, column(data, y)?, column(data, z)?);
    let points = (0..data.n_rows())
        .map(|i| [xc.values[i], yc.values[i], zc.values[i]])
        .collect();
    Ok(Scatter3D {
        axis_names: [x.to_string(), y.to_string(), z.to_string()],
        points,
        point_class: data.labels().to_vec(),
    })
}

/// Distribution of one column within a group of rows sharing a value of
/// another column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group: f64,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    /// Sorted distinct values with their counts.
    pub frequencies: Vec<(f64, usize)>,
}

impl GroupSummary {
    /// Share of the group's rows with a value in `[lo, hi]`.
    pub fn fraction_within(&self, lo: f64, hi: f64) -> f64 {
        let inside: usize = self
            .frequencies
            .iter()
            .filter(|(v, _)| (lo..=hi).contains(v))
            .map(|(_, c)| c)
            .sum();
        inside as f64 / self.count as f64
    }
}

/// Summaries of `value` for each distinct value of `by`, in increasing
/// group order. Quantiles interpolate linearly between order statistics.
pub fn grouped_summary(data: &Dataset, by: &str, value: &str) -> Result<Vec<GroupSummary>> {
    let g = column(data, by)?;
    let v = column(data, value)?;
    let mut groups: Vec<f64> = g.values.clone();
    groups.sort_by(f64::total_cmp);
    groups.dedup();
    Ok(groups
        .into_iter()
        .map(|group| {
            let mut vals: Vec<f64> = g
                .values
                .iter()
                .zip(&v.values)
                .filter(|(&a, _)| a == group)
                .map(|(_, &b)| b)
                .collect();
            vals.sort_by(f64::total_cmp);
            let mut frequencies: Vec<(f64, usize)> = Vec::new();
            for &x in &vals {
                match frequencies.last_mut() {
                    Some((last, c)) if *last == x => *c += 1,
                    _ => frequencies.push((x, 1)),
                }
            }
            GroupSummary {
                group,
                count: vals.len(),
                min: vals[0],
                q1: quantile(&vals, 0.25),
                median: quantile(&vals, 0.5),
                q3: quantile(&vals, 0.75),
                max: vals[vals.len() - 1],
                mean: vals.iter().sum::<f64>() / vals.len() as f64,
                frequencies,
            }
        })
        .collect())
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub(crate) fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
