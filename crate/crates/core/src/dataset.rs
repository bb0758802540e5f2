//! Ingestion of the HR attrition table: CSV loading, schema-driven encoding
//! and seeded train/test splitting.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Dense row-major matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidDataset(format!(
                "matrix buffer has {} values, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    found: r.len(),
                    expected: cols,
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    /// Ordered levels; a cell encodes to its 0-based level index.
    Ordinal(Vec<String>),
    /// Unordered categories.
    Nominal(Vec<String>),
    /// Binary target as `[negative, positive]`.
    Label(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
}

impl ColumnSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Numeric,
        }
    }

    pub fn ordinal(name: impl Into<String>, levels: &[&str]) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Ordinal(levels.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn nominal(name: impl Into<String>, categories: &[&str]) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Nominal(categories.iter().map(|s| s.to_string()).collect()),
        }
    }

    /// Label column with the `No`/`Yes` convention.
    pub fn label(name: impl Into<String>) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Label(vec!["No".into(), "Yes".into()]),
        }
    }
}

/// Column declarations plus the list of columns removed before encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub columns: Vec<ColumnSpec>,
    pub drop: Vec<String>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnSpec>, drop: Vec<String>) -> Result<Self> {
        validate_columns(&columns)?;
        let names: HashSet<&str> = columns.iter().map(|c| c.name.as_str()).collect();
        for d in &drop {
            if !names.contains(d.as_str()) {
                return Err(Error::Schema(format!("drop list names undeclared column {d:?}")));
            }
        }
        let label = label_spec(&columns)?;
        if drop.contains(&label.name) {
            return Err(Error::Schema(format!("label column {:?} cannot be dropped", label.name)));
        }
        Ok(Schema { columns, drop })
    }

    /// Parses the plain-text schema format:
    ///
    /// ```text
    /// Age        numeric
    /// Travel     ordinal  Non-Travel|Travel_Rarely|Travel_Frequently
    /// Gender     nominal  Female|Male
    /// Attrition  label    No|Yes
    /// @drop EmployeeCount Over18
    /// ```
    ///
    /// `#` starts a comment line. Level and category lists are `|`-separated
    /// and may contain spaces.
    pub fn parse(text: &str) -> Result<Self> {
        let mut columns = Vec::new();
        let mut drop = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Schema(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("@drop") {
                drop.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            let (name, rest) = split_word(line);
            let (kind, rest) = split_word(rest);
            let list = || -> Result<Vec<String>> {
                if rest.is_empty() {
                    return Err(err("missing level/category list"));
                }
                Ok(rest.split('|').map(|s| s.trim().to_string()).collect())
            };
            let kind = match kind {
                "numeric" => {
                    if !rest.is_empty() {
                        return Err(err("numeric columns take no list"));
                    }
                    ColumnKind::Numeric
                }
                "ordinal" => ColumnKind::Ordinal(list()?),
                "nominal" => ColumnKind::Nominal(list()?),
                "label" if rest.is_empty() => ColumnKind::Label(vec!["No".into(), "Yes".into()]),
                "label" => ColumnKind::Label(list()?),
                "" => return Err(err("missing column kind")),
                other => return Err(err(&format!("unknown column kind {other:?}"))),
            };
            columns.push(ColumnSpec {
                name: name.to_string(),
                kind,
            });
        }
        Schema::new(columns, drop)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Schema::parse(&text)
    }

    pub fn label(&self) -> &ColumnSpec {
        label_spec(&self.columns).expect("validated on construction")
    }
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

fn label_spec(columns: &[ColumnSpec]) -> Result<&ColumnSpec> {
    let mut labels = columns
        .iter()
        .filter(|c| matches!(c.kind, ColumnKind::Label(_)));
    match (labels.next(), labels.next()) {
        (Some(l), None) => Ok(l),
        (None, _) => Err(Error::Schema("no label column declared".into())),
        (Some(_), Some(_)) => Err(Error::Schema("more than one label column declared".into())),
    }
}

fn validate_columns(columns: &[ColumnSpec]) -> Result<()> {
    let mut seen = HashSet::new();
    for c in columns {
        if !seen.insert(c.name.as_str()) {
            return Err(Error::Schema(format!("column {:?} declared twice", c.name)));
        }
        let list = match &c.kind {
            ColumnKind::Numeric => continue,
            ColumnKind::Ordinal(l) | ColumnKind::Nominal(l) => l,
            ColumnKind::Label(l) => {
                if l.len() != 2 {
                    return Err(Error::Schema(format!(
                        "label column {:?} needs exactly two values (negative|positive)",
                        c.name
                    )));
                }
                l
            }
        };
        if list.is_empty() {
            return Err(Error::Schema(format!("column {:?} has an empty list", c.name)));
        }
        let distinct: HashSet<&String> = list.iter().collect();
        if distinct.len() != list.len() {
            return Err(Error::Schema(format!("column {:?} lists a value twice", c.name)));
        }
    }
    label_spec(columns).map(|_| ())
}

/// Text cells as read from the CSV, in file column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    found: r.len(),
                    expected: columns.len(),
                });
            }
        }
        Ok(RawTable { columns, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Reads a headed CSV whose header must hold exactly the schema's column
/// names (in any order). Row numbers in errors count data rows from 1.
pub fn load_csv(path: impl AsRef<Path>, schema: &[ColumnSpec]) -> Result<RawTable> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    read_csv(bytes.as_slice(), schema)
}

pub fn read_csv<R: std::io::Read>(reader: R, schema: &[ColumnSpec]) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    check_header(&header, schema)?;

    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != header.len() {
            return Err(Error::RaggedRow {
                row: i + 1,
                found: rec.len(),
                expected: header.len(),
            });
        }
        rows.push(rec.iter().map(|c| c.trim().to_string()).collect());
    }
    RawTable::new(header, rows)
}

fn check_header(header: &[String], schema: &[ColumnSpec]) -> Result<()> {
    let have: HashSet<&str> = header.iter().map(String::as_str).collect();
    let want: HashSet<&str> = schema.iter().map(|c| c.name.as_str()).collect();
    if have.len() != header.len() {
        return Err(Error::HeaderMismatch("duplicate column in header".into()));
    }
    let mut missing: Vec<&str> = want.difference(&have).copied().collect();
    let mut extra: Vec<&str> = have.difference(&want).copied().collect();
    if missing.is_empty() && extra.is_empty() {
        return Ok(());
    }
    missing.sort_unstable();
    extra.sort_unstable();
    Err(Error::HeaderMismatch(format!(
        "missing from file: {missing:?}; not in schema: {extra:?}"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingPolicy {
    /// One column per nominal feature holding the category's list index.
    #[default]
    IntegerCodes,
    /// One 0/1 column per category, named `Column=Category`.
    OneHot,
}

impl fmt::Display for EncodingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingPolicy::IntegerCodes => "integer",
            EncodingPolicy::OneHot => "one_hot",
        })
    }
}

impl FromStr for EncodingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integer" | "integer_codes" => Ok(EncodingPolicy::IntegerCodes),
            "one_hot" | "onehot" | "one-hot" => Ok(EncodingPolicy::OneHot),
            other => Err(Error::InvalidParam(format!("unknown encoding policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub dropped: Vec<String>,
    pub encoding: EncodingPolicy,
}

/// Encoded feature matrix with binary labels (1 = positive label value).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    feature_names: Vec<String>,
    /// Category or level names for features that came from a categorical
    /// column under integer coding; `None` for numeric and one-hot columns.
    feature_levels: Vec<Option<Vec<String>>>,
    labels: Vec<u8>,
    label_name: String,
    provenance: Provenance,
}

impl Dataset {
    /// Builds a dataset directly from numbers, e.g. for fixtures.
    pub fn new(features: Matrix, feature_names: Vec<String>, labels: Vec<u8>) -> Result<Self> {
        let d = features.cols();
        Dataset::with_metadata(
            features,
            feature_names,
            vec![None; d],
            labels,
            "label".into(),
            Provenance {
                dropped: Vec::new(),
                encoding: EncodingPolicy::IntegerCodes,
            },
        )
    }

    fn with_metadata(
        features: Matrix,
        feature_names: Vec<String>,
        feature_levels: Vec<Option<Vec<String>>>,
        labels: Vec<u8>,
        label_name: String,
        provenance: Provenance,
    ) -> Result<Self> {
        let (n, d) = (features.rows(), features.cols());
        if n < 2 || d < 1 {
            return Err(Error::InvalidDataset(format!("need n >= 2 and d >= 1, got {n}x{d}")));
        }
        if feature_names.len() != d || feature_levels.len() != d {
            return Err(Error::InvalidDataset("feature metadata length differs from d".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidDataset(format!("{} labels for {n} rows", labels.len())));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::InvalidDataset("labels must be 0 or 1".into()));
        }
        if let Some(pos) = features.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {}",
                pos / d + 1,
                feature_names[pos % d]
            )));
        }
        Ok(Dataset {
            features,
            feature_names,
            feature_levels,
            labels,
            label_name,
            provenance,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_levels(&self, j: usize) -> Option<&[String]> {
        self.feature_levels[j].as_deref()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    /// Rows with the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            feature_names: self.feature_names.clone(),
            feature_levels: self.feature_levels.clone(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            label_name: self.label_name.clone(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn summary(&self) -> DatasetSummary {
        let n = self.n_rows();
        let pos = self.positives();
        DatasetSummary {
            rows: n,
            features: self.n_features(),
            feature_names: self.feature_names.clone(),
            label: self.label_name.clone(),
            positives: pos,
            negatives: n - pos,
            majority_baseline: majority_baseline(&self.labels),
            dropped: self.provenance.dropped.clone(),
            encoding: self.provenance.encoding,
        }
    }
}

/// Accuracy of always predicting the more frequent class (ties predict 0).
pub fn majority_baseline(labels: &[u8]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let pos = labels.iter().filter(|&&y| y == 1).count();
    pos.max(labels.len() - pos) as f64 / labels.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub rows: usize,
    pub features: usize,
    pub feature_names: Vec<String>,
    pub label: String,
    pub positives: usize,
    pub negatives: usize,
    pub majority_baseline: f64,
    pub dropped: Vec<String>,
    pub encoding: EncodingPolicy,
}

/// Encodes a raw table into numbers. Output columns follow schema order,
/// skipping the label and dropped columns.
pub fn encode(
    table: &RawTable,
    schema: &[ColumnSpec],
    drop: &[String],
    policy: EncodingPolicy,
) -> Result<Dataset> {
    validate_columns(schema)?;
    for name in schema.iter().map(|c| &c.name).chain(drop) {
        if table.column_index(name).is_none() {
            return Err(Error::UnknownColumn(name.clone()));
        }
    }
    let label = label_spec(schema)?;
    if drop.contains(&label.name) {
        return Err(Error::Schema(format!("label column {:?} cannot be dropped", label.name)));
    }
    let dropped: HashSet<&str> = drop.iter().map(String::as_str).collect();

    let label_col = table.column_index(&label.name).expect("checked above");
    let ColumnKind::Label(values) = &label.kind else {
        unreachable!()
    };
    let labels = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| match values.iter().position(|v| *v == r[label_col]) {
            Some(k) => Ok(k as u8),
            None => Err(Error::UnknownCategory {
                row: i + 1,
                column: label.name.clone(),
                value: r[label_col].clone(),
            }),
        })
        .collect::<Result<Vec<u8>>>()?;

    let mut names = Vec::new();
    let mut levels = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for spec in schema {
        if dropped.contains(spec.name.as_str()) || matches!(spec.kind, ColumnKind::Label(_)) {
            continue;
        }
        let col = table.column_index(&spec.name).expect("checked above");
        let cells = table.rows.iter().map(|r| r[col].as_str());
        match &spec.kind {
            ColumnKind::Numeric => {
                names.push(spec.name.clone());
                levels.push(None);
                columns.push(parse_numeric(&spec.name, cells)?);
            }
            ColumnKind::Ordinal(list) => {
                names.push(spec.name.clone());
                levels.push(Some(list.clone()));
                columns.push(category_codes(&spec.name, list, cells)?);
            }
            ColumnKind::Nominal(list) => {
                let codes = category_codes(&spec.name, list, cells)?;
                match policy {
                    EncodingPolicy::IntegerCodes => {
                        names.push(spec.name.clone());
                        levels.push(Some(list.clone()));
                        columns.push(codes);
                    }
                    EncodingPolicy::OneHot => {
                        for (k, cat) in list.iter().enumerate() {
                            names.push(format!("{}={}", spec.name, cat));
                            levels.push(None);
                            columns.push(
                                codes.iter().map(|&c| f64::from(u8::from(c as usize == k))).collect(),
                            );
                        }
                    }
                }
            }
            ColumnKind::Label(_) => unreachable!(),
        }
    }

    let n = table.n_rows();
    let d = columns.len();
    let mut data = vec![0.0; n * d];
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            data[i * d + j] = v;
        }
    }
    Dataset::with_metadata(
        Matrix::new(n, d, data)?,
        names,
        levels,
        labels,
        label.name.clone(),
        Provenance {
            dropped: drop.to_vec(),
            encoding: policy,
        },
    )
}

fn parse_numeric<'a>(column: &str, cells: impl Iterator<Item = &'a str>) -> Result<Vec<f64>> {
    cells
        .enumerate()
        .map(|(i, c)| match c.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::ParseNumber {
                row: i + 1,
                column: column.to_string(),
                value: c.to_string(),
            }),
        })
        .collect()
}

fn category_codes<'a>(
    column: &str,
    list: &[String],
    cells: impl Iterator<Item = &'a str>,
) -> Result<Vec<f64>> {
    let index: HashMap<&str, usize> = list.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    cells
        .enumerate()
        .map(|(i, c)| {
            index.get(c).map(|&k| k as f64).ok_or_else(|| Error::UnknownCategory {
                row: i + 1,
                column: column.to_string(),
                value: c.to_string(),
            })
        })
        .collect()
}

/// Loads and encodes in one step using the schema's own drop list.
pub fn load_dataset(
    csv_path: impl AsRef<Path>,
    schema: &Schema,
    policy: EncodingPolicy,
) -> Result<Dataset> {
    let table = load_csv(csv_path, &schema.columns)?;
    encode(&table, &schema.columns, &schema.drop, policy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(test_fraction: f64, seed: u64, stratified: bool) -> Result<Self> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::InvalidSplit(format!(
                "test_fraction must lie in (0, 1), got {test_fraction}"
            )));
        }
        Ok(SplitSpec {
            test_fraction,
            seed,
            stratified,
        })
    }

    /// Number of test rows for a dataset of `n` rows.
    pub fn test_size(&self, n: usize) -> usize {
        (n as f64 * self.test_fraction).round() as usize
    }
}

/// Sorted row indices of both sides of a split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn split_indices(labels: &[u8], spec: &SplitSpec) -> Result<SplitIndices> {
    let spec = SplitSpec::new(spec.test_fraction, spec.seed, spec.stratified)?;
    let n = labels.len();
    let n_test = spec.test_size(n);
    if (n as f64 * spec.test_fraction).floor() < 1.0 || n_test >= n {
        return Err(Error::InvalidSplit(format!(
            "{n} rows at test_fraction {} leaves an empty side",
            spec.test_fraction
        )));
    }
    let mut rng = rng::seeded(spec.seed);
    let mut test = if spec.stratified {
        let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, &y) in labels.iter().enumerate() {
            by_class[usize::from(y)].push(i);
        }
        let quotas = stratified_quotas([by_class[0].len(), by_class[1].len()], n_test);
        let mut test = Vec::with_capacity(n_test);
        for (members, quota) in by_class.iter_mut().zip(quotas) {
            members.shuffle(&mut rng);
            test.extend_from_slice(&members[..quota]);
        }
        test
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        order.truncate(n_test);
        order
    };
    test.sort_unstable();
    let mut in_test = vec![false; n];
    for &i in &test {
        in_test[i] = true;
    }
    let train = (0..n).filter(|&i| !in_test[i]).collect();
    Ok(SplitIndices { train, test })
}

/// Largest-remainder allocation of `total` test slots proportional to class
/// sizes; remainder ties go to the lower class index.
fn stratified_quotas(sizes: [usize; 2], total: usize) -> [usize; 2] {
    let n: usize = sizes.iter().sum();
    let exact = sizes.map(|s| s as f64 * total as f64 / n as f64);
    let mut quota = exact.map(|e| e.floor() as usize);
    let mut left = total - quota.iter().sum::<usize>();
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| {
        let (fa, fb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &c in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if quota[c] < sizes[c] {
            quota[c] += 1;
            left -= 1;
        }
    }
    quota
}

pub fn split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let idx = split_indices(data.labels(), spec)?;
    Ok((data.subset(&idx.train), data.subset(&idx.test)))
}
