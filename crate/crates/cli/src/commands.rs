use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use attrition_core::dataset::{encode, load_csv, split_indices, Dataset, Schema, SplitSpec};
use attrition_core::eval::{evaluate, run_benchmark, SplitProvenance};
use attrition_core::stats;
use attrition_core::{svg, ModelConfig, ModelDocument};
use serde::Serialize;

use crate::config::RunConfig;

/// Writes through a sibling temporary file so a failed run never leaves a
/// truncated output behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| {
        let _ = std::fs::remove_file(&tmp);
        format!("cannot move output into {}", path.display())
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn load(cfg: &RunConfig) -> Result<Dataset> {
    let mut schema = Schema::from_file(&cfg.schema)?;
    if let Some(drop) = &cfg.drop {
        schema = Schema::new(schema.columns, drop.clone())?;
    }
    let table = load_csv(&cfg.data, &schema.columns)?;
    Ok(encode(&table, &schema.columns, &schema.drop, cfg.encoding)?)
}

pub fn describe(cfg: &RunConfig) -> Result<()> {
    let data = load(cfg)?;
    let summary = data.summary();
    let path = cfg.out_dir.join("describe.json");
    write_json(&path, &summary)?;
    println!(
        "{} rows, {} features, {} positive ({}), majority baseline {:.4}",
        summary.rows, summary.features, summary.positives, summary.label, summary.majority_baseline
    );
    println!("wrote {}", path.display());
    Ok(())
}

/// Pairwise views exported as figure data: (file stem, x column, y column).
const HEATMAPS: [(&str, &str, &str); 6] = [
    ("age_vs_joblevel", "Age", "JobLevel"),
    ("joblevel_vs_monthlyincome", "JobLevel", "MonthlyIncome"),
    ("jobsatisfaction_vs_attrition", "JobSatisfaction", "Attrition"),
    ("maritalstatus_vs_stockoptionlevel", "MaritalStatus", "StockOptionLevel"),
    ("monthlyincome_vs_attrition", "MonthlyIncome", "Attrition"),
    ("performancerating_vs_percentsalaryhike", "PerformanceRating", "PercentSalaryHike"),
];

const SCATTERS: [(&str, [&str; 3]); 2] = [
    ("monthlyincome_totalworkingyears_attrition", ["MonthlyIncome", "TotalWorkingYears", "Attrition"]),
    ("totalworkingyears_joblevel_attrition", ["TotalWorkingYears", "JobLevel", "Attrition"]),
];

/// Discrete numeric columns (survey scores, job level) get one bin per
/// value; the rest use the library default.
fn figure_bins(data: &Dataset, name: &str) -> Result<stats::BinSpec> {
    if let Some(j) = data.feature_index(name) {
        let mut values = data.features().column(j);
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() <= 10 {
            return Ok(stats::BinSpec::Categories);
        }
    }
    Ok(stats::default_bins(data, name)?)
}

pub fn correlate(cfg: &RunConfig) -> Result<()> {
    let data = load(cfg)?;
    let corr = stats::pearson_matrix(&data);
    write_atomic(&cfg.out_dir.join("correlation.csv"), corr.to_csv().as_bytes())?;
    write_atomic(&cfg.out_dir.join("correlation.svg"), svg::correlation_heatmap(&corr).as_bytes())?;

    // figure data is exported only when the dataset carries the columns
    let figures = cfg.out_dir.join("figures");
    let has = |name: &str| name == data.label_name() || data.feature_index(name).is_some();
    let mut written = 0;
    for (stem, x, y) in HEATMAPS {
        if !(has(x) && has(y)) {
            continue;
        }
        let h = stats::histogram2d(&data, x, y, &figure_bins(&data, x)?, &figure_bins(&data, y)?)?;
        write_atomic(&figures.join(format!("{stem}.csv")), h.to_csv().as_bytes())?;
        written += 1;
    }
    for (stem, [x, y, z]) in SCATTERS {
        if !(has(x) && has(y) && has(z)) {
            continue;
        }
        let s = stats::scatter3d(&data, x, y, z)?;
        write_atomic(&figures.join(format!("{stem}.csv")), s.to_csv().as_bytes())?;
        written += 1;
    }
    if has("PerformanceRating") && has("PercentSalaryHike") {
        let groups = stats::grouped_summary(&data, "PerformanceRating", "PercentSalaryHike")?;
        let mut out = String::from("PerformanceRating,count,min,q1,median,q3,max,mean\n");
        let mut freq = String::from("PerformanceRating,PercentSalaryHike,count\n");
        for g in &groups {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.4}\n",
                g.group, g.count, g.min, g.q1, g.median, g.q3, g.max, g.mean
            ));
            for (v, c) in &g.frequencies {
                freq.push_str(&format!("{},{v},{c}\n", g.group));
            }
        }
        write_atomic(&figures.join("salaryhike_by_rating_summary.csv"), out.as_bytes())?;
        write_atomic(&figures.join("salaryhike_by_rating_counts.csv"), freq.as_bytes())?;
        written += 2;
    }

    println!("strongest correlations:");
    for (a, b, r) in corr.strongest_pairs(5) {
        println!("  {a:<24} {b:<24} {r:+.4}");
    }
    println!("wrote correlation.csv, correlation.svg and {written} figure files to {}", cfg.out_dir.display());
    Ok(())
}

/// Train/test rows of the first benchmark iteration.
fn first_split(cfg: &RunConfig, data: &Dataset) -> Result<(Dataset, Dataset, SplitProvenance)> {
    let bench = cfg.benchmark();
    let seed = bench.split_seed(0);
    let idx = split_indices(data.labels(), &SplitSpec::new(cfg.test_fraction, seed, cfg.stratified)?)?;
    let prov = SplitProvenance {
        seed,
        test_fraction: cfg.test_fraction,
        stratified: cfg.stratified,
        n_train: idx.train.len(),
        n_test: idx.test.len(),
    };
    Ok((data.subset(&idx.train), data.subset(&idx.test), prov))
}

pub fn train(cfg: &RunConfig) -> Result<()> {
    let (index, model_cfg) = cfg.selected_model()?;
    let data = load(cfg)?;
    let (train, _, prov) = first_split(cfg, &data)?;
    let model_cfg = model_cfg.with_seed(cfg.benchmark().model_seed(0, index));
    let model = model_cfg.train(&train)?;
    let doc = ModelDocument::new(model, data.feature_names().to_vec());
    let path = cfg.model_path(model_cfg.name());
    write_atomic(&path, doc.to_json()?.as_bytes())?;
    println!(
        "trained {} on {} rows (split seed {}), wrote {}",
        model_cfg.name(),
        prov.n_train,
        prov.seed,
        path.display()
    );
    Ok(())
}

pub fn evaluate_cmd(cfg: &RunConfig) -> Result<()> {
    let (_, model_cfg) = cfg.selected_model()?;
    let path = cfg.model_path(model_cfg.name());
    let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read model {}", path.display()))?;
    let doc = ModelDocument::from_json(&text)?;
    let data = load(cfg)?;
    doc.check_compatible(&data)?;
    let (_, test, prov) = first_split(cfg, &data)?;
    let report = evaluate(&doc.model, doc.model.name(), &test, prov)?;
    let out = cfg.out_dir.join(format!("eval_{}.json", doc.model.name()));
    write_json(&out, &report)?;
    println!(
        "{}: accuracy {:.4}, AUC {:.4} on {} test rows (majority baseline {:.4})",
        report.model, report.accuracy, report.auc, prov.n_test, report.test_majority_baseline
    );
    println!("wrote {}", out.display());
    Ok(())
}

#[derive(Serialize)]
struct BenchmarkDocument<'a> {
    models: Vec<ModelConfig>,
    table: &'a attrition_core::BenchmarkTable,
}

pub fn benchmark(cfg: &RunConfig) -> Result<()> {
    let data = load(cfg)?;
    let models = cfg.model_configs();
    let table = run_benchmark(&data, &models, &cfg.benchmark())?;
    let csv = table.to_csv();
    write_atomic(&cfg.out_dir.join("benchmark.csv"), csv.as_bytes())?;
    write_atomic(&cfg.out_dir.join("benchmark_auc.csv"), table.auc_csv().as_bytes())?;
    write_json(&cfg.out_dir.join("benchmark.json"), &BenchmarkDocument { models, table: &table })?;
    print!("{csv}");
    for it in &table.iterations {
        for cell in &it.cells {
            if let Some(e) = &cell.error {
                eprintln!("iteration {} {}: {e}", it.iteration, cell.model);
            }
        }
    }
    println!("wrote benchmark.csv, benchmark_auc.csv and benchmark.json to {}", cfg.out_dir.display());
    Ok(())
}

pub fn roc(cfg: &RunConfig) -> Result<()> {
    let data = load(cfg)?;
    let mut bench = cfg.benchmark();
    bench.n_iterations = 1;
    let table = run_benchmark(&data, &cfg.model_configs(), &bench)?;
    let mut curves = Vec::new();
    for cell in &table.iterations[0].cells {
        match (&cell.report, &cell.error) {
            (Some(r), _) => {
                write_atomic(&cfg.out_dir.join(format!("roc_{}.csv", r.model)), r.roc.to_csv().as_bytes())?;
                println!("{:<14} AUC {:.4}", r.model, r.auc);
                curves.push((r.model.clone(), r.auc, &r.roc));
            }
            (None, Some(e)) => eprintln!("{}: {e}", cell.model),
            (None, None) => {}
        }
    }
    write_atomic(&cfg.out_dir.join("roc.svg"), svg::roc_overlay(&curves).as_bytes())?;
    println!("wrote ROC curves and roc.svg to {}", cfg.out_dir.display());
    Ok(())
}
