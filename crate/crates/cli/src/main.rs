//! `attrition`: describe, correlate, train, evaluate, benchmark and roc over
//! the employee-attrition dataset from one configuration file.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, RunConfig, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "attrition", version, about = "Employee-attrition benchmark pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Dataset summary as JSON
    Describe,
    /// Correlation matrix (CSV + SVG) and figure data
    Correlate,
    /// Train one model on the first split and save it
    Train,
    /// Evaluate a saved model on the first split's test rows
    Evaluate,
    /// Accuracy/AUC table over repeated random splits
    Benchmark,
    /// First-iteration ROC curves and an overlay plot
    Roc,
}

#[derive(Args)]
struct Opts {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override any configuration key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[arg(long, global = true)]
    data: Option<String>,
    #[arg(long, global = true)]
    schema: Option<String>,
    /// Output directory (also settable through ATTRITION_OUT_DIR)
    #[arg(long, global = true)]
    out_dir: Option<String>,
    /// Master seed for every split and model
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    iterations: Option<String>,
    /// adaboost, svm or random_forest (train/evaluate)
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true)]
    model_file: Option<String>,
}

/// Defaults, then the config file, then the environment, then flags.
fn resolve(opts: &Opts) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &opts.config {
        cfg.apply_file(path)?;
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            cfg.set("out_dir", &dir, None)?;
        }
    }
    for pair in &opts.set {
        cfg.apply_pair(pair)?;
    }
    let named = [
        ("data", &opts.data),
        ("schema", &opts.schema),
        ("out_dir", &opts.out_dir),
        ("seed", &opts.seed),
        ("iterations", &opts.iterations),
        ("model", &opts.model),
        ("model_file", &opts.model_file),
    ];
    for (key, value) in named {
        if let Some(v) = value {
            cfg.set(key, v, None)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cfg = match resolve(&cli.opts) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error [config]: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Describe => commands::describe(&cfg),
        Command::Correlate => commands::correlate(&cfg),
        Command::Train => commands::train(&cfg),
        Command::Evaluate => commands::evaluate_cmd(&cfg),
        Command::Benchmark => commands::benchmark(&cfg),
        Command::Roc => commands::roc(&cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<ConfigError>().is_some() => {
            eprintln!("error [config]: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            match e.downcast_ref::<attrition_core::Error>() {
                Some(core) => eprintln!("error [{}]: {core}", core.module()),
                None => eprintln!("error [cli]: {e:#}"),
            }
            ExitCode::FAILURE
        }
    }
}
