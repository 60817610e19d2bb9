//! Command-line driver: synthetic data generation, cross-validated
//! comparison runs, metric reports over prediction files, and the algebraic
//! baseline formulas.
//!
//! Exit codes: 0 success, 1 partial model failure in `run`, 2 usage or
//! validation errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use weirflow_core::data::{generate_synthetic, write_csv, SyntheticMode};
use weirflow_core::experiment::{
    emit_reports, parse_config, run_experiment, DataSource, ExperimentConfig, HybridStrategy,
    ModelKind,
};
use weirflow_core::hydraulics;
use weirflow_core::metrics::{compute_report, log_report, MetricKind};
use weirflow_core::{Error, Result};

/// Fallback seed when neither flags, config, nor WEIRFLOW_SEED provide one.
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "weirflow", version, about = "Discharge-coefficient regression pipeline for streamlined weirs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic dataset CSV
    Generate {
        /// Number of samples
        #[arg(long)]
        n: usize,
        /// Target mode: bagheri | linear
        #[arg(long, default_value = "bagheri")]
        mode: String,
        /// Standard deviation of additive Gaussian noise on Cd
        #[arg(long = "noise-sd", default_value_t = 0.0)]
        noise_sd: f64,
        /// RNG seed (falls back to WEIRFLOW_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the cross-validated model comparison
    Run {
        /// TOML config file; exclusive with the inline flags
        #[arg(long)]
        config: Option<PathBuf>,
        /// Input dataset CSV
        #[arg(long)]
        data: Option<PathBuf>,
        /// Comma-separated model tokens (lr,rf,svm,knn,dt,lstm,cnn,gru,
        /// lstm-gru,cnn-lstm,cnn-gru,lr-cgru)
        #[arg(long, value_delimiter = ',')]
        models: Vec<String>,
        /// Fold count
        #[arg(long, default_value_t = 5)]
        folds: usize,
        /// RNG seed (falls back to WEIRFLOW_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for the report files
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the 200-epoch default for deep models
        #[arg(long)]
        epochs: Option<usize>,
        /// Hybrid strategy: average | stacking
        #[arg(long, default_value = "average")]
        hybrid: String,
        /// Pin the single-threaded deterministic mode
        #[arg(long = "single-thread")]
        single_thread: bool,
        /// Also emit in-sample (full-data fit) YY files
        #[arg(long = "emit-insample")]
        emit_insample: bool,
    },
    /// Compute the eight error metrics over two columns of a CSV file
    Metrics {
        /// CSV file with a header row
        #[arg(long)]
        file: PathBuf,
        /// Column holding the true values
        #[arg(long = "true-col")]
        true_col: String,
        /// Column holding the predictions
        #[arg(long = "pred-col")]
        pred_col: String,
    },
    /// Evaluate a hydraulic baseline formula
    Baseline {
        /// Formula: eq1 | bagheri | carollo | stage
        #[arg(long)]
        eq: String,
        /// Comma-separated key=value parameters
        #[arg(long)]
        params: String,
    },
}

fn env_seed() -> Option<u64> {
    std::env::var("WEIRFLOW_SEED").ok()?.trim().parse().ok()
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(env_seed).unwrap_or(DEFAULT_SEED)
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes instead of panicking mid-print
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            n,
            mode,
            noise_sd,
            seed,
            out,
        } => {
            let mode = SyntheticMode::parse(&mode)?;
            let seed = resolve_seed(seed);
            println!(
                "generate: n={n} mode={} noise_sd={noise_sd} seed={seed} out={}",
                mode.name(),
                out.display()
            );
            let ds = generate_synthetic(n, mode, noise_sd, seed)?;
            write_csv(&ds, &out)?;
            println!("wrote {} samples to {}", ds.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            config,
            data,
            models,
            folds,
            seed,
            out,
            epochs,
            hybrid,
            single_thread,
            emit_insample,
        } => {
            let config = match config {
                Some(path) => {
                    if data.is_some() || !models.is_empty() {
                        return Err(Error::Config(
                            "--config is exclusive with --data/--models".into(),
                        ));
                    }
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                    let mut parsed = parse_config(&text, resolve_seed(seed))?;
                    if let Some(dir) = out {
                        parsed.out_dir = Some(dir);
                    }
                    if single_thread {
                        parsed.single_thread = true;
                    }
                    parsed
                }
                None => {
                    let data = data
                        .ok_or_else(|| Error::Config("run needs --config or --data".into()))?;
                    if models.is_empty() {
                        return Err(Error::Config("run needs --models".into()));
                    }
                    let models = models
                        .iter()
                        .map(|t| ModelKind::parse(t))
                        .collect::<Result<Vec<_>>>()?;
                    ExperimentConfig {
                        seed: resolve_seed(seed),
                        folds,
                        models,
                        hybrid_strategy: HybridStrategy::parse(&hybrid)?,
                        epochs,
                        data: DataSource::Csv(data),
                        out_dir: out,
                        single_thread,
                        emit_insample,
                    }
                }
            };
            run_and_report(config)
        }
        Command::Metrics {
            file,
            true_col,
            pred_col,
        } => {
            let (y, yhat) = read_columns(&file, &true_col, &pred_col)?;
            let report = compute_report(&y, &yhat)?;
            let logs = log_report(&report);
            println!("metric,value,log10");
            for (kind, log) in MetricKind::ALL.iter().zip(logs) {
                println!("{},{},{}", kind.name(), report.value(*kind), log);
            }
            println!("clamped_count,{},", report.clamped_count);
            Ok(ExitCode::SUCCESS)
        }
        Command::Baseline { eq, params } => {
            let value = evaluate_baseline(&eq, &params)?;
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_and_report(config: ExperimentConfig) -> Result<ExitCode> {
    config.validate()?;
    // effective config, defaults included, before any work
    println!("run configuration:");
    println!("  seed            = {}", config.seed);
    println!("  folds           = {}", config.folds);
    println!(
        "  models          = {}",
        config
            .models
            .iter()
            .map(|m| m.token())
            .collect::<Vec<_>>()
            .join(",")
    );
    println!("  hybrid_strategy = {}", config.hybrid_strategy.token());
    println!(
        "  epochs          = {}",
        config
            .epochs
            .map_or("200 (default)".to_string(), |e| e.to_string())
    );
    match &config.data {
        DataSource::Csv(path) => println!("  data            = csv {}", path.display()),
        DataSource::Synthetic { n, mode, noise_sd } => println!(
            "  data            = synthetic n={n} mode={} noise_sd={noise_sd}",
            mode.name()
        ),
    }
    println!(
        "  out_dir         = {}",
        config
            .out_dir
            .as_ref()
            .map_or("(none)".to_string(), |p| p.display().to_string())
    );
    println!("  single_thread   = {}", config.single_thread);
    println!("  emit_insample   = {}", config.emit_insample);

    let dataset = config.load_dataset()?;
    println!("dataset: {} samples", dataset.len());
    let result = run_experiment(&config, &dataset)?;

    println!();
    println!("pooled out-of-fold metrics:");
    println!("model        seconds      mse           rmse          mae           mape%");
    for run in &result.models {
        println!(
            "{:<12} {:<12.6} {:<13.6e} {:<13.6e} {:<13.6e} {:<10.4}",
            run.model.token(),
            run.train_seconds,
            run.pooled.mse,
            run.pooled.rmse,
            run.pooled.mae,
            run.pooled.mape
        );
    }
    println!();
    println!("across-fold metric means:");
    println!("model        mse           rmse          mae           mape%");
    for run in &result.models {
        let means = run.fold_means();
        println!(
            "{:<12} {:<13.6e} {:<13.6e} {:<13.6e} {:<10.4}",
            run.model.token(),
            means[0],
            means[1],
            means[2],
            means[3]
        );
    }
    for (model, detail) in &result.failures {
        eprintln!("FAILED {model}: {detail}");
    }

    if let Some(dir) = &config.out_dir {
        let written = emit_reports(&result, dir)?;
        println!();
        println!("wrote {} files to {}", written.len(), dir.display());
    }

    if result.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn read_columns(file: &PathBuf, true_col: &str, pred_col: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(file)
        .map_err(|e| Error::Config(format!("{}: {e}", file.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(e.to_string()))?
        .clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("no column '{name}' in {}", file.display())))
    };
    let ti = find(true_col)?;
    let pi = find(pred_col)?;
    let mut y = Vec::new();
    let mut yhat = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            row: row + 1,
            detail: e.to_string(),
        })?;
        let parse = |idx: usize| -> Result<f64> {
            record
                .get(idx)
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::Parse {
                    row: row + 1,
                    detail: format!("bad numeric cell in column {idx}"),
                })
        };
        y.push(parse(ti)?);
        yhat.push(parse(pi)?);
    }
    Ok((y, yhat))
}

fn parse_params(params: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for pair in params.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Argument(format!("expected key=value, got '{pair}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("bad numeric value in '{pair}'")))?;
        map.insert(key.trim().to_ascii_lowercase(), value);
    }
    Ok(map)
}

fn evaluate_baseline(eq: &str, params: &str) -> Result<f64> {
    let map = parse_params(params)?;
    let get = |key: &str| -> Result<f64> {
        map.get(key)
            .copied()
            .ok_or_else(|| Error::Argument(format!("missing parameter '{key}'")))
    };
    let g = map.get("g").copied().unwrap_or(hydraulics::G_DEFAULT);
    match eq.to_ascii_lowercase().as_str() {
        // head-discharge relation: cd= computes Q; q= inverts to Cd
        "eq1" => {
            let b = get("b")?;
            let h1 = get("h1")?;
            if let Some(&cd) = map.get("cd") {
                hydraulics::discharge_from_cd(cd, b, h1, g)
            } else if let Some(&q) = map.get("q") {
                hydraulics::cd_from_discharge(q, b, h1, g)
            } else {
                Err(Error::Argument("eq1 needs either cd= or q=".into()))
            }
        }
        "bagheri" => hydraulics::cd_bagheri(get("lambda")?, get("h1")?, get("l")?, get("w")?),
        "carollo" => hydraulics::cd_carollo(get("h1")?, get("w")?, get("l")?, get("w1")?),
        // q= selects the dimensionless stage variable; h1= the fitted
        // stage-discharge relationship
        "stage" => {
            if let Some(&q) = map.get("q") {
                hydraulics::stage_variable_a(q, get("b")?, get("w")?, g)
            } else {
                hydraulics::stage_discharge_a(get("h1")?, get("w")?, get("l")?, get("w1")?)
            }
        }
        other => Err(Error::Argument(format!(
            "unknown baseline '{other}' (expected eq1|bagheri|carollo|stage)"
        ))),
    }
}
