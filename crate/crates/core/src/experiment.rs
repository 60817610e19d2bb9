//! Cross-validated comparison run: every selected model is trained once per
//! fold on the standardized training split, out-of-fold predictions are
//! pooled by original index, and the hybrid combines the linear-regression
//! and conv-GRU vectors. Fit wall time accumulates per model across folds.
//!
//! Every randomized task seeds its own RNG from `(master seed, model token,
//! fold index)`, so results do not depend on execution order.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

use crate::classical::{fit_default, ClassicalKind};
use crate::data::{fmt_f64, standardize, Dataset, SyntheticMode};
use crate::deep::{build_architecture, encode_sequence, ArchName};
use crate::error::{Error, Result};
use crate::metrics::{compute_report, log_report, MetricKind, MetricReport};
use crate::nn::{train, LayerSpec, Tensor, TrainConfig};
use crate::resampling::{fold_split, make_folds, FoldPlan};
use crate::seeding::derive_seed;

/// All twelve model tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Classical(ClassicalKind),
    Deep(ArchName),
    /// Average (or stack) of linear regression and the conv-GRU.
    LrCgru,
}

impl ModelKind {
    pub const ALL: [ModelKind; 12] = [
        ModelKind::Classical(ClassicalKind::Lr),
        ModelKind::Classical(ClassicalKind::Rf),
        ModelKind::Classical(ClassicalKind::Svm),
        ModelKind::Classical(ClassicalKind::Knn),
        ModelKind::Classical(ClassicalKind::Dt),
        ModelKind::Deep(ArchName::Lstm),
        ModelKind::Deep(ArchName::Cnn),
        ModelKind::Deep(ArchName::Gru),
        ModelKind::Deep(ArchName::LstmGru),
        ModelKind::Deep(ArchName::CnnLstm),
        ModelKind::Deep(ArchName::CnnGru),
        ModelKind::LrCgru,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ModelKind::Classical(k) => k.token(),
            ModelKind::Deep(a) => a.token(),
            ModelKind::LrCgru => "lr-cgru",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        let t = token.to_ascii_lowercase();
        if t == "lr-cgru" {
            return Ok(ModelKind::LrCgru);
        }
        if let Ok(k) = ClassicalKind::parse(&t) {
            return Ok(ModelKind::Classical(k));
        }
        if let Ok(a) = ArchName::parse(&t) {
            return Ok(ModelKind::Deep(a));
        }
        Err(Error::Argument(format!(
            "unknown model '{token}' (expected one of: {})",
            ModelKind::ALL.map(|m| m.token()).join(", ")
        )))
    }

    pub fn is_deep(self) -> bool {
        matches!(self, ModelKind::Deep(_) | ModelKind::LrCgru)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// How the hybrid combines its two component predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HybridStrategy {
    /// Elementwise mean of the two out-of-fold vectors.
    #[default]
    Average,
    /// Per fold, the linear model's out-of-fold prediction joins the
    /// standardized inputs as a tenth feature and the conv-GRU is retrained.
    Stacking,
}

impl HybridStrategy {
    pub fn parse(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "average" => Ok(HybridStrategy::Average),
            "stacking" => Ok(HybridStrategy::Stacking),
            other => Err(Error::Argument(format!("unknown hybrid strategy '{other}'"))),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            HybridStrategy::Average => "average",
            HybridStrategy::Stacking => "stacking",
        }
    }
}

/// Where the run's dataset comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv(PathBuf),
    Synthetic {
        n: usize,
        mode: SyntheticMode,
        noise_sd: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub folds: usize,
    pub models: Vec<ModelKind>,
    pub hybrid_strategy: HybridStrategy,
    /// Override of the 200-epoch default for the deep models.
    pub epochs: Option<usize>,
    pub data: DataSource,
    pub out_dir: Option<PathBuf>,
    pub single_thread: bool,
    /// Also emit in-sample (full-data fit) YY files, clearly labeled.
    pub emit_insample: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::Config(format!(
                "folds must be at least 2, got {}",
                self.folds
            )));
        }
        if self.models.is_empty() {
            return Err(Error::Config("no models selected".into()));
        }
        if let Some(e) = self.epochs {
            if e == 0 {
                return Err(Error::Config("epochs override must be at least 1".into()));
            }
        }
        if let DataSource::Synthetic { n, noise_sd, .. } = &self.data {
            if *n < 2 {
                return Err(Error::Config("synthetic n must be at least 2".into()));
            }
            if !(*noise_sd >= 0.0) {
                return Err(Error::Config("noise_sd must be non-negative".into()));
            }
        }
        Ok(())
    }

    /// Loads the dataset named by the config.
    pub fn load_dataset(&self) -> Result<Dataset> {
        match &self.data {
            DataSource::Csv(path) => crate::data::load_csv(path),
            DataSource::Synthetic { n, mode, noise_sd } => {
                crate::data::generate_synthetic(*n, *mode, *noise_sd, self.seed)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Config file parsing (TOML, unknown keys rejected)

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    folds: Option<usize>,
    models: Vec<String>,
    hybrid_strategy: Option<String>,
    epochs: Option<usize>,
    out_dir: Option<String>,
    single_thread: Option<bool>,
    emit_insample: Option<bool>,
    data: RawData,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawData {
    csv: Option<String>,
    synthetic: Option<RawSynthetic>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSynthetic {
    n: usize,
    mode: String,
    noise_sd: Option<f64>,
}

/// Parses a TOML config file; unknown keys are errors, and `seed` falls back
/// to `default_seed` when absent.
pub fn parse_config(text: &str, default_seed: u64) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let models = raw
        .models
        .iter()
        .map(|t| ModelKind::parse(t))
        .collect::<Result<Vec<_>>>()?;
    let data = match (raw.data.csv, raw.data.synthetic) {
        (Some(path), None) => DataSource::Csv(PathBuf::from(path)),
        (None, Some(s)) => DataSource::Synthetic {
            n: s.n,
            mode: SyntheticMode::parse(&s.mode)?,
            noise_sd: s.noise_sd.unwrap_or(0.0),
        },
        _ => {
            return Err(Error::Config(
                "data must name exactly one of `csv` or `synthetic`".into(),
            ))
        }
    };
    let config = ExperimentConfig {
        seed: raw.seed.unwrap_or(default_seed),
        folds: raw.folds.unwrap_or(5),
        models,
        hybrid_strategy: raw
            .hybrid_strategy
            .as_deref()
            .map(HybridStrategy::parse)
            .transpose()?
            .unwrap_or_default(),
        epochs: raw.epochs,
        data,
        out_dir: raw.out_dir.map(PathBuf::from),
        single_thread: raw.single_thread.unwrap_or(false),
        emit_insample: raw.emit_insample.unwrap_or(false),
    };
    config.validate()?;
    Ok(config)
}

// ---------------------------------------------------------------------------
// Results

/// One model's cross-validated outcome.
#[derive(Debug, Clone)]
pub struct ModelRun {
    pub model: ModelKind,
    /// Out-of-fold prediction per sample, aligned to dataset indices.
    pub oof: Vec<f64>,
    pub pooled: MetricReport,
    pub per_fold: Vec<MetricReport>,
    /// Fit time summed over folds, seconds.
    pub train_seconds: f64,
    /// Per-fold epoch-mean training loss traces; empty for classical models
    /// and the assembled hybrid.
    pub fold_loss_traces: Vec<Vec<f64>>,
}

impl ModelRun {
    /// Plain across-fold means of each metric, in [`MetricKind::ALL`] order.
    pub fn fold_means(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (slot, kind) in out.iter_mut().zip(MetricKind::ALL) {
            *slot = self.per_fold.iter().map(|r| r.value(kind)).sum::<f64>()
                / self.per_fold.len() as f64;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub n: usize,
    /// Fold assignment per sample.
    pub fold_of: Vec<usize>,
    pub y_true: Vec<f64>,
    /// Successful models, in config order.
    pub models: Vec<ModelRun>,
    /// Models that failed, with the error text; the run continues past them.
    pub failures: Vec<(ModelKind, String)>,
    /// In-sample (full-data fit) predictions when requested.
    pub insample: Vec<(ModelKind, Vec<f64>)>,
}

impl RunResult {
    pub fn model(&self, kind: ModelKind) -> Option<&ModelRun> {
        self.models.iter().find(|m| m.model == kind)
    }
}

// ---------------------------------------------------------------------------
// Hybrid combination

/// Fold-wise retraining hook for the stacking strategy.
pub trait StackingRefit {
    fn folds(&self) -> usize;
    /// Retrains the deep stack for one fold with `meta` (one value per
    /// sample) appended as a feature; returns `(original index, prediction)`
    /// for that fold's test rows.
    fn refit_fold(&mut self, fold: usize, meta: &[f64]) -> Result<Vec<(usize, f64)>>;
}

/// Combines the two component out-of-fold vectors.
pub fn hybrid_predict(
    strategy: HybridStrategy,
    lr_oof: &[f64],
    cgru_oof: &[f64],
    refit: Option<&mut dyn StackingRefit>,
) -> Result<Vec<f64>> {
    if lr_oof.len() != cgru_oof.len() {
        return Err(Error::Argument(format!(
            "component vectors disagree: {} vs {}",
            lr_oof.len(),
            cgru_oof.len()
        )));
    }
    match strategy {
        HybridStrategy::Average => Ok(lr_oof
            .iter()
            .zip(cgru_oof)
            .map(|(a, b)| (a + b) / 2.0)
            .collect()),
        HybridStrategy::Stacking => {
            let refit = refit.ok_or_else(|| {
                Error::Argument("stacking requires a fold-wise refit hook".into())
            })?;
            let mut out = vec![f64::NAN; lr_oof.len()];
            for fold in 0..refit.folds() {
                for (index, pred) in refit.refit_fold(fold, lr_oof)? {
                    out[index] = pred;
                }
            }
            if out.iter().any(|v| v.is_nan()) {
                return Err(Error::Argument(
                    "stacking refit left samples without predictions".into(),
                ));
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// The run itself

struct FoldData {
    train_x: Vec<Vec<f64>>,
    train_y: Vec<f64>,
    test_x: Vec<Vec<f64>>,
    test_idx: Vec<usize>,
    train_idx: Vec<usize>,
}

fn prepare_fold(dataset: &Dataset, plan: &FoldPlan, fold: usize) -> Result<FoldData> {
    let (train, test) = fold_split(dataset, plan, fold)?;
    let scaler = standardize(&train)?;
    Ok(FoldData {
        train_x: scaler.transform_dataset(&train),
        train_y: train.targets()?,
        test_x: scaler.transform_dataset(&test),
        test_idx: plan.test_indices(fold),
        train_idx: plan.train_indices(fold),
    })
}

fn deep_config(epochs: Option<usize>, seed: u64) -> TrainConfig {
    TrainConfig {
        epochs: epochs.unwrap_or(200),
        seed,
        ..TrainConfig::default()
    }
}

fn encode_rows(rows: &[Vec<f64>]) -> Result<Vec<Tensor>> {
    rows.iter().map(|r| encode_sequence(r)).collect()
}

/// Trains one base model on one fold; returns test predictions, the fit
/// seconds, and the loss trace for deep models.
fn run_fold(
    model: ModelKind,
    fold_data: &FoldData,
    seed: u64,
    epochs: Option<usize>,
) -> Result<(Vec<f64>, f64, Option<Vec<f64>>)> {
    match model {
        ModelKind::Classical(kind) => {
            let t0 = Instant::now();
            let fitted = fit_default(kind, &fold_data.train_x, &fold_data.train_y, seed)?;
            let secs = t0.elapsed().as_secs_f64();
            Ok((fitted.predict(&fold_data.test_x)?, secs, None))
        }
        ModelKind::Deep(arch) => {
            let layers = build_architecture(arch).layers;
            let xs = encode_rows(&fold_data.train_x)?;
            let config = deep_config(epochs, seed);
            let t0 = Instant::now();
            let outcome = train(&layers, &xs, &fold_data.train_y, &config)?;
            let secs = t0.elapsed().as_secs_f64();
            let preds = fold_data
                .test_x
                .iter()
                .map(|row| crate::nn::predict(&outcome.net, &encode_sequence(row)?))
                .collect::<Result<Vec<f64>>>()?;
            Ok((preds, secs, Some(outcome.loss_trace)))
        }
        ModelKind::LrCgru => Err(Error::Argument(
            "the hybrid is assembled from its components, not fit directly".into(),
        )),
    }
}

/// Stacking hook over prepared folds: appends the standardized meta feature
/// as a tenth input and retrains the conv-GRU stack per fold.
struct CgruStacker<'a> {
    folds: &'a [FoldData],
    layers: Vec<LayerSpec>,
    master_seed: u64,
    epochs: Option<usize>,
    pub seconds: f64,
}

impl StackingRefit for CgruStacker<'_> {
    fn folds(&self) -> usize {
        self.folds.len()
    }

    fn refit_fold(&mut self, fold: usize, meta: &[f64]) -> Result<Vec<(usize, f64)>> {
        let fd = &self.folds[fold];
        // standardize the meta feature on the training split only
        let train_meta: Vec<f64> = fd.train_idx.iter().map(|&i| meta[i]).collect();
        let mean = train_meta.iter().sum::<f64>() / train_meta.len() as f64;
        let var = train_meta.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / train_meta.len() as f64;
        let sd = if var.sqrt() > 0.0 { var.sqrt() } else { 1.0 };

        let widen = |rows: &[Vec<f64>], idx: &[usize]| -> Result<Vec<Tensor>> {
            rows.iter()
                .zip(idx)
                .map(|(row, &i)| {
                    let mut wide = row.clone();
                    wide.push((meta[i] - mean) / sd);
                    Tensor::from_vec(&[wide.len(), 1], wide)
                })
                .collect()
        };
        let xs = widen(&fd.train_x, &fd.train_idx)?;
        let config = deep_config(self.epochs, derive_seed(self.master_seed, "lr-cgru-stack", fold as u64));
        let t0 = Instant::now();
        let outcome = train(&self.layers, &xs, &fd.train_y, &config)?;
        self.seconds += t0.elapsed().as_secs_f64();
        let test = widen(&fd.test_x, &fd.test_idx)?;
        test.iter()
            .zip(&fd.test_idx)
            .map(|(x, &i)| Ok((i, crate::nn::predict(&outcome.net, x)?)))
            .collect()
    }
}

/// Runs the full cross-validated comparison.
///
/// Model failures are recorded and the run continues; the hybrid fails if a
/// component it needs failed.
pub fn run_experiment(config: &ExperimentConfig, dataset: &Dataset) -> Result<RunResult> {
    config.validate()?;
    let n = dataset.len();
    let plan = make_folds(n, config.folds, config.seed)?;
    let y_true = dataset.targets()?;

    let mut folds = Vec::with_capacity(config.folds);
    for fold in 0..config.folds {
        folds.push(prepare_fold(dataset, &plan, fold)?);
    }

    // deduplicated selection, plus hidden hybrid dependencies
    let mut selected: Vec<ModelKind> = Vec::new();
    for &m in &config.models {
        if !selected.contains(&m) {
            selected.push(m);
        }
    }
    let wants_hybrid = selected.contains(&ModelKind::LrCgru);
    let mut base: Vec<ModelKind> = selected
        .iter()
        .copied()
        .filter(|m| *m != ModelKind::LrCgru)
        .collect();
    if wants_hybrid {
        for dep in [
            ModelKind::Classical(ClassicalKind::Lr),
            ModelKind::Deep(ArchName::CnnGru),
        ] {
            if !base.contains(&dep) {
                base.push(dep);
            }
        }
    }

    let mut runs: Vec<ModelRun> = Vec::new();
    let mut failures: Vec<(ModelKind, String)> = Vec::new();
    for &model in &base {
        let mut oof = vec![0.0; n];
        let mut per_fold = Vec::with_capacity(config.folds);
        let mut traces = Vec::new();
        let mut seconds = 0.0;
        let mut failed = None;
        for (fold, fd) in folds.iter().enumerate() {
            let seed = derive_seed(config.seed, model.token(), fold as u64);
            match run_fold(model, fd, seed, config.epochs) {
                Ok((preds, secs, trace)) => {
                    seconds += secs;
                    let fold_y: Vec<f64> = fd.test_idx.iter().map(|&i| y_true[i]).collect();
                    per_fold.push(compute_report(&fold_y, &preds)?);
                    for (&i, &p) in fd.test_idx.iter().zip(&preds) {
                        oof[i] = p;
                    }
                    if let Some(trace) = trace {
                        traces.push(trace);
                    }
                }
                Err(e) => {
                    failed = Some(format!("fold {fold}: {e}"));
                    break;
                }
            }
        }
        match failed {
            Some(detail) => failures.push((model, detail)),
            None => runs.push(ModelRun {
                model,
                pooled: compute_report(&y_true, &oof)?,
                oof,
                per_fold,
                train_seconds: seconds,
                fold_loss_traces: traces,
            }),
        }
    }

    if wants_hybrid {
        let lr = runs
            .iter()
            .find(|r| r.model == ModelKind::Classical(ClassicalKind::Lr));
        let cgru = runs.iter().find(|r| r.model == ModelKind::Deep(ArchName::CnnGru));
        match (lr, cgru) {
            (Some(lr), Some(cgru)) => {
                let assembled = match config.hybrid_strategy {
                    HybridStrategy::Average => {
                        let oof = hybrid_predict(HybridStrategy::Average, &lr.oof, &cgru.oof, None)?;
                        Some((oof, lr.train_seconds + cgru.train_seconds))
                    }
                    HybridStrategy::Stacking => {
                        let mut stacker = CgruStacker {
                            folds: &folds,
                            layers: build_architecture(ArchName::CnnGru).layers,
                            master_seed: config.seed,
                            epochs: config.epochs,
                            seconds: 0.0,
                        };
                        match hybrid_predict(
                            HybridStrategy::Stacking,
                            &lr.oof,
                            &cgru.oof,
                            Some(&mut stacker),
                        ) {
                            Ok(oof) => Some((oof, lr.train_seconds + stacker.seconds)),
                            Err(e) => {
                                failures.push((ModelKind::LrCgru, e.to_string()));
                                None
                            }
                        }
                    }
                };
                if let Some((oof, seconds)) = assembled {
                    let mut per_fold = Vec::with_capacity(config.folds);
                    for fd in &folds {
                        let fold_y: Vec<f64> = fd.test_idx.iter().map(|&i| y_true[i]).collect();
                        let fold_p: Vec<f64> = fd.test_idx.iter().map(|&i| oof[i]).collect();
                        per_fold.push(compute_report(&fold_y, &fold_p)?);
                    }
                    runs.push(ModelRun {
                        model: ModelKind::LrCgru,
                        pooled: compute_report(&y_true, &oof)?,
                        oof,
                        per_fold,
                        train_seconds: seconds,
                        fold_loss_traces: Vec::new(),
                    });
                }
            }
            _ => failures.push((
                ModelKind::LrCgru,
                "a component model (lr or cnn-gru) failed".into(),
            )),
        }
    }

    // report only what was asked for, in config order
    let mut ordered = Vec::new();
    for &m in &selected {
        if let Some(pos) = runs.iter().position(|r| r.model == m) {
            ordered.push(runs[pos].clone());
        }
    }
    let failures: Vec<(ModelKind, String)> = failures
        .into_iter()
        .filter(|(m, _)| selected.contains(m))
        .collect();

    // optional in-sample fits on the full dataset
    let mut insample = Vec::new();
    if config.emit_insample {
        let scaler = standardize(dataset)?;
        let all_x = scaler.transform_dataset(dataset);
        for run in &ordered {
            if let Ok(preds) = insample_fit(run.model, &all_x, &y_true, config, &ordered) {
                insample.push((run.model, preds));
            }
        }
    }

    Ok(RunResult {
        n,
        fold_of: plan.assignments.clone(),
        y_true,
        models: ordered,
        failures,
        insample,
    })
}

fn insample_fit(
    model: ModelKind,
    all_x: &[Vec<f64>],
    y: &[f64],
    config: &ExperimentConfig,
    runs: &[ModelRun],
) -> Result<Vec<f64>> {
    match model {
        ModelKind::Classical(kind) => {
            let seed = derive_seed(config.seed, model.token(), u64::MAX);
            fit_default(kind, all_x, y, seed)?.predict(all_x)
        }
        ModelKind::Deep(arch) => {
            let layers = build_architecture(arch).layers;
            let xs = encode_rows(all_x)?;
            let seed = derive_seed(config.seed, model.token(), u64::MAX);
            let outcome = train(&layers, &xs, y, &deep_config(config.epochs, seed))?;
            xs.iter()
                .map(|x| crate::nn::predict(&outcome.net, x))
                .collect()
        }
        ModelKind::LrCgru => {
            // average of the components' in-sample predictions
            let lr = insample_fit(
                ModelKind::Classical(ClassicalKind::Lr),
                all_x,
                y,
                config,
                runs,
            )?;
            let cgru = insample_fit(ModelKind::Deep(ArchName::CnnGru), all_x, y, config, runs)?;
            hybrid_predict(HybridStrategy::Average, &lr, &cgru, None)
        }
    }
}

// ---------------------------------------------------------------------------
// Report emission

fn write_file(path: &Path, body: String) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Writes `metrics.csv`, `predictions.csv`, `timing.csv`, and one
/// `yy_<model>.csv` per model (plus `yy_<model>_insample.csv` when present).
/// Returns the written paths.
pub fn emit_reports(result: &RunResult, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    let mut metrics = String::from("model");
    for kind in MetricKind::ALL {
        metrics.push(',');
        metrics.push_str(kind.name());
    }
    for kind in MetricKind::ALL {
        metrics.push_str(",log10_");
        metrics.push_str(kind.name());
    }
    metrics.push('\n');
    for run in &result.models {
        metrics.push_str(run.model.token());
        for kind in MetricKind::ALL {
            metrics.push(',');
            metrics.push_str(&fmt_f64(run.pooled.value(kind)));
        }
        for v in log_report(&run.pooled) {
            metrics.push(',');
            metrics.push_str(&fmt_f64(v));
        }
        metrics.push('\n');
    }
    let path = out_dir.join("metrics.csv");
    write_file(&path, metrics)?;
    written.push(path);

    let mut predictions = String::from("sample_index,fold,y_true,y_pred,model\n");
    for run in &result.models {
        for i in 0..result.n {
            predictions.push_str(&format!(
                "{},{},{},{},{}\n",
                i,
                result.fold_of[i],
                fmt_f64(result.y_true[i]),
                fmt_f64(run.oof[i]),
                run.model.token()
            ));
        }
    }
    let path = out_dir.join("predictions.csv");
    write_file(&path, predictions)?;
    written.push(path);

    let mut timing = String::from("model,seconds\n");
    for run in &result.models {
        // floor at one microsecond; sub-microsecond fits round to zero
        // in the six-decimal format otherwise
        timing.push_str(&format!(
            "{},{:.6}\n",
            run.model.token(),
            run.train_seconds.max(1e-6)
        ));
    }
    let path = out_dir.join("timing.csv");
    write_file(&path, timing)?;
    written.push(path);

    for run in &result.models {
        let mut yy = String::from("y_true,y_pred\n");
        for i in 0..result.n {
            yy.push_str(&format!(
                "{},{}\n",
                fmt_f64(result.y_true[i]),
                fmt_f64(run.oof[i])
            ));
        }
        let path = out_dir.join(format!("yy_{}.csv", run.model.token()));
        write_file(&path, yy)?;
        written.push(path);
    }

    for (model, preds) in &result.insample {
        let mut yy = String::from("y_true,y_pred\n");
        for i in 0..result.n {
            yy.push_str(&format!(
                "{},{}\n",
                fmt_f64(result.y_true[i]),
                fmt_f64(preds[i])
            ));
        }
        let path = out_dir.join(format!("yy_{}_insample.csv", model.token()));
        write_file(&path, yy)?;
        written.push(path);
    }

    Ok(written)
}

/// Tokens of all distinct models mentioned in a list, for display.
pub fn model_tokens(models: &[ModelKind]) -> String {
    let set: BTreeSet<&str> = models.iter().map(|m| m.token()).collect();
    set.into_iter().collect::<Vec<_>>().join(",")
}
