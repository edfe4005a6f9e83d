//! End-to-end runs: prepare → resample → tune → train → evaluate → report.
//!
//! Every random step draws from a child of `RandomSource::root(seed)`:
//! `synth`, `split`, `smote`, `tune` and `fit`. A run is therefore fully
//! determined by its config and seed, independent of thread count.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataio::{self, ColumnKind, Dataset, RawSchema, SynthSpec};
use crate::error::{Error, Result};
use crate::eval::{class_report, confusion, roc_curve, ClassReport, ConfusionMatrix, RocCurve};
use crate::forest::{self, fit_forest, ForestModel, ForestParams};
use crate::preprocess::{
    dedup_indices, drop_features, encode_labels, pearson_corr, stratified_split, CorrMatrix,
    DEFAULT_DROP, HEATMAP_FEATURES,
};
use crate::resample::{smote, ResampleReport, SmoteConfig};
use crate::rng::RandomSource;
use crate::svg;
use crate::tune::{grid_search, ParamGrid, TuningResult};

pub const TOOLKIT: &str = "imbalforest";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const REPORT_FILE: &str = "report.json";
pub const ROC_CSV: &str = "roc.csv";
pub const ROC_SVG: &str = "roc.svg";
pub const CONFUSION_SVG: &str = "confusion.svg";
pub const HEATMAP_SVG: &str = "heatmap.svg";
pub const CORRELATION_CSV: &str = "correlation.csv";
pub const MODEL_FILE: &str = "model.forest";
pub const PROCESSED_CSV: &str = "processed.csv";
pub const SYNTHETIC_CSV: &str = "synthetic.csv";
pub const TUNING_CSV: &str = "tuning.csv";
pub const EVALUATION_FILE: &str = "evaluation.json";

/// Environment variable supplying the default thread count.
pub const THREADS_ENV: &str = "IMBALFOREST_THREADS";

const LEAKAGE_WARNING: &str = "paper-faithful mode: SMOTE ran on the full dataset before the \
train/test split, so test rows include synthetic rows interpolated from rows that may sit in \
the training split. Scores are optimistic and not a leakage-free estimate.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Dedup, split, then resample the training split only.
    #[default]
    Safe,
    /// Resample the full dataset, dedup, then split.
    Paper,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "safe" => Ok(Mode::Safe),
            "paper" => Ok(Mode::Paper),
            _ => Err(format!("unknown mode `{s}` (expected `safe` or `paper`)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSource {
    /// Raw transaction CSV in the 20-column export layout.
    RawCsv(PathBuf),
    /// A processed dataset CSV (`f:<name>,...,label`).
    ProcessedCsv(PathBuf),
    Synth(SynthSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Grid(ParamGrid),
    Fixed(ForestParams),
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec::Grid(ParamGrid::default())
    }
}

fn default_test_fraction() -> f64 {
    0.3
}

fn default_cv_folds() -> usize {
    5
}

fn default_threshold() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: InputSource,
    /// Columns to remove. When absent, raw CSV input drops
    /// DOMAIN, STATE and TOTAL_TRN_AMT and other inputs drop nothing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drop: Option<Vec<String>>,
    /// Heatmap columns, taken before dropping.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap_features: Option<Vec<String>>,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default)]
    pub smote: SmoteConfig,
    #[serde(default)]
    pub model: ModelSpec,
    #[serde(default = "default_cv_folds")]
    pub cv_folds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Output directory; never echoed into reports.
    #[serde(default, skip_serializing)]
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: InputSource) -> Self {
        Self {
            input,
            drop: None,
            heatmap_features: None,
            test_fraction: default_test_fraction(),
            smote: SmoteConfig::default(),
            model: ModelSpec::default(),
            cv_folds: default_cv_folds(),
            seed: 0,
            mode: Mode::Safe,
            threshold: default_threshold(),
            out_dir: None,
        }
    }

    /// Parses a JSON config. Errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies `dotted.key=value` overrides. Values parse as JSON where
    /// possible and fall back to plain strings.
    pub fn with_overrides<S: AsRef<str>>(self, overrides: &[S]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self);
        }
        let out_dir = self.out_dir.clone();
        let mut value = serde_json::to_value(&self)?;
        for o in overrides {
            let o = o.as_ref();
            let (key, raw) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            let parsed = serde_json::from_str(raw)
                .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
            let mut slot = &mut value;
            for part in key.split('.') {
                let obj = slot.as_object_mut().ok_or_else(|| {
                    Error::Config(format!("override `{key}`: `{part}` is not inside an object"))
                })?;
                slot = obj.entry(part.to_string()).or_insert(serde_json::Value::Null);
            }
            *slot = parsed;
        }
        let mut cfg: RunConfig = serde_json::from_value(value)
            .map_err(|e| Error::Config(format!("after overrides: {e}")))?;
        cfg.out_dir = out_dir;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config(format!(
                "test_fraction {} outside (0, 1)",
                self.test_fraction
            )));
        }
        if !self.threshold.is_finite() {
            return Err(Error::Config("threshold must be finite".into()));
        }
        self.smote.validate()?;
        if let InputSource::Synth(spec) = &self.input {
            spec.validate()?;
        }
        match &self.model {
            ModelSpec::Grid(g) => {
                if g.is_empty() {
                    return Err(Error::Config("model.grid has an empty list".into()));
                }
                if self.cv_folds < 2 {
                    return Err(Error::Config("cv_folds must be at least 2".into()));
                }
            }
            ModelSpec::Fixed(p) => {
                if p.n_trees == 0 {
                    return Err(Error::Config("model.fixed.n_trees must be positive".into()));
                }
            }
        }
        Ok(())
    }

    fn out_dir(&self) -> Result<&Path> {
        self.out_dir
            .as_deref()
            .ok_or_else(|| Error::Config("no output directory given".into()))
    }

    fn echo(&self) -> RunConfig {
        RunConfig {
            out_dir: None,
            ..self.clone()
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Generates a synthetic dataset from `root(seed)/synth` and saves it.
pub fn cmd_synth(spec: &SynthSpec, seed: u64, path: impl AsRef<Path>) -> Result<Dataset> {
    let ds = dataio::generate_synthetic(spec, &RandomSource::root(seed).child("synth"))?;
    if let Some(dir) = path.as_ref().parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    dataio::save_dataset(&ds, path)?;
    Ok(ds)
}

/// Dataset before and after the configured drop list.
struct Loaded {
    full: Dataset,
    processed: Dataset,
}

fn load_input(cfg: &RunConfig) -> Result<Loaded> {
    match &cfg.input {
        InputSource::RawCsv(path) => {
            let raw = dataio::load_csv(path, &RawSchema::transactions())?;
            let drop: Vec<String> = cfg
                .drop
                .clone()
                .unwrap_or_else(|| DEFAULT_DROP.iter().map(|s| s.to_string()).collect());
            let (text_cols, numeric_cols): (Vec<String>, Vec<String>) =
                drop.into_iter().partition(|name| {
                    raw.schema
                        .position(name)
                        .is_some_and(|i| raw.schema.columns()[i].kind != ColumnKind::Numeric)
                });
            let full = encode_labels(&raw.drop_columns(&text_cols)?)?;
            let processed = drop_features(&full, &numeric_cols)?;
            Ok(Loaded { full, processed })
        }
        InputSource::ProcessedCsv(path) => {
            let full = dataio::load_dataset(path)?;
            let processed = drop_features(&full, cfg.drop.as_deref().unwrap_or(&[]))?;
            Ok(Loaded { full, processed })
        }
        InputSource::Synth(spec) => {
            let full =
                dataio::generate_synthetic(spec, &RandomSource::root(cfg.seed).child("synth"))?;
            let processed = drop_features(&full, cfg.drop.as_deref().unwrap_or(&[]))?;
            Ok(Loaded { full, processed })
        }
    }
}

fn heatmap_subset(cfg: &RunConfig, full: &Dataset) -> Vec<String> {
    if let Some(list) = &cfg.heatmap_features {
        return list.clone();
    }
    if HEATMAP_FEATURES.iter().all(|n| full.feature_index(n).is_some()) {
        HEATMAP_FEATURES.iter().map(|s| s.to_string()).collect()
    } else {
        full.feature_names().to_vec()
    }
}

#[derive(Debug, Clone)]
pub struct PrepareOutput {
    pub processed: Dataset,
    pub correlation: CorrMatrix,
    pub files: Vec<PathBuf>,
}

/// Ingests the input, writes `processed.csv`, `correlation.csv` and
/// `heatmap.svg`.
pub fn cmd_prepare(cfg: &RunConfig) -> Result<PrepareOutput> {
    cfg.validate()?;
    let out = cfg.out_dir()?;
    let loaded = load_input(cfg)?;
    let correlation = pearson_corr(&loaded.full, &heatmap_subset(cfg, &loaded.full))?;

    let processed_path = out.join(PROCESSED_CSV);
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    dataio::save_dataset(&loaded.processed, &processed_path)?;
    let files = vec![
        processed_path,
        write(out, CORRELATION_CSV, &correlation.to_csv())?,
        write(
            out,
            HEATMAP_SVG,
            &svg::heatmap_svg(&correlation, "Feature correlation"),
        )?,
    ];
    Ok(PrepareOutput {
        processed: loaded.processed,
        correlation,
        files,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub rows: usize,
    pub features: usize,
    /// `[legitimate, fraud]` before any resampling or dedup.
    pub class_counts: [usize; 2],
    pub fraud_rate: f64,
    /// Majority count over minority count.
    pub imbalance_ratio: f64,
    pub duplicates_removed: usize,
    pub test_fraction: f64,
    pub train_class_counts: [usize; 2],
    pub test_class_counts: [usize; 2],
    /// Class counts of the data the final model was fitted on.
    pub fit_class_counts: [usize; 2],
}

/// Row-identity checks between the evaluated rows and everything used for
/// fitting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakageAudit {
    pub test_rows: usize,
    pub fit_rows: usize,
    /// Split indices shared by the train and test sides (always 0).
    pub shared_split_indices: usize,
    /// Test rows bitwise equal (features and label) to some fitted row.
    pub test_rows_in_fit_data: usize,
    /// Test rows that were produced by SMOTE.
    pub synthetic_test_rows: usize,
    /// Whether test rows were part of the SMOTE input.
    pub test_rows_seen_by_smote: bool,
    pub leakage_free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub toolkit: String,
    pub version: String,
    pub seed: u64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leakage_warning: Option<String>,
    pub config: RunConfig,
    pub dataset: DatasetStats,
    pub resample: ResampleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuning: Option<TuningResult>,
    pub model_params: ForestParams,
    pub threshold: f64,
    pub confusion: ConfusionMatrix,
    pub class_report: ClassReport,
    pub auc: f64,
    pub audit: LeakageAudit,
    /// Defaults chosen by this toolkit where no published value exists.
    pub implementer_defaults: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Record per-stage wall time. Off for byte-reproducible reports.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { timing: true }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub model: ForestModel,
    pub roc: RocCurve,
}

struct Timer {
    enabled: bool,
    last: Instant,
    stages: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Self {
            enabled,
            last: Instant::now(),
            stages: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        if self.enabled {
            let ms = (now - self.last).as_secs_f64() * 1e3;
            self.stages.insert(stage.to_string(), (ms * 1e3).round() / 1e3);
        }
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.stages)
    }
}

fn row_keys(ds: &Dataset) -> HashSet<(Vec<u64>, u8)> {
    (0..ds.n_rows())
        .map(|i| (ds.row(i).iter().map(|v| v.to_bits()).collect(), ds.label(i)))
        .collect()
}

fn implementer_defaults(cfg: &RunConfig) -> Vec<String> {
    let mut out = vec![
        format!("test_fraction = {} (no published split ratio)", cfg.test_fraction),
        format!("smote.k = {} nearest minority neighbours", cfg.smote.k),
        "smote base rows visited round-robin; neighbour and u ~ U[0,1) random".to_string(),
        "split criterion: Gini impurity; leaf ties vote legitimate".to_string(),
    ];
    if matches!(cfg.model, ModelSpec::Grid(_)) {
        out.push(format!("cross-validation folds = {}", cfg.cv_folds));
        out.push("model selection metric: fraud-class F1".to_string());
        out.push("parameter grid contents chosen by this toolkit".to_string());
    }
    out
}

/// Runs the full pipeline and writes `report.json`, `roc.csv`, `roc.svg`,
/// `confusion.svg`, `model.forest` (plus `tuning.csv` when tuning).
pub fn cmd_run(cfg: &RunConfig, opts: RunOptions) -> Result<RunOutput> {
    cfg.validate()?;
    let out = cfg.out_dir()?;
    let root = RandomSource::root(cfg.seed);
    let mut timer = Timer::new(opts.timing);

    let data = load_input(cfg)?.processed;
    let class_counts = data.class_counts();
    timer.lap("load");

    let split_rng = root.child("split");
    let smote_rng = root.child("smote");
    // `tune_data` holds only original rows; grid search resamples inside
    // each fold, so validation folds never contain synthetic rows.
    let (split, fit_data, tune_data, resample, duplicates_removed, synthetic_test_rows) = match cfg.mode {
        Mode::Safe => {
            let keep = dedup_indices(&data);
            let deduped = data.subset(&keep);
            timer.lap("dedup");
            let split = stratified_split(&deduped, cfg.test_fraction, &split_rng)?;
            timer.lap("split");
            let (fit_data, resample) = smote(&split.train, &cfg.smote, &smote_rng)?;
            timer.lap("smote");
            let tune_data = split.train.clone();
            (split, fit_data, tune_data, resample, data.n_rows() - keep.len(), 0)
        }
        Mode::Paper => {
            let (resampled, resample) = smote(&data, &cfg.smote, &smote_rng)?;
            timer.lap("smote");
            let keep = dedup_indices(&resampled);
            let deduped = resampled.subset(&keep);
            timer.lap("dedup");
            let split = stratified_split(&deduped, cfg.test_fraction, &split_rng)?;
            timer.lap("split");
            let synthetic = split
                .test_indices
                .iter()
                .filter(|&&i| keep[i] >= data.n_rows())
                .count();
            let original_train: Vec<usize> = (0..split.train.n_rows())
                .filter(|&j| keep[split.train_indices[j]] < data.n_rows())
                .collect();
            let tune_data = split.train.subset(&original_train);
            let fit_data = split.train.clone();
            (split, fit_data, tune_data, resample, resampled.n_rows() - keep.len(), synthetic)
        }
    };

    let (params, tuning) = match &cfg.model {
        ModelSpec::Fixed(p) => (p.clone(), None),
        ModelSpec::Grid(grid) => {
            let result = grid_search(&tune_data, grid, cfg.cv_folds, &cfg.smote, &root.child("tune"))?;
            (result.best_params.clone(), Some(result))
        }
    };
    timer.lap("tune");

    let model = fit_forest(&fit_data, &params, &root.child("fit"))?;
    timer.lap("fit");

    let test = &split.test;
    let scores = model.predict_scores(test)?;
    let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s > cfg.threshold)).collect();
    let cm = confusion(test.labels(), &preds)?;
    let report_metrics = class_report(&cm);
    let roc = roc_curve(test.labels(), &scores)?;
    timer.lap("evaluate");

    let fit_keys = row_keys(&fit_data);
    let test_rows_in_fit_data = (0..test.n_rows())
        .filter(|&i| {
            fit_keys.contains(&(test.row(i).iter().map(|v| v.to_bits()).collect(), test.label(i)))
        })
        .count();
    let train_set: HashSet<usize> = split.train_indices.iter().copied().collect();
    let shared = split
        .test_indices
        .iter()
        .filter(|i| train_set.contains(i))
        .count();
    let test_rows_seen_by_smote = cfg.mode == Mode::Paper;
    let audit = LeakageAudit {
        test_rows: test.n_rows(),
        fit_rows: fit_data.n_rows(),
        shared_split_indices: shared,
        test_rows_in_fit_data,
        synthetic_test_rows,
        test_rows_seen_by_smote,
        leakage_free: shared == 0
            && test_rows_in_fit_data == 0
            && synthetic_test_rows == 0
            && !test_rows_seen_by_smote,
    };

    let (majority, minority) = (class_counts[0].max(class_counts[1]), class_counts[0].min(class_counts[1]));
    let dataset = DatasetStats {
        rows: data.n_rows(),
        features: data.n_features(),
        class_counts,
        fraud_rate: class_counts[1] as f64 / data.n_rows().max(1) as f64,
        imbalance_ratio: if minority == 0 { 0.0 } else { majority as f64 / minority as f64 },
        duplicates_removed,
        test_fraction: cfg.test_fraction,
        train_class_counts: split.train.class_counts(),
        test_class_counts: test.class_counts(),
        fit_class_counts: fit_data.class_counts(),
    };

    let paper = cfg.mode == Mode::Paper;
    let mark = |title: &str| {
        if paper {
            format!("{title} [paper-faithful: leakage]")
        } else {
            title.to_string()
        }
    };
    let comment = if paper {
        "# paper-faithful mode: evaluated on resampled data\n"
    } else {
        ""
    };

    write(out, ROC_CSV, &format!("{comment}{}", roc.to_csv()))?;
    write(out, ROC_SVG, &svg::roc_svg(&roc, &mark("Random forest ROC")))?;
    write(out, CONFUSION_SVG, &svg::confusion_svg(&cm, &mark("Confusion matrix")))?;
    write(out, MODEL_FILE, &forest::model_to_string(&model)?)?;
    if let Some(t) = &tuning {
        write(out, TUNING_CSV, &format!("{comment}{}", t.to_csv()))?;
    }
    timer.lap("write");

    let report = RunReport {
        toolkit: TOOLKIT.into(),
        version: VERSION.into(),
        seed: cfg.seed,
        mode: cfg.mode,
        leakage_warning: paper.then(|| LEAKAGE_WARNING.to_string()),
        config: cfg.echo(),
        dataset,
        resample,
        tuning,
        model_params: params,
        threshold: cfg.threshold,
        confusion: cm,
        class_report: report_metrics,
        auc: roc.auc,
        audit,
        implementer_defaults: implementer_defaults(cfg),
        timing_ms: timer.finish(),
    };
    write(out, REPORT_FILE, &to_json(&report)?)?;
    Ok(RunOutput { report, model, roc })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub rows: usize,
    pub threshold: f64,
    pub confusion: ConfusionMatrix,
    pub class_report: ClassReport,
    /// Absent when the dataset holds a single class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
}

/// Scores a saved model on a processed dataset. Writes `evaluation.json`
/// and, when both classes are present, `roc.csv` and `roc.svg`; always
/// writes `confusion.svg`.
pub fn cmd_evaluate(
    model_path: impl AsRef<Path>,
    dataset_path: impl AsRef<Path>,
    threshold: f64,
    out: Option<&Path>,
) -> Result<EvaluationReport> {
    let model = forest::load_model(model_path)?;
    let ds = dataio::load_dataset(dataset_path)?;
    let (report, roc) = evaluate_model(&model, &ds, threshold)?;
    if let Some(dir) = out {
        write(dir, EVALUATION_FILE, &to_json(&report)?)?;
        write(dir, CONFUSION_SVG, &svg::confusion_svg(&report.confusion, "Confusion matrix"))?;
        if let Some(roc) = &roc {
            write(dir, ROC_CSV, &roc.to_csv())?;
            write(dir, ROC_SVG, &svg::roc_svg(roc, "Random forest ROC"))?;
        }
    }
    Ok(report)
}

pub fn evaluate_model(
    model: &ForestModel,
    ds: &Dataset,
    threshold: f64,
) -> Result<(EvaluationReport, Option<RocCurve>)> {
    if !threshold.is_finite() {
        return Err(Error::InvalidParam("threshold must be finite".into()));
    }
    let scores = model.predict_scores(ds)?;
    let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s > threshold)).collect();
    let cm = confusion(ds.labels(), &preds)?;
    let counts = ds.class_counts();
    let roc = if counts[0] > 0 && counts[1] > 0 {
        Some(roc_curve(ds.labels(), &scores)?)
    } else {
        None
    };
    let report = EvaluationReport {
        rows: ds.n_rows(),
        threshold,
        confusion: cm,
        class_report: class_report(&cm),
        auc: roc.as_ref().map(|r| r.auc),
    };
    Ok((report, roc))
}

/// Runs `f` on a rayon pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
