use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{CausalTraining, ExperimentConfig, LeakedTraining};
use crate::decomposition::Method;
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, mean_and_var, welch_t_test, MetricsReport};
use crate::models::{train, ModelKind, TrainConfig, TrainingHistory};
use crate::pipeline::{
    build_test_features_causal, build_test_features_leaked, build_train_features, build_train_features_walk_forward,
    decompose_full_leaked,
    matrix_windows, select_channels, step_windows, windows_from_matrix, ChannelScalers, FeatureMatrix, FeatureOrigin,
    PipelineMode, StepFeatures, RAW_LABEL,
};
use crate::series::{make_windows, minmax_apply, minmax_fit, minmax_invert, ScalerParams, SplitSpec, TimeSeries, Window, WindowSpec};
use crate::spectral::{power_spectrum, Spectrum};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub dataset: String,
    pub method: Method,
    pub mode: PipelineMode,
    pub model: String,
    pub seed: u64,
    pub metrics: Option<MetricsReport>,
    pub error: Option<String>,
    /// Excluded from the reproducible reports.
    pub wall_time_ms: f64,
    /// One entry per trained model; summation cells carry one per component.
    #[serde(skip)]
    pub histories: Vec<(String, TrainingHistory)>,
    #[serde(skip)]
    pub predictions: Vec<f64>,
}

impl ResultRow {
    pub fn mse(&self) -> Option<f64> {
        self.metrics.as_ref().map(|m| m.mse)
    }

    pub fn models_trained(&self) -> usize {
        self.histories.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub dataset: String,
    pub method: Method,
    pub mode: PipelineMode,
    pub model: String,
    pub n: usize,
    pub failures: usize,
    pub mse_mean: f64,
    pub mse_std: f64,
    pub mae_mean: f64,
    pub mae_std: f64,
    pub mape_mean: f64,
    pub mape_std: f64,
    pub r2_mean: Option<f64>,
    pub r2_std: Option<f64>,
    pub p_vs_causal: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSpectrum {
    pub method: Method,
    pub label: String,
    pub spectrum: Spectrum,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub aggregates: Vec<AggregateRow>,
    pub spectra: Vec<ComponentSpectrum>,
}

impl ExperimentOutput {
    pub fn aggregate(&self, method: Method, mode: PipelineMode, model: &str) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.method == method && a.mode == mode && a.model == model)
    }

    pub fn rows_for(&self, method: Method, mode: PipelineMode, model: &str) -> Vec<&ResultRow> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.mode == mode && r.model == model)
            .collect()
    }

    pub fn mse_values(&self, method: Method, mode: PipelineMode, model: &str) -> Vec<f64> {
        self.rows_for(method, mode, model).iter().filter_map(|r| r.mse()).collect()
    }
}

/// Seed-independent data shared by every cell.
struct Prepared {
    dataset: String,
    series: TimeSeries,
    split: SplitSpec,
    spec: WindowSpec,
    raw_scaler: ScalerParams,
    raw_scaled: Vec<f64>,
}

impl Prepared {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let series = cfg.dataset.load()?;
        let split = cfg.split_for(&series)?;
        let spec = cfg.window_spec();
        if split.train_len <= spec.window + 1 || split.test_len() == 0 {
            return Err(Error::InsufficientData {
                needed: spec.window + 2,
                got: split.train_len,
            });
        }
        let raw_scaler = minmax_fit(&series.values()[..split.train_len])?;
        let raw_scaled = minmax_apply(&raw_scaler, series.values());
        Ok(Self {
            dataset: cfg.dataset.name(),
            series,
            split,
            spec,
            raw_scaler,
            raw_scaled,
        })
    }

    fn test_targets(&self) -> Vec<usize> {
        (self.split.train_len..self.split.total_len).collect()
    }

    fn truth(&self) -> &[f64] {
        &self.series.values()[self.split.train_len..]
    }

    fn raw_windows(&self) -> Result<(Vec<Window>, Vec<Window>)> {
        let p = self.split.train_len;
        let train_ch = vec![self.raw_scaled[..p].to_vec()];
        let train = make_windows(&train_ch, &self.raw_scaled[..p], self.spec)?;
        let full = FeatureMatrix {
            method: Method::Identity,
            labels: vec![RAW_LABEL.into()],
            channels: vec![self.raw_scaled.clone()],
            origin: FeatureOrigin::Leaked,
        };
        let test = step_windows(&windows_from_matrix(&full, &self.test_targets(), self.spec)?, &self.raw_scaled, &[0])?;
        Ok((train, test))
    }
}

/// Scaled training matrix, test windows and scalers of one protocol.
struct Protocol {
    train: FeatureMatrix,
    scalers: ChannelScalers,
    test: StepFeatures,
    walk_forward: Option<StepFeatures>,
}

struct MethodFeatures {
    /// Training-split decomposition, unscaled; fixes the channel layout.
    train_split: FeatureMatrix,
    leaked: Option<Protocol>,
    causal: Option<Protocol>,
}

impl MethodFeatures {
    fn n_components(&self) -> usize {
        self.train_split.n_components()
    }

    fn protocol(&self, leaked: bool) -> Option<&Protocol> {
        if leaked {
            self.leaked.as_ref()
        } else {
            self.causal.as_ref()
        }
    }
}

fn needs_components(modes: &[PipelineMode]) -> bool {
    modes.iter().any(|m| m.uses_components())
}

fn build_method(cfg: &ExperimentConfig, prep: &Prepared, method: Method) -> Result<MethodFeatures> {
    let p = prep.split.train_len;
    let dcfg = &cfg.decomposition;
    let train_series = prep.series.prefix(p)?;
    let train_split = build_train_features(&train_series, method, dcfg)?;
    let layout = train_split.labels.clone();

    let leaked = if cfg.modes.iter().any(|m| m.uses_components() && m.is_leaked()) {
        let (train, scalers, test) = match cfg.leaked_training {
            LeakedTraining::FullSeries => {
                let full = decompose_full_leaked(&prep.series, method, dcfg, &layout)?;
                let scalers = ChannelScalers::fit(&full.head(p))?;
                let full = scalers.apply_matrix(&full)?;
                let test = windows_from_matrix(&full, &prep.test_targets(), prep.spec)?;
                (full.head(p), scalers, test)
            }
            LeakedTraining::TrainSplit => {
                let scalers = ChannelScalers::fit(&train_split)?;
                let sf = build_test_features_leaked(&prep.series, &prep.split, method, dcfg, &layout, prep.spec)?;
                (scalers.apply_matrix(&train_split)?, scalers.clone(), scalers.apply_steps(&sf)?)
            }
        };
        Some(Protocol {
            train,
            scalers,
            test,
            walk_forward: None,
        })
    } else {
        None
    };

    let causal = if cfg.modes.iter().any(|m| m.uses_components() && !m.is_leaked()) {
        let scalers = ChannelScalers::fit(&train_split)?;
        let sf = build_test_features_causal(&prep.series, &prep.split, method, dcfg, &layout, prep.spec, cfg.schedule)?;
        let walk_forward = if cfg.causal_training == CausalTraining::WalkForward
            && cfg
                .modes
                .iter()
                .any(|m| matches!(m, PipelineMode::Causal | PipelineMode::SingleComponent { leaked: false, .. }))
        {
            let wf = build_train_features_walk_forward(&train_series, method, dcfg, &layout, prep.spec, cfg.schedule)?;
            Some(scalers.apply_steps(&wf)?)
        } else {
            None
        };
        Some(Protocol {
            train: scalers.apply_matrix(&train_split)?,
            test: scalers.apply_steps(&sf)?,
            scalers,
            walk_forward,
        })
    } else {
        None
    };
    Ok(MethodFeatures {
        train_split,
        leaked,
        causal,
    })
}

struct CellOutcome {
    metrics: MetricsReport,
    predictions: Vec<f64>,
    histories: Vec<(String, TrainingHistory)>,
}

fn fit_predict(
    kind: &ModelKind,
    train_windows: &[Window],
    test_windows: &[Window],
    track_test: bool,
    tcfg: &TrainConfig,
) -> Result<(Vec<f64>, TrainingHistory)> {
    let (params, history) = train(kind, train_windows, tcfg, track_test.then_some(test_windows))?;
    Ok((params.predict_all(test_windows)?, history))
}

fn run_cell(
    cfg: &ExperimentConfig,
    prep: &Prepared,
    features: Option<&MethodFeatures>,
    mode: PipelineMode,
    kind: &ModelKind,
    seed: u64,
) -> Result<CellOutcome> {
    let tcfg = TrainConfig { seed, ..cfg.train.clone() };
    let p = prep.split.train_len;
    let missing = || Error::InvalidConfig(format!("features for mode {mode} were not built"));

    let (predictions, histories) = match mode {
        PipelineMode::RawOnly => {
            let (tr, te) = prep.raw_windows()?;
            let (pred, h) = fit_predict(kind, &tr, &te, true, &tcfg)?;
            (minmax_invert(&prep.raw_scaler, &pred), vec![(String::new(), h)])
        }
        PipelineMode::Summation { leaked } => {
            let f = features.ok_or_else(missing)?;
            let proto = f.protocol(leaked).ok_or_else(missing)?;
            let mut total = vec![0.0; prep.split.test_len()];
            let mut histories = Vec::new();
            for k in 1..=f.n_components() {
                let tr = matrix_windows(&proto.train, &proto.train.channels[k], &[k], prep.spec)?;
                // test targets are unused here; the forecast is scored on raw truth
                let te = step_windows(&proto.test, &prep.raw_scaled, &[k])?;
                let (pred, h) = fit_predict(kind, &tr, &te, false, &tcfg)?;
                for (t, v) in total.iter_mut().zip(&pred) {
                    *t += proto.scalers.params[k].invert_value(*v);
                }
                histories.push((proto.train.labels[k].clone(), h));
            }
            (total, histories)
        }
        _ => {
            let f = features.ok_or_else(missing)?;
            let proto = f.protocol(mode.is_leaked()).ok_or_else(missing)?;
            let keep = select_channels(f.n_components(), mode)?;
            // the raw channel is scaled identically in every protocol
            let tr = match &proto.walk_forward {
                Some(wf) => step_windows(wf, &prep.raw_scaled, &keep)?,
                None => matrix_windows(&proto.train, &prep.raw_scaled[..p], &keep, prep.spec)?,
            };
            let te = step_windows(&proto.test, &prep.raw_scaled, &keep)?;
            let (pred, h) = fit_predict(kind, &tr, &te, true, &tcfg)?;
            (minmax_invert(&prep.raw_scaler, &pred), vec![(String::new(), h)])
        }
    };
    if let Some(bad) = predictions.iter().find(|v| !v.is_finite()) {
        return Err(Error::NumericOverflow(format!("non-finite forecast {bad}")));
    }
    let metrics = compute_metrics(prep.truth(), &predictions)?;
    Ok(CellOutcome {
        metrics,
        predictions,
        histories,
    })
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Run every (method, mode, model, seed) cell. Cell failures are recorded
/// in their rows; only dataset-level problems abort the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    with_pool(cfg.workers, || run_inner(cfg))?
}

fn run_inner(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let prep = Prepared::new(cfg)?;
    let features: Vec<Result<MethodFeatures>> = if needs_components(&cfg.modes) {
        cfg.methods.iter().map(|&m| build_method(cfg, &prep, m)).collect()
    } else {
        cfg.methods.iter().map(|_| Err(Error::InvalidConfig("unused".into()))).collect()
    };

    let mut cells = Vec::new();
    for (mi, &method) in cfg.methods.iter().enumerate() {
        for &mode in &cfg.modes {
            for kind in &cfg.models {
                for seed in cfg.seeds() {
                    cells.push((mi, method, mode, kind, seed));
                }
            }
        }
    }
    let rows: Vec<ResultRow> = cells
        .par_iter()
        .map(|&(mi, method, mode, kind, seed)| {
            let start = Instant::now();
            let outcome = match (&features[mi], mode) {
                (_, PipelineMode::RawOnly) => run_cell(cfg, &prep, None, mode, kind, seed),
                (Ok(f), _) => run_cell(cfg, &prep, Some(f), mode, kind, seed),
                (Err(e), _) => Err(Error::InvalidInput(format!("{method} features failed: {e}"))),
            };
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let mut row = ResultRow {
                dataset: prep.dataset.clone(),
                method,
                mode,
                model: kind.label(),
                seed,
                metrics: None,
                error: None,
                wall_time_ms,
                histories: Vec::new(),
                predictions: Vec::new(),
            };
            match outcome {
                Ok(o) => {
                    row.metrics = Some(o.metrics);
                    row.histories = o.histories;
                    row.predictions = o.predictions;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();

    let mut spectra = Vec::new();
    for (f, &method) in features.iter().zip(&cfg.methods) {
        if let Ok(f) = f {
            for (label, ch) in f.train_split.labels.iter().zip(&f.train_split.channels) {
                spectra.push(ComponentSpectrum {
                    method,
                    label: label.clone(),
                    spectrum: power_spectrum(ch)?,
                });
            }
        }
    }
    let aggregates = aggregate(&rows);
    Ok(ExperimentOutput {
        config: cfg.clone(),
        rows,
        aggregates,
        spectra,
    })
}

fn mean_std(x: &[f64]) -> (f64, f64) {
    match x.len() {
        0 => (f64::NAN, f64::NAN),
        1 => (x[0], 0.0),
        _ => {
            let (m, v) = mean_and_var(x);
            (m, v.sqrt())
        }
    }
}

/// Mean and sample std per cell, in first-appearance order, with the Welch
/// p-value against the causal cell of the same method and model.
pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut groups: Vec<(&ResultRow, Vec<&ResultRow>)> = Vec::new();
    let mut index: BTreeMap<(String, String, String, String), usize> = BTreeMap::new();
    for r in rows {
        let key = (r.dataset.clone(), r.method.to_string(), r.mode.label(), r.model.clone());
        let i = *index.entry(key).or_insert_with(|| {
            groups.push((r, Vec::new()));
            groups.len() - 1
        });
        groups[i].1.push(r);
    }
    let mse_of = |g: &[&ResultRow]| -> Vec<f64> { g.iter().filter_map(|r| r.mse()).collect() };
    let mut out = Vec::with_capacity(groups.len());
    for (head, g) in &groups {
        let ok: Vec<&MetricsReport> = g.iter().filter_map(|r| r.metrics.as_ref()).collect();
        let col = |f: &dyn Fn(&MetricsReport) -> f64| mean_std(&ok.iter().map(|m| f(m)).collect::<Vec<_>>());
        let (mse_mean, mse_std) = col(&|m| m.mse);
        let (mae_mean, mae_std) = col(&|m| m.mae);
        let (mape_mean, mape_std) = col(&|m| m.mape);
        let r2: Vec<f64> = ok.iter().filter_map(|m| m.r2).collect();
        let (r2_mean, r2_std) = if r2.is_empty() {
            (None, None)
        } else {
            let (m, s) = mean_std(&r2);
            (Some(m), Some(s))
        };
        let p_vs_causal = if head.mode == PipelineMode::Causal {
            None
        } else {
            groups
                .iter()
                .find(|(h, _)| {
                    h.dataset == head.dataset
                        && h.method == head.method
                        && h.model == head.model
                        && h.mode == PipelineMode::Causal
                })
                .and_then(|(_, causal)| welch_t_test(&mse_of(g), &mse_of(causal)).ok())
                .map(|w| w.p)
        };
        out.push(AggregateRow {
            dataset: head.dataset.clone(),
            method: head.method,
            mode: head.mode,
            model: head.model.clone(),
            n: ok.len(),
            failures: g.len() - ok.len(),
            mse_mean,
            mse_std,
            mae_mean,
            mae_std,
            mape_mean,
            mape_std,
            r2_mean,
            r2_std,
            p_vs_causal,
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AblationEntry {
    pub model: String,
    pub index: usize,
    pub label: String,
    /// Dominant frequency of the component in the training decomposition.
    pub dominant_frequency: f64,
    pub mse_mean: f64,
    /// `1 − mse / mse(raw only)`.
    pub error_reduction: f64,
}

#[derive(Clone, Debug)]
pub struct AblationOutput {
    pub output: ExperimentOutput,
    pub entries: Vec<AblationEntry>,
}

/// Leaked single-component cells for every component of `method`, plus the
/// raw-only reference.
pub fn run_ablation(cfg: &ExperimentConfig, method: Method) -> Result<AblationOutput> {
    cfg.validate()?;
    let prep = Prepared::new(cfg)?;
    let train_series = prep.series.prefix(prep.split.train_len)?;
    let train = build_train_features(&train_series, method, &cfg.decomposition)?;
    let k = train.n_components();
    let mut modes = vec![PipelineMode::RawOnly];
    modes.extend((1..=k).map(|index| PipelineMode::SingleComponent { index, leaked: true }));
    let grid = ExperimentConfig {
        methods: vec![method],
        modes,
        ..cfg.clone()
    };
    let output = run_experiment(&grid)?;
    let mut entries = Vec::new();
    for kind in &cfg.models {
        let label = kind.label();
        let Some(raw) = output.aggregate(method, PipelineMode::RawOnly, &label) else {
            continue;
        };
        for index in 1..=k {
            let mode = PipelineMode::SingleComponent { index, leaked: true };
            if let Some(a) = output.aggregate(method, mode, &label) {
                entries.push(AblationEntry {
                    model: label.clone(),
                    index,
                    label: train.labels[index].clone(),
                    dominant_frequency: crate::spectral::dominant_frequency(&train.channels[index])?.frequency,
                    mse_mean: a.mse_mean,
                    error_reduction: 1.0 - a.mse_mean / raw.mse_mean,
                });
            }
        }
    }
    Ok(AblationOutput { output, entries })
}

/// One model per component, predictions summed, next to the raw-only
/// reference cell.
pub fn run_summation(cfg: &ExperimentConfig, method: Method, leaked: bool) -> Result<ExperimentOutput> {
    let grid = ExperimentConfig {
        methods: vec![method],
        modes: vec![PipelineMode::RawOnly, PipelineMode::Summation { leaked }],
        ..cfg.clone()
    };
    run_experiment(&grid)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditFinding {
    pub method: Method,
    pub model: String,
    pub raw_mse: f64,
    pub leaked_mse: f64,
    pub causal_mse: f64,
    /// Relative change vs raw-only; negative means lower error.
    pub leaked_change: f64,
    pub causal_change: f64,
    pub t: Option<f64>,
    pub p: Option<f64>,
    pub verdict: String,
}

pub const AUDIT_ALPHA: f64 = 0.05;

/// Compare leaked and causal pipelines and flag accuracy that only the
/// leaked features deliver.
pub fn audit(cfg: &ExperimentConfig) -> Result<(ExperimentOutput, Vec<AuditFinding>)> {
    let grid = ExperimentConfig {
        modes: vec![PipelineMode::RawOnly, PipelineMode::Leaked, PipelineMode::Causal],
        ..cfg.clone()
    };
    let output = run_experiment(&grid)?;
    let mut findings = Vec::new();
    for &method in &grid.methods {
        for kind in &grid.models {
            let label = kind.label();
            let get = |mode| output.aggregate(method, mode, &label).map(|a| a.mse_mean).unwrap_or(f64::NAN);
            let (raw, leaked, causal) = (
                get(PipelineMode::RawOnly),
                get(PipelineMode::Leaked),
                get(PipelineMode::Causal),
            );
            let test = welch_t_test(
                &output.mse_values(method, PipelineMode::Leaked, &label),
                &output.mse_values(method, PipelineMode::Causal, &label),
            )
            .ok();
            let significant = test.as_ref().is_some_and(|w| w.p < AUDIT_ALPHA);
            let verdict = if significant && leaked < causal {
                "LEAKAGE: the leaked pipeline's gain disappears under causal decomposition"
            } else if !(leaked.is_finite() && causal.is_finite()) {
                "INCONCLUSIVE: failed cells"
            } else {
                "no significant leaked-vs-causal gap"
            };
            findings.push(AuditFinding {
                method,
                model: label,
                raw_mse: raw,
                leaked_mse: leaked,
                causal_mse: causal,
                leaked_change: leaked / raw - 1.0,
                causal_change: causal / raw - 1.0,
                t: test.as_ref().map(|w| w.t),
                p: test.as_ref().map(|w| w.p),
                verdict: verdict.into(),
            });
        }
    }
    Ok((output, findings))
}
