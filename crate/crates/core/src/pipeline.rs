//! Feature construction for the leaked and the strictly causal protocols.
//!
//! Channel 0 is always the raw series; the remaining channels are the
//! decomposed components, aligned by label to the training decomposition.

use std::fmt;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{decompose_values, ComponentSet, DecompositionConfig, Method};
use crate::error::{Error, Result};
use crate::series::{make_windows, minmax_apply, minmax_fit, ScalerParams, SplitSpec, TimeSeries, Window, WindowSpec};

pub const RAW_LABEL: &str = "raw";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PipelineMode {
    RawOnly,
    Leaked,
    Causal,
    /// Raw channel plus component `index` (1-based channel index).
    SingleComponent { index: usize, leaked: bool },
    /// One model per component, predictions summed.
    Summation { leaked: bool },
}

impl PipelineMode {
    /// Whether test features come from the whole-series decomposition.
    pub fn is_leaked(&self) -> bool {
        match *self {
            PipelineMode::Leaked => true,
            PipelineMode::SingleComponent { leaked, .. } | PipelineMode::Summation { leaked } => leaked,
            PipelineMode::RawOnly | PipelineMode::Causal => false,
        }
    }

    pub fn uses_components(&self) -> bool {
        !matches!(self, PipelineMode::RawOnly)
    }

    pub fn label(&self) -> String {
        let tag = |leaked: bool| if leaked { "leaked" } else { "causal" };
        match *self {
            PipelineMode::RawOnly => "raw_only".into(),
            PipelineMode::Leaked => "leaked".into(),
            PipelineMode::Causal => "causal".into(),
            PipelineMode::SingleComponent { index, leaked } => format!("single{index}_{}", tag(leaked)),
            PipelineMode::Summation { leaked } => format!("summation_{}", tag(leaked)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unknown pipeline mode `{s}`"));
        let leaked_flag = |t: &str| match t {
            "leaked" => Ok(true),
            "causal" => Ok(false),
            _ => Err(bad()),
        };
        match s {
            "raw_only" | "raw" => Ok(PipelineMode::RawOnly),
            "leaked" => Ok(PipelineMode::Leaked),
            "causal" => Ok(PipelineMode::Causal),
            _ => {
                if let Some(rest) = s.strip_prefix("summation_") {
                    return Ok(PipelineMode::Summation { leaked: leaked_flag(rest)? });
                }
                let rest = s.strip_prefix("single").ok_or_else(bad)?;
                let (index, tag) = rest.split_once('_').ok_or_else(bad)?;
                Ok(PipelineMode::SingleComponent {
                    index: index.parse().map_err(|_| bad())?,
                    leaked: leaked_flag(tag)?,
                })
            }
        }
    }
}

impl fmt::Display for PipelineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureOrigin {
    Train,
    Leaked,
    Causal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CausalScheduleConfig {
    pub refresh_stride: usize,
}

impl Default for CausalScheduleConfig {
    fn default() -> Self {
        Self { refresh_stride: 1 }
    }
}

impl CausalScheduleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.refresh_stride == 0 {
            return Err(Error::InvalidConfig("refresh_stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Contiguous channels of equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub method: Method,
    pub labels: Vec<String>,
    pub channels: Vec<Vec<f64>>,
    pub origin: FeatureOrigin,
}

impl FeatureMatrix {
    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_components(&self) -> usize {
        self.channels.len() - 1
    }

    /// The first `len` rows of every channel.
    pub fn head(&self, len: usize) -> FeatureMatrix {
        FeatureMatrix {
            channels: self.channels.iter().map(|c| c[..len].to_vec()).collect(),
            ..self.clone()
        }
    }

    pub fn component_labels(&self) -> &[String] {
        &self.labels[1..]
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut rows = Vec::with_capacity(self.len());
        for t in 0..self.len() {
            let mut row = vec![t.to_string()];
            row.extend(self.channels.iter().map(|c| c[t].to_string()));
            rows.push(row);
        }
        let mut header = vec!["index".to_string()];
        header.extend(self.labels.iter().cloned());
        write_rows(path, &header, &rows)
    }
}

/// One `window × channels` block per forecast step, time-major.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFeatures {
    pub method: Method,
    pub labels: Vec<String>,
    pub origin: FeatureOrigin,
    pub window: usize,
    /// Index of the value each block is used to predict.
    pub target_index: Vec<usize>,
    pub blocks: Vec<Vec<f64>>,
}

impl StepFeatures {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn n_channels(&self) -> usize {
        self.labels.len()
    }

    pub fn block(&self, step: usize) -> &[f64] {
        &self.blocks[step]
    }

    pub fn row(&self, step: usize, r: usize) -> &[f64] {
        let c = self.n_channels();
        &self.blocks[step][r * c..(r + 1) * c]
    }

    /// Long format: one line per (step, lag row).
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut rows = Vec::with_capacity(self.len() * self.window);
        for s in 0..self.len() {
            for r in 0..self.window {
                let mut row = vec![s.to_string(), self.target_index[s].to_string(), r.to_string()];
                row.extend(self.row(s, r).iter().map(f64::to_string));
                rows.push(row);
            }
        }
        let mut header = vec!["step".to_string(), "target_index".into(), "row".into()];
        header.extend(self.labels.iter().cloned());
        write_rows(path, &header, &rows)
    }
}

fn write_rows(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let mut emit = || -> std::io::Result<()> {
        writeln!(out, "{}", header.join(","))?;
        for row in rows {
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()
    };
    emit().map_err(|e| Error::io(path, e))
}

/// Map a component set onto a fixed label layout. Labels missing from
/// `set` become zero channels; labels absent from the layout are folded into
/// the final layout channel (the residual), so the sum is preserved.
pub fn align_components(set: &ComponentSet, layout: &[String]) -> Vec<Vec<f64>> {
    let n = set.series_len();
    let mut out = vec![vec![0.0; n]; layout.len()];
    let last = layout.len() - 1;
    for (label, comp) in set.labels.iter().zip(&set.components) {
        let k = layout.iter().position(|l| l == label).unwrap_or(last);
        for (o, v) in out[k].iter_mut().zip(comp) {
            *o += v;
        }
    }
    out
}

fn with_raw(values: &[f64], components: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut channels = Vec::with_capacity(components.len() + 1);
    channels.push(values.to_vec());
    channels.extend(components);
    channels
}

fn check_len(len: usize, method: Method, cfg: &DecompositionConfig) -> Result<()> {
    let needed = method.min_len(cfg);
    if len < needed {
        return Err(Error::InsufficientData { needed, got: len });
    }
    Ok(())
}

/// Decompose the training subsequence once.
pub fn build_train_features(train: &TimeSeries, method: Method, cfg: &DecompositionConfig) -> Result<FeatureMatrix> {
    check_len(train.len(), method, cfg)?;
    let set = decompose_values(train.values(), method, cfg)?;
    let mut labels = vec![RAW_LABEL.to_string()];
    labels.extend(set.labels.iter().cloned());
    Ok(FeatureMatrix {
        method,
        labels,
        channels: with_raw(train.values(), set.components),
        origin: FeatureOrigin::Train,
    })
}

/// Decompose the entire series and align it to `layout` (the full label
/// list, raw first, as produced by [`build_train_features`]).
pub fn decompose_full_leaked(
    full: &TimeSeries,
    method: Method,
    cfg: &DecompositionConfig,
    layout: &[String],
) -> Result<FeatureMatrix> {
    check_layout(layout)?;
    check_len(full.len(), method, cfg)?;
    let set = decompose_values(full.values(), method, cfg)?;
    Ok(FeatureMatrix {
        method,
        labels: layout.to_vec(),
        channels: with_raw(full.values(), align_components(&set, &layout[1..])),
        origin: FeatureOrigin::Leaked,
    })
}

fn check_layout(layout: &[String]) -> Result<()> {
    if layout.len() < 2 || layout[0] != RAW_LABEL {
        return Err(Error::InvalidConfig("feature layout needs the raw label followed by components".into()));
    }
    Ok(())
}

fn check_split(full: &TimeSeries, split: &SplitSpec, spec: WindowSpec) -> Result<()> {
    if split.total_len != full.len() {
        return Err(Error::InvalidInput(format!(
            "split covers {} points but the series has {}",
            split.total_len,
            full.len()
        )));
    }
    if split.train_len <= spec.window {
        return Err(Error::InsufficientData {
            needed: spec.window + 1,
            got: split.train_len,
        });
    }
    Ok(())
}

/// Slice windows ending just before each target index out of a matrix.
pub fn windows_from_matrix(fm: &FeatureMatrix, targets: &[usize], spec: WindowSpec) -> Result<StepFeatures> {
    let w = spec.window;
    let c = fm.n_channels();
    let mut blocks = Vec::with_capacity(targets.len());
    for &t in targets {
        if t < w || t > fm.len() {
            return Err(Error::InvalidInput(format!("target index {t} has no full window")));
        }
        let mut block = Vec::with_capacity(w * c);
        for r in t - w..t {
            block.extend(fm.channels.iter().map(|ch| ch[r]));
        }
        blocks.push(block);
    }
    Ok(StepFeatures {
        method: fm.method,
        labels: fm.labels.clone(),
        origin: fm.origin,
        window: w,
        target_index: targets.to_vec(),
        blocks,
    })
}

/// Test windows sliced out of the whole-series decomposition.
pub fn build_test_features_leaked(
    full: &TimeSeries,
    split: &SplitSpec,
    method: Method,
    cfg: &DecompositionConfig,
    layout: &[String],
    spec: WindowSpec,
) -> Result<StepFeatures> {
    check_split(full, split, spec)?;
    let fm = decompose_full_leaked(full, method, cfg, layout)?;
    let targets: Vec<usize> = (split.train_len..split.total_len).collect();
    windows_from_matrix(&fm, &targets, spec)
}

/// Test windows where step `t` sees only a decomposition of `x[..t]`.
pub fn build_test_features_causal(
    full: &TimeSeries,
    split: &SplitSpec,
    method: Method,
    cfg: &DecompositionConfig,
    layout: &[String],
    spec: WindowSpec,
    sched: CausalScheduleConfig,
) -> Result<StepFeatures> {
    check_split(full, split, spec)?;
    let targets: Vec<usize> = (split.train_len..split.total_len).collect();
    causal_windows(full.values(), &targets, method, cfg, layout, spec, sched)
}

/// Shortest prefix used when training windows are also built causally.
pub fn walk_forward_warmup(method: Method, cfg: &DecompositionConfig, spec: WindowSpec) -> usize {
    method.min_len(cfg).max(2 * spec.window)
}

/// Training windows built the same way as causal test windows: every
/// target inside the training split gets its own prefix decomposition.
pub fn build_train_features_walk_forward(
    train: &TimeSeries,
    method: Method,
    cfg: &DecompositionConfig,
    layout: &[String],
    spec: WindowSpec,
    sched: CausalScheduleConfig,
) -> Result<StepFeatures> {
    let start = walk_forward_warmup(method, cfg, spec);
    if train.len() <= start {
        return Err(Error::InsufficientData {
            needed: start + 1,
            got: train.len(),
        });
    }
    let targets: Vec<usize> = (start..train.len()).collect();
    causal_windows(train.values(), &targets, method, cfg, layout, spec, sched)
}

fn causal_windows(
    values: &[f64],
    targets: &[usize],
    method: Method,
    cfg: &DecompositionConfig,
    layout: &[String],
    spec: WindowSpec,
    sched: CausalScheduleConfig,
) -> Result<StepFeatures> {
    sched.validate()?;
    check_layout(layout)?;
    let w = spec.window;
    let Some(&first) = targets.first() else {
        return Err(Error::InvalidInput("no forecast steps".into()));
    };
    check_len(first, method, cfg)?;
    if first < w {
        return Err(Error::InsufficientData { needed: w, got: first });
    }
    let stride = sched.refresh_stride;
    // prefix length used by each step; strides reuse the latest refresh
    let prefix_of = |k: usize| first + (k - k % stride);
    let refreshes: Vec<usize> = (0..targets.len()).step_by(stride).map(prefix_of).collect();
    let components: Vec<Vec<Vec<f64>>> = refreshes
        .par_iter()
        .map(|&p| {
            let set = decompose_values(&values[..p], method, cfg)?;
            Ok(align_components(&set, &layout[1..]))
        })
        .collect::<Result<_>>()?;

    let c = layout.len();
    let mut blocks = Vec::with_capacity(targets.len());
    for (k, &t) in targets.iter().enumerate() {
        let comps = &components[k / stride];
        let p = prefix_of(k);
        let mut block = Vec::with_capacity(w * c);
        for r in 0..w {
            block.push(values[t - w + r]);
            // trailing rows of the (possibly stale) prefix decomposition
            block.extend(comps.iter().map(|ch| ch[p - w + r]));
        }
        blocks.push(block);
    }
    Ok(StepFeatures {
        method,
        labels: layout.to_vec(),
        origin: FeatureOrigin::Causal,
        window: w,
        target_index: targets.to_vec(),
        blocks,
    })
}

/// Channel indices kept by a mode, out of `1 + n_components` channels.
pub fn select_channels(n_components: usize, mode: PipelineMode) -> Result<Vec<usize>> {
    match mode {
        PipelineMode::RawOnly => Ok(vec![0]),
        PipelineMode::Leaked | PipelineMode::Causal | PipelineMode::Summation { .. } => {
            Ok((0..=n_components).collect())
        }
        PipelineMode::SingleComponent { index, .. } => {
            if index == 0 || index > n_components {
                return Err(Error::InvalidConfig(format!(
                    "component index {index} outside 1..={n_components}"
                )));
            }
            Ok(vec![0, index])
        }
    }
}

pub fn select_components(features: &FeatureMatrix, mode: PipelineMode) -> Result<FeatureMatrix> {
    let keep = select_channels(features.n_components(), mode)?;
    Ok(FeatureMatrix {
        method: features.method,
        labels: keep.iter().map(|&i| features.labels[i].clone()).collect(),
        channels: keep.iter().map(|&i| features.channels[i].clone()).collect(),
        origin: features.origin,
    })
}

/// Per-label min-max scalers fitted on training channels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelScalers {
    pub labels: Vec<String>,
    pub params: Vec<ScalerParams>,
}

impl ChannelScalers {
    pub fn fit(train: &FeatureMatrix) -> Result<Self> {
        Ok(Self {
            labels: train.labels.clone(),
            params: train.channels.iter().map(|c| minmax_fit(c)).collect::<Result<_>>()?,
        })
    }

    pub fn raw(&self) -> &ScalerParams {
        &self.params[0]
    }

    fn check(&self, labels: &[String]) -> Result<()> {
        if labels != self.labels.as_slice() {
            return Err(Error::InvalidInput("feature labels differ from scaler labels".into()));
        }
        Ok(())
    }

    pub fn apply_matrix(&self, fm: &FeatureMatrix) -> Result<FeatureMatrix> {
        self.check(&fm.labels)?;
        Ok(FeatureMatrix {
            channels: fm.channels.iter().zip(&self.params).map(|(c, p)| minmax_apply(p, c)).collect(),
            ..fm.clone()
        })
    }

    pub fn apply_steps(&self, sf: &StepFeatures) -> Result<StepFeatures> {
        self.check(&sf.labels)?;
        let c = self.params.len();
        let blocks = sf
            .blocks
            .iter()
            .map(|b| b.iter().enumerate().map(|(j, &v)| self.params[j % c].apply_value(v)).collect())
            .collect();
        Ok(StepFeatures { blocks, ..sf.clone() })
    }
}

/// Model windows over the selected channels of a contiguous matrix.
pub fn matrix_windows(fm: &FeatureMatrix, target: &[f64], keep: &[usize], spec: WindowSpec) -> Result<Vec<Window>> {
    let chosen: Vec<Vec<f64>> = keep.iter().map(|&i| fm.channels[i].clone()).collect();
    make_windows(&chosen, target, spec)
}

/// Model windows over the selected channels of per-step blocks; `target`
/// is indexed by each step's target index.
pub fn step_windows(sf: &StepFeatures, target: &[f64], keep: &[usize]) -> Result<Vec<Window>> {
    let c = sf.n_channels();
    if let Some(&bad) = keep.iter().find(|&&i| i >= c) {
        return Err(Error::InvalidConfig(format!("channel {bad} out of range")));
    }
    sf.blocks
        .iter()
        .zip(&sf.target_index)
        .map(|(block, &t)| {
            let y = *target
                .get(t)
                .ok_or_else(|| Error::InvalidInput(format!("no target value at index {t}")))?;
            let mut inputs = Vec::with_capacity(sf.window * keep.len());
            for r in 0..sf.window {
                inputs.extend(keep.iter().map(|&i| block[r * c + i]));
            }
            Ok(Window {
                inputs,
                rows: sf.window,
                channels: keep.len(),
                target: y,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noisy_sine(n: usize) -> TimeSeries {
        let v = (0..n)
            .map(|t| (t as f64 * 0.3).sin() + 0.2 * ((t * 7919 % 101) as f64 / 101.0 - 0.5))
            .collect();
        TimeSeries::new("s", v).unwrap()
    }

    #[test]
    fn mode_labels_round_trip() {
        for m in [
            PipelineMode::RawOnly,
            PipelineMode::Leaked,
            PipelineMode::Causal,
            PipelineMode::SingleComponent { index: 3, leaked: true },
            PipelineMode::SingleComponent { index: 1, leaked: false },
            PipelineMode::Summation { leaked: true },
        ] {
            assert_eq!(PipelineMode::parse(&m.label()).unwrap(), m);
        }
        assert!(PipelineMode::parse("single_x").is_err());
    }

    #[test]
    fn channel_counts() {
        let s = noisy_sine(200);
        let cfg = DecompositionConfig::default();
        assert_eq!(build_train_features(&s, Method::Dwt, &cfg).unwrap().n_channels(), 3);
        assert_eq!(build_train_features(&s, Method::Ssa, &cfg).unwrap().n_channels(), 4);
        let emd = build_train_features(&s, Method::Emd, &cfg).unwrap();
        assert_eq!(emd.labels.last().unwrap(), "Res");
        assert_eq!(emd.labels[0], RAW_LABEL);
    }

    #[test]
    fn selection() {
        let s = noisy_sine(100);
        let fm = build_train_features(&s, Method::Ssa, &DecompositionConfig::default()).unwrap();
        assert_eq!(select_components(&fm, PipelineMode::RawOnly).unwrap().n_channels(), 1);
        let one = select_components(&fm, PipelineMode::SingleComponent { index: 1, leaked: true }).unwrap();
        assert_eq!(one.labels, vec!["raw", "SSA1"]);
        let res = select_components(&fm, PipelineMode::SingleComponent { index: 3, leaked: true }).unwrap();
        assert_eq!(res.labels, vec!["raw", "SSA3"]);
        assert!(select_components(&fm, PipelineMode::SingleComponent { index: 4, leaked: true }).is_err());
        assert!(select_components(&fm, PipelineMode::SingleComponent { index: 0, leaked: true }).is_err());
    }

    #[test]
    fn alignment_zero_fills_and_folds() {
        let set = ComponentSet {
            method: Method::Emd,
            labels: vec!["IMF1".into(), "IMF2".into(), "IMF3".into(), "Res".into()],
            components: vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0], vec![4.0, 4.0]],
        };
        let layout: Vec<String> = ["IMF1", "IMF2", "Res"].map(String::from).to_vec();
        assert_eq!(align_components(&set, &layout), vec![vec![1.0; 2], vec![2.0; 2], vec![7.0; 2]]);
        let wide: Vec<String> = ["IMF1", "IMF2", "IMF3", "IMF4", "Res"].map(String::from).to_vec();
        assert_eq!(align_components(&set, &wide)[3], vec![0.0; 2]);
    }

    #[test]
    fn first_causal_step_matches_training_decomposition() {
        let s = noisy_sine(160);
        let cfg = DecompositionConfig::default();
        let spec = WindowSpec::new(12).unwrap();
        let split = SplitSpec::new(s.len(), 0.75).unwrap();
        for method in [Method::Emd, Method::Dwt, Method::Ssa] {
            let train = build_train_features(&s.prefix(split.train_len).unwrap(), method, &cfg).unwrap();
            let causal =
                build_test_features_causal(&s, &split, method, &cfg, &train.labels, spec, Default::default()).unwrap();
            let tail = windows_from_matrix(&train, &[split.train_len], spec).unwrap();
            assert_eq!(causal.block(0), tail.block(0), "{method}");
        }
    }

    #[test]
    fn stride_reuses_earlier_prefix() {
        let s = noisy_sine(120);
        let cfg = DecompositionConfig::default();
        let spec = WindowSpec::new(6).unwrap();
        let split = SplitSpec::new(s.len(), 0.75).unwrap();
        let layout = build_train_features(&s.prefix(90).unwrap(), Method::Ssa, &cfg).unwrap().labels;
        let every = build_test_features_causal(&s, &split, Method::Ssa, &cfg, &layout, spec, Default::default()).unwrap();
        let sched = CausalScheduleConfig { refresh_stride: 4 };
        let sparse = build_test_features_causal(&s, &split, Method::Ssa, &cfg, &layout, spec, sched).unwrap();
        assert_eq!(every.block(0), sparse.block(0));
        assert_eq!(every.block(4), sparse.block(4));
        assert_ne!(every.block(1), sparse.block(1));
        // raw channel is never stale
        for k in 0..sparse.len() {
            for r in 0..spec.window {
                assert_eq!(sparse.row(k, r)[0], every.row(k, r)[0]);
            }
        }
        assert!(CausalScheduleConfig { refresh_stride: 0 }.validate().is_err());
    }

    #[test]
    fn scaling_uses_train_params() {
        let s = noisy_sine(100);
        let fm = build_train_features(&s, Method::Dwt, &DecompositionConfig::default()).unwrap();
        let sc = ChannelScalers::fit(&fm).unwrap();
        let scaled = sc.apply_matrix(&fm).unwrap();
        for ch in &scaled.channels {
            let lo = ch.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ch.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        }
        let sf = windows_from_matrix(&fm, &[20, 50], WindowSpec::new(5).unwrap()).unwrap();
        let sfs = sc.apply_steps(&sf).unwrap();
        let direct = windows_from_matrix(&scaled, &[20, 50], WindowSpec::new(5).unwrap()).unwrap();
        assert_eq!(sfs.blocks, direct.blocks);
    }

    #[test]
    fn step_windows_match_matrix_windows() {
        let s = noisy_sine(80);
        let fm = build_train_features(&s, Method::Dwt, &DecompositionConfig::default()).unwrap();
        let spec = WindowSpec::new(4).unwrap();
        let keep = [0, 2];
        let a = matrix_windows(&fm, s.values(), &keep, spec).unwrap();
        let targets: Vec<usize> = (4..80).collect();
        let sf = windows_from_matrix(&fm, &targets, spec).unwrap();
        let b = step_windows(&sf, s.values(), &keep).unwrap();
        assert_eq!(a, b);
    }
}
