use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::data::{gen_synthetic, load_csv, SyntheticSpec};
use crate::decomposition::{DecompositionConfig, Method};
use crate::error::{Error, Result};
use crate::models::{ModelKind, TrainConfig};
use crate::pipeline::{CausalScheduleConfig, PipelineMode};
use crate::series::{SplitSpec, TimeSeries, WindowSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetSource {
    Csv {
        path: PathBuf,
        #[serde(default)]
        column: Option<String>,
        #[serde(default)]
        name: Option<String>,
    },
    Synthetic(SyntheticSpec),
}

impl DatasetSource {
    pub fn load(&self) -> Result<TimeSeries> {
        match self {
            DatasetSource::Csv { path, column, name } => {
                let s = load_csv(path, column.as_deref())?;
                match name {
                    Some(n) => TimeSeries::new(n.clone(), s.values().to_vec()),
                    None => Ok(s),
                }
            }
            DatasetSource::Synthetic(spec) => gen_synthetic(spec),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DatasetSource::Csv { path, name, .. } => name.clone().unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "csv".into())
            }),
            DatasetSource::Synthetic(_) => "synthetic".into(),
        }
    }
}

/// How non-leaked modes build their training windows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalTraining {
    /// One decomposition of the whole training split.
    Single,
    /// A prefix decomposition per training target, like the test steps.
    #[default]
    WalkForward,
}

/// Where leaked modes take their training windows from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakedTraining {
    /// The training rows of the whole-series decomposition.
    #[default]
    FullSeries,
    /// A separate decomposition of the training split.
    TrainSplit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub dataset: DatasetSource,
    pub methods: Vec<Method>,
    #[serde(with = "mode_list")]
    pub modes: Vec<PipelineMode>,
    pub models: Vec<ModelKind>,
    #[serde(default = "default_seeds")]
    pub n_seeds: usize,
    /// Seed of the first repeat; repeat k uses `base_seed + k`.
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub causal_training: CausalTraining,
    #[serde(default)]
    pub leaked_training: LeakedTraining,
    #[serde(default)]
    pub schedule: CausalScheduleConfig,
    #[serde(default)]
    pub decomposition: DecompositionConfig,
    #[serde(default)]
    pub train: TrainConfig,
    /// 0 lets the thread pool choose.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Also write wall-clock timings (not byte-reproducible).
    #[serde(default)]
    pub emit_timings: bool,
}

fn default_name() -> String {
    "experiment".into()
}
fn default_seeds() -> usize {
    5
}
fn default_window() -> usize {
    12
}
fn default_train_fraction() -> f64 {
    0.75
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

mod mode_list {
    use super::PipelineMode;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(modes: &[PipelineMode], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(modes.iter().map(|m| m.label()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<PipelineMode>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| PipelineMode::parse(s).map_err(D::Error::custom))
            .collect()
    }
}

impl ExperimentConfig {
    /// The leaked-vs-causal SSA grid on the standard synthetic fixture. The
    /// SSA embedding window matches the forecasting window.
    pub fn standard(models: Vec<ModelKind>) -> Self {
        let mut decomposition = DecompositionConfig::default();
        decomposition.ssa.window = Some(default_window());
        Self {
            name: "standard-fixture".into(),
            dataset: DatasetSource::Synthetic(SyntheticSpec::standard_fixture()),
            methods: vec![Method::Ssa],
            modes: vec![PipelineMode::RawOnly, PipelineMode::Leaked, PipelineMode::Causal],
            models,
            n_seeds: default_seeds(),
            base_seed: 0,
            window: default_window(),
            train_fraction: default_train_fraction(),
            causal_training: CausalTraining::default(),
            leaked_training: LeakedTraining::default(),
            schedule: CausalScheduleConfig::default(),
            decomposition,
            train: TrainConfig::default(),
            workers: 0,
            out: default_out(),
            emit_timings: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("at least one method is required".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::InvalidConfig("at least one pipeline mode is required".into()));
        }
        if self.models.is_empty() {
            return Err(Error::InvalidConfig("at least one model is required".into()));
        }
        if self.n_seeds == 0 {
            return Err(Error::InvalidConfig("n_seeds must be at least 1".into()));
        }
        for m in &self.models {
            if let ModelKind::Ridge { lambda } = m {
                if !(*lambda >= 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidConfig("ridge lambda must be finite and >= 0".into()));
                }
            }
        }
        WindowSpec::new(self.window)?;
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidConfig("train_fraction must lie in (0, 1)".into()));
        }
        self.schedule.validate()?;
        self.train.validate()?;
        if let DatasetSource::Synthetic(spec) = &self.dataset {
            spec.validate()?;
        }
        Ok(())
    }

    pub fn window_spec(&self) -> WindowSpec {
        WindowSpec { window: self.window }
    }

    pub fn split_for(&self, series: &TimeSeries) -> Result<SplitSpec> {
        SplitSpec::new(series.len(), self.train_fraction)
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.n_seeds as u64).map(move |k| self.base_seed + k)
    }

    /// The config without execution settings (output path, worker count),
    /// which never change results.
    pub fn canonical(&self) -> Self {
        Self {
            out: PathBuf::new(),
            workers: 0,
            ..self.clone()
        }
    }

    /// SHA-256 over the canonical TOML rendering.
    pub fn hash(&self) -> Result<String> {
        let text = self.canonical().to_toml()?;
        Ok(hex::encode(Sha256::digest(text.as_bytes())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
name = "demo"
methods = ["ssa", "emd"]
modes = ["raw_only", "leaked", "causal", "single1_leaked"]
n_seeds = 3
window = 8
causal_training = "walk_forward"

[[models]]
kind = "persistence"

[[models]]
kind = "ridge"
lambda = 0.001

[[models]]
kind = "mlp"
hidden = [16, 16, 16]

[dataset.synthetic]
length = 400
seed = 7
tones = [{ amplitude = 1.0, frequency = 0.05 }]
noise = { kind = "ar1", sigma = 0.1, ar_coefficient = 0.5 }

[decomposition.ssa]
window = 12

[train]
max_epochs = 20
optimizer = "adam"
learning_rate = 0.001
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(cfg.methods, vec![Method::Ssa, Method::Emd]);
        assert_eq!(cfg.modes[3], PipelineMode::SingleComponent { index: 1, leaked: true });
        assert_eq!(cfg.models[2], ModelKind::Mlp { hidden: vec![16, 16, 16] });
        assert_eq!(cfg.causal_training, CausalTraining::WalkForward);
        assert_eq!(cfg.leaked_training, LeakedTraining::FullSeries);
        let split = SAMPLE.replace("causal_training", "leaked_training = \"train_split\"\ncausal_training");
        let split = ExperimentConfig::from_toml_str(&split).unwrap();
        assert_eq!(split.leaked_training, LeakedTraining::TrainSplit);
        assert_eq!(cfg.train.batch_size, 32);
        assert_eq!(cfg.decomposition.ssa.window, Some(12));
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.hash().unwrap(), cfg.hash().unwrap());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str(&SAMPLE.replace("n_seeds = 3", "n_seeds = 0")).is_err());
        assert!(ExperimentConfig::from_toml_str(&SAMPLE.replace("\"leaked\",", "\"sideways\",")).is_err());
        assert!(ExperimentConfig::from_toml_str(&SAMPLE.replace("frequency = 0.05", "frequency = 0.7")).is_err());
        assert!(ExperimentConfig::from_toml_str(&SAMPLE.replace("window = 8", "window = 8\nbogus = 1")).is_err());
        let err = ExperimentConfig::from_toml_str("not toml [").unwrap_err();
        assert_eq!(err.category(), crate::error::ErrorCategory::Config);
    }

    #[test]
    fn hash_ignores_output_dir() {
        let mut a = ExperimentConfig::standard(vec![ModelKind::Persistence]);
        let h = a.hash().unwrap();
        a.out = PathBuf::from("/elsewhere");
        a.workers = 7;
        assert_eq!(a.hash().unwrap(), h);
        a.n_seeds = 2;
        assert_ne!(a.hash().unwrap(), h);
    }
}
