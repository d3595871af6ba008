//! Forecasters: persistence, ridge autoregression and an MLP trained with
//! mini-batch gradient descent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Window;

pub mod mlp;
pub mod optim;
pub mod ridge;
mod train;

pub use mlp::{Loss, MlpParams};
pub use optim::{adagrad_step, adam_step, OptimizerKind, OptimizerState};
pub use ridge::{ridge_fit, RidgeParams};
pub use train::{train, TrainConfig, TrainingHistory};

/// Last value of a single-channel window.
pub fn persistence_predict(window: &[f64]) -> f64 {
    *window.last().expect("persistence needs a non-empty window")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    Persistence,
    Ridge { lambda: f64 },
    Mlp { hidden: Vec<usize> },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Persistence => "persistence",
            ModelKind::Ridge { .. } => "ridge",
            ModelKind::Mlp { .. } => "mlp",
        }
    }

    /// Report label that also carries the hyperparameters.
    pub fn label(&self) -> String {
        match self {
            ModelKind::Persistence => "persistence".into(),
            ModelKind::Ridge { lambda } => format!("ridge_l{lambda}"),
            ModelKind::Mlp { hidden } => {
                let widths: Vec<String> = hidden.iter().map(usize::to_string).collect();
                format!("mlp_{}", widths.join("x"))
            }
        }
    }

    /// Whether the fitted model depends on the training seed.
    pub fn is_stochastic(&self) -> bool {
        matches!(self, ModelKind::Mlp { .. })
    }

    pub fn default_mlp() -> Self {
        ModelKind::Mlp { hidden: vec![64, 64, 64] }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelParams {
    Persistence,
    Ridge(RidgeParams),
    Mlp(MlpParams),
}

pub const PARAMS_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ParamsDocument {
    version: u32,
    params: ModelParams,
    history: Option<TrainingHistory>,
}

impl ModelParams {
    pub fn predict(&self, window: &Window) -> Result<f64> {
        match self {
            ModelParams::Persistence => Ok(window.last_raw()),
            ModelParams::Ridge(p) => {
                if p.coefficients.len() != window.inputs.len() {
                    return Err(Error::InvalidInput("ridge width does not match window".into()));
                }
                Ok(p.predict(&window.inputs))
            }
            ModelParams::Mlp(p) => p.forward(&window.inputs),
        }
    }

    pub fn predict_all(&self, windows: &[Window]) -> Result<Vec<f64>> {
        windows.iter().map(|w| self.predict(w)).collect()
    }

    /// Versioned JSON with row-major layer values and optional history.
    pub fn to_json(&self, history: Option<&TrainingHistory>) -> Result<String> {
        let doc = ParamsDocument {
            version: PARAMS_FORMAT_VERSION,
            params: self.clone(),
            history: history.cloned(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<(ModelParams, Option<TrainingHistory>)> {
        let doc: ParamsDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("bad params document: {e}")))?;
        if doc.version != PARAMS_FORMAT_VERSION {
            return Err(Error::InvalidInput(format!("unsupported params version {}", doc.version)));
        }
        if let ModelParams::Mlp(p) = &doc.params {
            let expect: usize = p.sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
            if p.sizes.len() < 2 || p.values.len() != expect {
                return Err(Error::InvalidInput("MLP layer shapes do not match value count".into()));
            }
        }
        Ok((doc.params, doc.history))
    }
}
