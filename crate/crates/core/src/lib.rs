//! Decomposition-based one-step-ahead forecasting with leaked and strictly
//! causal feature pipelines, plus the experiment harness that measures how
//! much future-information leakage inflates accuracy.

pub mod decomposition;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod pipeline;
pub mod series;
pub mod spectral;

pub use decomposition::{decompose, ComponentSet, DecompositionConfig, Method};
pub use error::{Error, ErrorCategory, Result};
pub use models::{ModelKind, ModelParams, TrainConfig, TrainingHistory};
pub use pipeline::{CausalScheduleConfig, FeatureMatrix, PipelineMode, StepFeatures};
pub use series::{
    make_windows, minmax_apply, minmax_fit, minmax_invert, split_chronological, ScalerParams, SplitSpec, TimeSeries,
    Window, WindowSpec,
};
