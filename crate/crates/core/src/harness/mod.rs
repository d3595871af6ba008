//! Experiment orchestration: datasets, the leaked-vs-causal grid, ablation,
//! component summation, audit and report emission.

mod config;
mod data;
mod report;
mod run;

pub use config::{CausalTraining, DatasetSource, ExperimentConfig, LeakedTraining};
pub use data::{
    gen_synthetic, load_csv, registry_entry, DatasetRegistryEntry, NoiseKind, NoiseSpec, RegistryCheck, SyntheticSpec,
    Tone, DATASET_REGISTRY,
};
pub use report::{emit_reports, AGGREGATE_FILE, AGGREGATE_HEADER, MANIFEST_FILE, RESULTS_FILE, TIMINGS_FILE};
pub use run::{
    aggregate, audit, run_ablation, run_experiment, run_summation, AblationEntry, AblationOutput, AggregateRow,
    AuditFinding, ComponentSpectrum, ExperimentOutput, ResultRow, AUDIT_ALPHA,
};
