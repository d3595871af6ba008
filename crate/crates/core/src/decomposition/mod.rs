//! Signal decompositions that split a series into same-length components
//! summing back to the input: empirical mode decomposition, a single-level
//! db5 wavelet split, and singular spectrum analysis.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub mod dwt;
pub mod emd;
pub mod spline;
pub mod ssa;

pub use dwt::{dwt_decompose, DwtConfig, DB5_LOWPASS};
pub use emd::{count_extrema, count_zero_crossings, emd_decompose, is_imf, EmdConfig};
pub use ssa::{ssa_decompose, SsaConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Emd,
    Dwt,
    Ssa,
    /// Pass-through: one component equal to the input. Strictly causal, so it
    /// is the reference case for "no leakage".
    Identity,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Emd => "emd",
            Method::Dwt => "dwt",
            Method::Ssa => "ssa",
            Method::Identity => "identity",
        }
    }

    /// Shortest series the method accepts.
    pub fn min_len(self, cfg: &DecompositionConfig) -> usize {
        match self {
            Method::Emd => 4,
            Method::Dwt => cfg.dwt.filter_len(),
            Method::Ssa => cfg.ssa.window.map_or(3, |l| l + 1),
            Method::Identity => 1,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "emd" => Ok(Method::Emd),
            "dwt" => Ok(Method::Dwt),
            "ssa" => Ok(Method::Ssa),
            "identity" | "none" => Ok(Method::Identity),
            other => Err(Error::InvalidConfig(format!("unknown decomposition method {other:?}"))),
        }
    }
}

/// Per-method parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecompositionConfig {
    pub emd: EmdConfig,
    pub dwt: DwtConfig,
    pub ssa: SsaConfig,
}

/// Components of one series, all of the parent's length.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSet {
    pub method: Method,
    pub labels: Vec<String>,
    pub components: Vec<Vec<f64>>,
}

impl ComponentSet {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Length of each component (the parent series length).
    pub fn series_len(&self) -> usize {
        self.components.first().map_or(0, Vec::len)
    }

    pub fn component(&self, label: &str) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.components[i].as_slice())
    }

    /// Element-wise sum of all components.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.series_len()];
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(c) {
                *o += v;
            }
        }
        out
    }

    /// CSV with one column per component.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = self.labels.join(",");
        out.push('\n');
        for t in 0..self.series_len() {
            let row: Vec<String> = self.components.iter().map(|c| c[t].to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        std::fs::File::create(path)
            .and_then(|mut f| f.write_all(out.as_bytes()))
            .map_err(|e| Error::io(path, e))
    }
}

/// Dispatch to the configured method.
pub fn decompose(series: &TimeSeries, method: Method, cfg: &DecompositionConfig) -> Result<ComponentSet> {
    match method {
        Method::Emd => emd_decompose(series, &cfg.emd),
        Method::Dwt => dwt_decompose(series, &cfg.dwt),
        Method::Ssa => ssa_decompose(series, &cfg.ssa),
        Method::Identity => Ok(ComponentSet {
            method,
            labels: vec!["X".into()],
            components: vec![series.values().to_vec()],
        }),
    }
}

/// Slice-based entry point used by the per-step pipelines.
pub(crate) fn decompose_values(values: &[f64], method: Method, cfg: &DecompositionConfig) -> Result<ComponentSet> {
    let series = TimeSeries::new("prefix", values.to_vec())?;
    decompose(&series, method, cfg)
}
