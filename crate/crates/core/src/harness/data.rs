use std::f64::consts::PI;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub amplitude: f64,
    /// Cycles per sample, in (0, 0.5).
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    White,
    Ar1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub sigma: f64,
    #[serde(default)]
    pub ar_coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub length: usize,
    pub tones: Vec<Tone>,
    pub noise: NoiseSpec,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Two tones (0.05 and 0.003 cycles/sample) under white noise.
    pub fn standard_fixture() -> Self {
        Self {
            length: 2000,
            tones: vec![
                Tone {
                    amplitude: 1.0,
                    frequency: 0.05,
                    phase: 0.0,
                },
                Tone {
                    amplitude: 2.0,
                    frequency: 0.003,
                    phase: 0.0,
                },
            ],
            noise: NoiseSpec {
                kind: NoiseKind::White,
                sigma: 0.5,
                ar_coefficient: 0.0,
            },
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::InvalidConfig("synthetic length must be positive".into()));
        }
        for t in &self.tones {
            if !(t.frequency > 0.0 && t.frequency < 0.5) {
                return Err(Error::InvalidConfig(format!(
                    "tone frequency {} outside (0, 0.5)",
                    t.frequency
                )));
            }
            if !t.amplitude.is_finite() || !t.phase.is_finite() {
                return Err(Error::InvalidConfig("tone amplitude and phase must be finite".into()));
            }
        }
        if !(self.noise.sigma >= 0.0 && self.noise.sigma.is_finite()) {
            return Err(Error::InvalidConfig("noise sigma must be finite and >= 0".into()));
        }
        if self.noise.kind == NoiseKind::Ar1 && !(self.noise.ar_coefficient.abs() < 1.0) {
            return Err(Error::InvalidConfig("AR(1) coefficient must lie in (-1, 1)".into()));
        }
        Ok(())
    }
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let phi = match spec.noise.kind {
        NoiseKind::White => 0.0,
        NoiseKind::Ar1 => spec.noise.ar_coefficient,
    };
    let mut noise = 0.0;
    let values = (0..spec.length)
        .map(|n| {
            let z: f64 = StandardNormal.sample(&mut rng);
            noise = phi * noise + spec.noise.sigma * z;
            let signal: f64 = spec
                .tones
                .iter()
                .map(|t| t.amplitude * (2.0 * PI * t.frequency * n as f64 + t.phase).sin())
                .sum();
            signal + noise
        })
        .collect();
    TimeSeries::new("synthetic", values)
}

/// Read one numeric column. `column = None` takes the first column.
pub fn load_csv(path: &Path, column: Option<&str>) -> Result<TimeSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let idx = match column {
        None => 0,
        Some(name) => headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            path: path.into(),
            row: 0,
            message: format!("no column named `{name}`"),
        })?,
    };
    let name = headers.get(idx).unwrap_or("series").to_string();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            path: path.into(),
            row,
            message: e.to_string(),
        })?;
        let cell = record.get(idx).unwrap_or("");
        let v: f64 = cell.parse().map_err(|_| Error::Parse {
            path: path.into(),
            row,
            message: format!("`{cell}` is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                path: path.into(),
                row,
                message: format!("non-finite value `{cell}`"),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Parse {
            path: path.into(),
            row: 0,
            message: format!("column `{name}` is empty"),
        });
    }
    TimeSeries::new(name, values)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Parse {
            path: path.into(),
            row: 0,
            message: format!("{other:?}"),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DatasetRegistryEntry {
    pub name: &'static str,
    pub unit: &'static str,
    pub source_url: &'static str,
    pub length: usize,
    pub train_len: usize,
    pub mean: f64,
    pub std: f64,
}

pub const DATASET_REGISTRY: [DatasetRegistryEntry; 6] = [
    DatasetRegistryEntry {
        name: "Hs",
        unit: "m",
        source_url: "http://cdip.ucsd.edu/offline/wavecdf/wncbrowse.php?ARCHIVE/150p1/150p1",
        length: 70_128,
        train_len: 52_596,
        mean: 0.945,
        std: 0.414,
    },
    DatasetRegistryEntry {
        name: "WSPD",
        unit: "m/s",
        source_url: "https://www.ndbc.noaa.gov/",
        length: 32_158,
        train_len: 24_118,
        mean: 5.58,
        std: 3.18,
    },
    DatasetRegistryEntry {
        name: "U",
        unit: "%",
        source_url: "https://www.kaggle.com/datasets/l3l1ff/electrical-grid-power-mw-20152021",
        length: 228_526,
        train_len: 171_394,
        mean: 74.2,
        std: 19.5,
    },
    DatasetRegistryEntry {
        name: "GHI",
        unit: "kWh/m2",
        source_url: "https://solargis.com/products/evaluate/useful-resources",
        length: 9_952,
        train_len: 7_464,
        mean: 5.14,
        std: 2.25,
    },
    DatasetRegistryEntry {
        name: "P",
        unit: "Pa",
        source_url: "http://maps.nrel.gov/wind_prospector",
        length: 140_160,
        train_len: 105_120,
        mean: 100_470.0,
        std: 555.0,
    },
    DatasetRegistryEntry {
        name: "T",
        unit: "degC",
        source_url: "http://maps.nrel.gov/wind_prospector",
        length: 140_160,
        train_len: 105_120,
        mean: 13.1,
        std: 4.12,
    },
];

pub fn registry_entry(name: &str) -> Option<&'static DatasetRegistryEntry> {
    DATASET_REGISTRY.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegistryCheck {
    pub length_ok: bool,
    pub mean: f64,
    pub mean_ok: bool,
    pub std: f64,
    pub std_ok: bool,
}

impl RegistryCheck {
    pub fn passed(&self) -> bool {
        self.length_ok && self.mean_ok && self.std_ok
    }
}

impl DatasetRegistryEntry {
    /// Compare a local copy against the published statistics. `rel_tol`
    /// applies to mean and std (the table rounds to three figures).
    pub fn verify(&self, series: &TimeSeries, rel_tol: f64) -> RegistryCheck {
        let mean = series.mean();
        let std = series.std_dev();
        RegistryCheck {
            length_ok: series.len() == self.length,
            mean,
            mean_ok: (mean - self.mean).abs() <= rel_tol * self.mean.abs(),
            std,
            std_ok: (std - self.std).abs() <= rel_tol * self.std.abs(),
        }
    }
}
