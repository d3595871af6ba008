//! Single-level Daubechies-5 wavelet split into approximation (AC) and
//! detail (DC) contributions at full resolution.
//!
//! The input is extended half-sample symmetrically to `[x, reverse(x)]`,
//! which is periodic with period `2N`. A periodic orthonormal analysis and
//! synthesis on that extension reconstructs it exactly, and the first `N`
//! samples of each band's synthesis are the returned components.

use serde::{Deserialize, Serialize};

use super::{ComponentSet, Method};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// db5 scaling (reconstruction lowpass) filter.
pub const DB5_LOWPASS: [f64; 10] = [
    0.160_102_397_974_192_93,
    0.603_829_269_797_189_6,
    0.724_308_528_437_772_9,
    0.138_428_145_901_320_74,
    -0.242_294_887_066_382_03,
    -0.032_244_869_584_638_375,
    0.077_571_493_840_045_72,
    -0.006_241_490_212_798_274,
    -0.012_580_751_999_081_999,
    0.003_335_725_285_473_771_2,
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DwtConfig {
    lowpass: Vec<f64>,
}

impl Default for DwtConfig {
    fn default() -> Self {
        Self {
            lowpass: DB5_LOWPASS.to_vec(),
        }
    }
}

impl DwtConfig {
    /// Use an arbitrary orthonormal lowpass filter (even length).
    pub fn from_lowpass(lowpass: Vec<f64>) -> Result<Self> {
        if lowpass.len() < 2 || lowpass.len() % 2 != 0 {
            return Err(Error::InvalidConfig("wavelet filter length must be even and >= 2".into()));
        }
        Ok(Self { lowpass })
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    /// Quadrature mirror: `g[n] = (-1)^n h[len-1-n]`.
    pub fn highpass(&self) -> Vec<f64> {
        let len = self.lowpass.len();
        (0..len)
            .map(|n| {
                let v = self.lowpass[len - 1 - n];
                if n % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }

    pub fn filter_len(&self) -> usize {
        self.lowpass.len()
    }
}

/// `c[k] = sum_n f[n] y[(2k + n) mod m]`
fn analyze(y: &[f64], f: &[f64]) -> Vec<f64> {
    let m = y.len();
    (0..m / 2)
        .map(|k| f.iter().enumerate().map(|(n, fv)| fv * y[(2 * k + n) % m]).sum())
        .collect()
}

/// Adjoint of `analyze`, restricted to the first `keep` output samples.
fn synthesize(c: &[f64], f: &[f64], m: usize, keep: usize) -> Vec<f64> {
    let mut out = vec![0.0; m];
    for (k, ck) in c.iter().enumerate() {
        for (n, fv) in f.iter().enumerate() {
            out[(2 * k + n) % m] += ck * fv;
        }
    }
    out.truncate(keep);
    out
}

pub fn dwt_decompose(series: &TimeSeries, cfg: &DwtConfig) -> Result<ComponentSet> {
    let x = series.values();
    let n = x.len();
    if n < cfg.filter_len() {
        return Err(Error::InsufficientData {
            needed: cfg.filter_len(),
            got: n,
        });
    }
    let extended: Vec<f64> = x.iter().chain(x.iter().rev()).copied().collect();
    let m = extended.len();
    let h = cfg.lowpass();
    let g = cfg.highpass();
    let approx = analyze(&extended, h);
    let detail = analyze(&extended, &g);
    Ok(ComponentSet {
        method: Method::Dwt,
        labels: vec!["AC".into(), "DC".into()],
        components: vec![synthesize(&approx, h, m, n), synthesize(&detail, &g, m, n)],
    })
}
