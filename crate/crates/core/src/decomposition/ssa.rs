//! Singular spectrum analysis with a fixed three-way grouping: leading
//! eigentriple, second eigentriple, and everything else.

use serde::{Deserialize, Serialize};

use super::{ComponentSet, Method};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::series::TimeSeries;

/// Upper bound on the default embedding window.
pub const DEFAULT_MAX_WINDOW: usize = 50;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SsaConfig {
    /// Embedding window `L`; `None` picks `min(N / 2, 50)`.
    pub window: Option<usize>,
}

impl SsaConfig {
    pub fn with_window(window: usize) -> Self {
        Self { window: Some(window) }
    }

    pub fn window_for(&self, n: usize) -> usize {
        self.window.unwrap_or_else(|| (n / 2).clamp(2, DEFAULT_MAX_WINDOW))
    }
}

/// `S = X X^T` for the `l x k` trajectory matrix of `x`, using the lag
/// recurrence `S[i+1][j+1] = S[i][j] - x[i]x[j] + x[i+k]x[j+k]`.
fn lagged_gram(x: &[f64], l: usize, k: usize) -> Vec<f64> {
    let mut s = vec![0.0; l * l];
    for d in 0..l {
        let v: f64 = (0..k).map(|t| x[t] * x[t + d]).sum();
        s[d] = v;
        s[d * l] = v;
    }
    for i in 0..l - 1 {
        for j in i..l - 1 {
            let v = s[i * l + j] - x[i] * x[j] + x[i + k] * x[j + k];
            s[(i + 1) * l + j + 1] = v;
            s[(j + 1) * l + i + 1] = v;
        }
    }
    s
}

/// Diagonal averaging of the rank-one matrix `u v^T` into a length
/// `l + k - 1` series.
fn hankelize_rank_one(u: &[f64], v: &[f64]) -> Vec<f64> {
    let (l, k) = (u.len(), v.len());
    let n = l + k - 1;
    let mut out = vec![0.0; n];
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            out[i + j] += ui * vj;
        }
    }
    for (t, o) in out.iter_mut().enumerate() {
        let lo = t.saturating_sub(k - 1);
        let hi = t.min(l - 1);
        *o /= (hi - lo + 1) as f64;
    }
    out
}

pub fn ssa_decompose(series: &TimeSeries, cfg: &SsaConfig) -> Result<ComponentSet> {
    let x = series.values();
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let l = cfg.window_for(n);
    if l < 2 || l > n - 1 {
        return Err(Error::InvalidConfig(format!(
            "SSA window {l} outside 2..={} for a series of length {n}",
            n - 1
        )));
    }
    let k = n - l + 1;
    let gram = lagged_gram(x, l, k);
    let eig = symmetric_eigen(&gram, l)?;

    // Group {1} and {2} via their left singular vectors; the remaining
    // eigentriples sum to the identity minus those two projections, whose
    // hankelization is the input minus the first two components.
    let mut components = Vec::with_capacity(3);
    for u in eig.vectors.iter().take(2) {
        let v: Vec<f64> = (0..k).map(|j| (0..l).map(|i| u[i] * x[i + j]).sum()).collect();
        components.push(hankelize_rank_one(u, &v));
    }
    let rest: Vec<f64> = (0..n)
        .map(|t| x[t] - components[0][t] - components[1][t])
        .collect();
    components.push(rest);
    Ok(ComponentSet {
        method: Method::Ssa,
        labels: vec!["SSA1".into(), "SSA2".into(), "SSA3".into()],
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_matches_direct_product() {
        let x: Vec<f64> = (0..20).map(|t| ((t * 37) % 11) as f64 - 4.0).collect();
        let (l, k) = (6, 15);
        let s = lagged_gram(&x, l, k);
        for i in 0..l {
            for j in 0..l {
                let direct: f64 = (0..k).map(|t| x[i + t] * x[j + t]).sum();
                assert!((s[i * l + j] - direct).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn default_window() {
        let cfg = SsaConfig::default();
        assert_eq!(cfg.window_for(2000), 50);
        assert_eq!(cfg.window_for(40), 20);
        assert_eq!(cfg.window_for(3), 2);
    }

    #[test]
    fn window_bounds() {
        let s = TimeSeries::new("s", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        for w in [1, 4, 10] {
            assert!(matches!(
                ssa_decompose(&s, &SsaConfig::with_window(w)),
                Err(Error::InvalidConfig(_))
            ));
        }
        assert!(ssa_decompose(&s, &SsaConfig::with_window(3)).is_ok());
        let short = TimeSeries::new("s", vec![1.0, 2.0]).unwrap();
        assert!(ssa_decompose(&short, &SsaConfig::default()).is_err());
    }
}
