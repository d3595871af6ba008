//! Empirical mode decomposition by cubic-spline envelope sifting.

use serde::{Deserialize, Serialize};

use super::spline::NaturalSpline;
use super::{ComponentSet, Method};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmdConfig {
    pub max_imfs: usize,
    /// Sifting stops once `sum((h_prev - h)^2) / sum(h_prev^2)` drops below this.
    pub sift_sd_threshold: f64,
    pub max_sift_iterations: usize,
}

impl Default for EmdConfig {
    fn default() -> Self {
        Self {
            max_imfs: 10,
            sift_sd_threshold: 0.2,
            max_sift_iterations: 50,
        }
    }
}

impl EmdConfig {
    fn validate(&self) -> Result<()> {
        if self.max_imfs == 0 || self.max_sift_iterations == 0 {
            return Err(Error::InvalidConfig("EMD counts must be at least 1".into()));
        }
        if !(self.sift_sd_threshold > 0.0) {
            return Err(Error::InvalidConfig("EMD sift threshold must be positive".into()));
        }
        Ok(())
    }
}

/// Indices of interior local maxima and minima. A flat run that is higher
/// (lower) than both neighbours counts once, at its middle.
pub fn find_extrema(x: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let n = x.len();
    let mut i = 1;
    while i + 1 < n {
        if x[i] == x[i - 1] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && x[j + 1] == x[i] {
            j += 1;
        }
        if j + 1 >= n {
            break;
        }
        let (before, after) = (x[i - 1], x[j + 1]);
        let mid = (i + j) / 2;
        if x[i] > before && x[i] > after {
            maxima.push(mid);
        } else if x[i] < before && x[i] < after {
            minima.push(mid);
        }
        i = j + 1;
    }
    (maxima, minima)
}

pub fn count_extrema(x: &[f64]) -> usize {
    let (a, b) = find_extrema(x);
    a.len() + b.len()
}

/// Sign changes between consecutive non-zero samples.
pub fn count_zero_crossings(x: &[f64]) -> usize {
    let mut count = 0;
    let mut prev = 0.0f64;
    for &v in x {
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
            count += 1;
        }
        prev = v;
    }
    count
}

/// Extrema and zero-crossing counts differ by at most one.
pub fn is_imf(x: &[f64]) -> bool {
    count_extrema(x).abs_diff(count_zero_crossings(x)) <= 1
}

/// Spline envelope through the extrema at `idx`, with the two extrema nearest
/// each end mirrored about the end sample.
fn envelope(x: &[f64], idx: &[usize]) -> Result<Vec<f64>> {
    let n = x.len();
    let last = (n - 1) as f64;
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(idx.len() + 4);
    for &p in idx.iter().take(2).rev() {
        knots.push((-(p as f64), x[p]));
    }
    knots.extend(idx.iter().map(|&p| (p as f64, x[p])));
    for &p in idx.iter().rev().take(2) {
        knots.push((2.0 * last - p as f64, x[p]));
    }
    knots.dedup_by(|b, a| b.0 <= a.0);
    let (xs, ys) = knots.into_iter().unzip();
    Ok(NaturalSpline::new(xs, ys)?.eval_grid(n))
}

/// True when there are too few extrema of some kind to build both envelopes.
fn is_exhausted(maxima: &[usize], minima: &[usize]) -> bool {
    maxima.len() < 2 || minima.len() < 2
}

/// Extract one IMF candidate from `r`. Returns `None` if `r` cannot be
/// sifted at all.
fn sift(r: &[f64], cfg: &EmdConfig) -> Result<Option<Vec<f64>>> {
    let mut h = r.to_vec();
    // hard cap once the SD/iteration rules are met but the candidate still
    // violates the extrema/zero-crossing balance
    let hard_cap = cfg.max_sift_iterations * 4;
    let mut sifted = false;
    for iter in 1..=hard_cap {
        let (maxima, minima) = find_extrema(&h);
        if is_exhausted(&maxima, &minima) {
            break;
        }
        let upper = envelope(&h, &maxima)?;
        let lower = envelope(&h, &minima)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for ((v, u), l) in h.iter_mut().zip(&upper).zip(&lower) {
            let mean = 0.5 * (u + l);
            num += mean * mean;
            den += *v * *v;
            *v -= mean;
        }
        sifted = true;
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow("EMD sifting produced non-finite values".into()));
        }
        let sd = if den > 0.0 { num / den } else { 0.0 };
        let converged = sd < cfg.sift_sd_threshold || iter >= cfg.max_sift_iterations;
        if converged && is_imf(&h) {
            break;
        }
    }
    Ok(sifted.then_some(h))
}

/// Decompose into IMF1..IMFm (highest frequency first) plus a residual.
pub fn emd_decompose(series: &TimeSeries, cfg: &EmdConfig) -> Result<ComponentSet> {
    cfg.validate()?;
    let x = series.values();
    if x.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: x.len(),
        });
    }
    let mut residual = x.to_vec();
    let mut imfs: Vec<Vec<f64>> = Vec::new();
    while imfs.len() < cfg.max_imfs {
        let (maxima, minima) = find_extrema(&residual);
        if is_exhausted(&maxima, &minima) {
            break;
        }
        let Some(imf) = sift(&residual, cfg)? else {
            break;
        };
        for (r, v) in residual.iter_mut().zip(&imf) {
            *r -= v;
        }
        imfs.push(imf);
    }
    let mut labels: Vec<String> = (1..=imfs.len()).map(|k| format!("IMF{k}")).collect();
    labels.push("Res".into());
    imfs.push(residual);
    Ok(ComponentSet {
        method: Method::Emd,
        labels,
        components: imfs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn extrema_with_plateaus() {
        let x = [0.0, 1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 0.0, 2.0];
        let (mx, mn) = find_extrema(&x);
        assert_eq!(mx, vec![2]);
        assert_eq!(mn, vec![5]);
        // a plateau that steps up is not an extremum
        let (mx, mn) = find_extrema(&[0.0, 1.0, 1.0, 2.0]);
        assert!(mx.is_empty() && mn.is_empty());
    }

    #[test]
    fn zero_crossings_skip_exact_zeros() {
        assert_eq!(count_zero_crossings(&[1.0, 0.0, -1.0, 0.0, 0.0, -2.0, 3.0]), 2);
        assert_eq!(count_zero_crossings(&[0.0, 0.0]), 0);
    }

    #[test]
    fn monotonic_ramp_has_no_imfs() {
        let v: Vec<f64> = (1..=32).map(f64::from).collect();
        let s = TimeSeries::new("ramp", v.clone()).unwrap();
        let c = emd_decompose(&s, &EmdConfig::default()).unwrap();
        assert_eq!(c.labels, vec!["Res"]);
        assert_eq!(c.components[0], v);
    }

    #[test]
    fn too_short() {
        let s = TimeSeries::new("s", vec![1.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            emd_decompose(&s, &EmdConfig::default()),
            Err(Error::InsufficientData { needed: 4, .. })
        ));
    }

    #[test]
    fn sine_yields_single_valid_imf() {
        let v: Vec<f64> = (0..256).map(|n| (2.0 * PI * n as f64 / 32.0).sin()).collect();
        let s = TimeSeries::new("s", v.clone()).unwrap();
        let c = emd_decompose(&s, &EmdConfig::default()).unwrap();
        assert!(c.len() >= 2);
        assert!(is_imf(&c.components[0]));
        let sum = c.reconstruct();
        for (a, b) in sum.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        // IMF1 carries the tone
        let e1: f64 = c.components[0].iter().map(|x| x * x).sum();
        let e: f64 = v.iter().map(|x| x * x).sum();
        assert!(e1 > 0.9 * e);
    }

    #[test]
    fn bad_config() {
        let s = TimeSeries::new("s", vec![0.0; 10]).unwrap();
        let cfg = EmdConfig {
            sift_sd_threshold: 0.0,
            ..EmdConfig::default()
        };
        assert!(matches!(emd_decompose(&s, &cfg), Err(Error::InvalidConfig(_))));
    }
}
