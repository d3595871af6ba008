//! Series representation, chronological splitting, min-max scaling and
//! sliding-window sample construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled scalar series. Values are always finite and non-empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    name: String,
    resolution: Option<String>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value {} at index {i}",
                values[i]
            )));
        }
        Ok(Self {
            values,
            name: name.into(),
            resolution: None,
        })
    }

    pub fn with_resolution(mut self, resolution: impl Into<String>) -> Self {
        self.resolution = Some(resolution.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn resolution(&self) -> Option<&str> {
        self.resolution.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First `len` values as a new series with the same name.
    pub fn prefix(&self, len: usize) -> Result<TimeSeries> {
        if len == 0 || len > self.len() {
            return Err(Error::InvalidInput(format!(
                "prefix length {len} outside 1..={}",
                self.len()
            )));
        }
        Ok(TimeSeries {
            values: self.values[..len].to_vec(),
            name: self.name.clone(),
            resolution: self.resolution.clone(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub fn std_dev(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - m) * (v - m)).sum();
        (ss / (n - 1) as f64).sqrt()
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Where the chronological train/test cut falls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    /// Number of training values (P).
    pub train_len: usize,
    /// Total series length (Q).
    pub total_len: usize,
}

impl SplitSpec {
    pub fn new(total_len: usize, train_fraction: f64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train fraction {train_fraction} must lie strictly between 0 and 1"
            )));
        }
        let train_len = (train_fraction * total_len as f64).floor() as usize;
        if train_len == 0 || train_len >= total_len {
            return Err(Error::InvalidConfig(format!(
                "split of {total_len} values at fraction {train_fraction} leaves an empty side"
            )));
        }
        Ok(Self {
            train_fraction,
            train_len,
            total_len,
        })
    }

    pub fn test_len(&self) -> usize {
        self.total_len - self.train_len
    }
}

/// Split `series` into a leading training part and a trailing test part.
/// Order is preserved and nothing is shuffled.
pub fn split_chronological(
    series: &TimeSeries,
    train_fraction: f64,
) -> Result<(TimeSeries, TimeSeries, SplitSpec)> {
    if series.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: series.len(),
        });
    }
    let spec = SplitSpec::new(series.len(), train_fraction)?;
    let (head, tail) = series.values().split_at(spec.train_len);
    let mk = |suffix: &str, v: &[f64]| TimeSeries {
        values: v.to_vec(),
        name: format!("{}_{suffix}", series.name),
        resolution: series.resolution.clone(),
    };
    Ok((mk("train", head), mk("test", tail), spec))
}

/// Min-max parameters for one channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub min: f64,
    pub max: f64,
}

impl ScalerParams {
    pub fn is_degenerate(&self) -> bool {
        self.max <= self.min
    }

    pub fn apply_value(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            (x - self.min) / (self.max - self.min)
        }
    }

    pub fn invert_value(&self, s: f64) -> f64 {
        if self.is_degenerate() {
            self.min
        } else {
            s * (self.max - self.min) + self.min
        }
    }
}

pub fn minmax_fit(channel: &[f64]) -> Result<ScalerParams> {
    if channel.is_empty() {
        return Err(Error::InvalidInput("cannot fit a scaler on an empty channel".into()));
    }
    if channel.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("cannot fit a scaler on non-finite values".into()));
    }
    let (min, max) = channel
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(ScalerParams { min, max })
}

/// Scale into `[0, 1]` relative to the fitted range. Out-of-range values are
/// not clipped.
pub fn minmax_apply(params: &ScalerParams, channel: &[f64]) -> Vec<f64> {
    channel.iter().map(|&x| params.apply_value(x)).collect()
}

pub fn minmax_invert(params: &ScalerParams, scaled: &[f64]) -> Vec<f64> {
    scaled.iter().map(|&s| params.invert_value(s)).collect()
}

/// Model input window length; the horizon is always one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub window: usize,
}

impl WindowSpec {
    pub const HORIZON: usize = 1;

    pub fn new(window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidConfig("window length must be at least 1".into()));
        }
        Ok(Self { window })
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { window: 12 }
    }
}

/// One supervised sample: `rows × channels` inputs in time-major order and
/// the next-step target.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub inputs: Vec<f64>,
    pub rows: usize,
    pub channels: usize,
    pub target: f64,
}

impl Window {
    pub fn row(&self, r: usize) -> &[f64] {
        &self.inputs[r * self.channels..(r + 1) * self.channels]
    }

    /// Last value of channel 0 (the raw series).
    pub fn last_raw(&self) -> f64 {
        self.inputs[(self.rows - 1) * self.channels]
    }

    pub fn channel(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.inputs[r * self.channels + c]).collect()
    }
}

/// Build every `(window, next value)` pair from channel-major `features`.
/// Pair `i` covers time steps `i..i+W` and targets index `i+W`.
pub fn make_windows(features: &[Vec<f64>], target: &[f64], spec: WindowSpec) -> Result<Vec<Window>> {
    let w = spec.window;
    let len = target.len();
    if features.is_empty() {
        return Err(Error::InvalidInput("no feature channels".into()));
    }
    if let Some(c) = features.iter().find(|c| c.len() != len) {
        return Err(Error::InvalidInput(format!(
            "channel length {} does not match target length {len}",
            c.len()
        )));
    }
    if len <= w {
        return Err(Error::InsufficientData {
            needed: w + 1,
            got: len,
        });
    }
    let channels = features.len();
    Ok((0..len - w)
        .map(|i| {
            let mut inputs = Vec::with_capacity(w * channels);
            for t in i..i + w {
                inputs.extend(features.iter().map(|c| c[t]));
            }
            Window {
                inputs,
                rows: w,
                channels,
                target: target[i + w],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(v: Vec<f64>) -> TimeSeries {
        TimeSeries::new("t", v).unwrap()
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(TimeSeries::new("x", vec![]).is_err());
        assert!(matches!(
            TimeSeries::new("x", vec![1.0, f64::NAN]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn split_small() {
        let s = ts((0..8).map(f64::from).collect());
        let (train, test, spec) = split_chronological(&s, 0.75).unwrap();
        assert_eq!(spec.train_len, 6);
        assert_eq!(train.len(), 6);
        assert_eq!(test.len(), 2);
    }

    #[test]
    fn split_hs_length() {
        let spec = SplitSpec::new(70_128, 0.75).unwrap();
        assert_eq!(spec.train_len, 52_596);
        assert_eq!(spec.test_len(), 17_532);
    }

    #[test]
    fn split_bad_fraction() {
        let s = ts(vec![1.0, 2.0, 3.0]);
        for f in [1.0, 0.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(
                split_chronological(&s, f),
                Err(Error::InvalidConfig(_))
            ));
        }
        // floor(0.3 * 2) = 0 leaves an empty training side
        let s2 = ts(vec![1.0, 2.0]);
        assert!(matches!(
            split_chronological(&s2, 0.3),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn scaler_examples() {
        let p = minmax_fit(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((p.min, p.max), (1.0, 3.0));
        assert_eq!(minmax_apply(&p, &[1.0, 2.0, 3.0]), vec![0.0, 0.5, 1.0]);

        let p = minmax_fit(&[-2.0, 0.0, 2.0]).unwrap();
        assert_eq!((p.min, p.max), (-2.0, 2.0));

        let p = minmax_fit(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!((p.min, p.max), (5.0, 5.0));
        assert_eq!(minmax_apply(&p, &[5.0, 5.0]), vec![0.0, 0.0]);
        assert_eq!(minmax_invert(&p, &[0.0, 0.3]), vec![5.0, 5.0]);

        assert!(minmax_fit(&[]).is_err());
    }

    #[test]
    fn test_values_are_not_clipped() {
        let p = minmax_fit(&[0.0, 10.0]).unwrap();
        assert_eq!(minmax_apply(&p, &[-5.0, 20.0]), vec![-0.5, 2.0]);
    }

    #[test]
    fn windows_alignment() {
        let v: Vec<f64> = (1..=5).map(f64::from).collect();
        let w = make_windows(&[v.clone()], &v, WindowSpec::new(2).unwrap()).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[0].inputs, vec![1.0, 2.0]);
        assert_eq!(w[0].target, 3.0);
        assert_eq!(w[2].inputs, vec![3.0, 4.0]);
        assert_eq!(w[2].target, 5.0);
    }

    #[test]
    fn windows_multichannel_layout() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b = vec![10.0, 20.0, 30.0, 40.0];
        let w = make_windows(&[a.clone(), b], &a, WindowSpec::new(2).unwrap()).unwrap();
        assert_eq!(w[1].inputs, vec![2.0, 20.0, 3.0, 30.0]);
        assert_eq!(w[1].row(1), &[3.0, 30.0]);
        assert_eq!(w[1].last_raw(), 3.0);
        assert_eq!(w[1].channel(1), vec![20.0, 30.0]);
    }

    #[test]
    fn windows_too_short() {
        let v = vec![0.0; 12];
        assert!(matches!(
            make_windows(&[v.clone()], &v, WindowSpec::default()),
            Err(Error::InsufficientData { needed: 13, got: 12 })
        ));
    }

    proptest! {
        #[test]
        fn split_concat_is_identity(v in prop::collection::vec(-1e6f64..1e6, 2..200), f in 0.05f64..0.95) {
            let s = ts(v.clone());
            if let Ok((a, b, spec)) = split_chronological(&s, f) {
                prop_assert_eq!(a.len(), spec.train_len);
                let joined: Vec<f64> = a.values().iter().chain(b.values()).copied().collect();
                prop_assert_eq!(joined, v);
            }
        }

        #[test]
        fn scaler_round_trip(v in prop::collection::vec(-1e3f64..1e3, 2..100)) {
            let p = minmax_fit(&v).unwrap();
            prop_assume!(!p.is_degenerate());
            let scaled = minmax_apply(&p, &v);
            prop_assert!(scaled.iter().all(|s| (-1e-15..=1.0 + 1e-15).contains(s)));
            let back = minmax_invert(&p, &scaled);
            for (x, y) in v.iter().zip(&back) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn window_count(len in 2usize..100, w in 1usize..20) {
            prop_assume!(len > w);
            let v = vec![0.5; len];
            let out = make_windows(&[v.clone()], &v, WindowSpec::new(w).unwrap()).unwrap();
            prop_assert_eq!(out.len(), len - w);
        }
    }
}
