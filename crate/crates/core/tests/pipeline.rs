mod common;

use common::{fixture, perturb_from};
use decompaudit_core::pipeline::{
    build_test_features_causal, build_test_features_leaked, build_train_features, windows_from_matrix,
    CausalScheduleConfig, StepFeatures,
};
use decompaudit_core::{DecompositionConfig, Method, SplitSpec, TimeSeries, WindowSpec};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const METHODS: [Method; 3] = [Method::Emd, Method::Dwt, Method::Ssa];

struct Setup {
    series: TimeSeries,
    split: SplitSpec,
    cfg: DecompositionConfig,
    spec: WindowSpec,
}

impl Setup {
    fn new(series: TimeSeries) -> Self {
        let split = SplitSpec::new(series.len(), 0.75).unwrap();
        Self {
            series,
            split,
            cfg: DecompositionConfig::default(),
            spec: WindowSpec::new(12).unwrap(),
        }
    }

    fn layout(&self, method: Method) -> Vec<String> {
        let train = self.series.prefix(self.split.train_len).unwrap();
        build_train_features(&train, method, &self.cfg).unwrap().labels
    }

    fn causal(&self, series: &TimeSeries, method: Method, layout: &[String]) -> StepFeatures {
        build_test_features_causal(series, &self.split, method, &self.cfg, layout, self.spec, Default::default())
            .unwrap()
    }

    fn leaked(&self, series: &TimeSeries, method: Method, layout: &[String]) -> StepFeatures {
        build_test_features_leaked(series, &self.split, method, &self.cfg, layout, self.spec).unwrap()
    }
}

fn small_series(seed: u64) -> TimeSeries {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..400)
        .map(|t| {
            let t = t as f64;
            (t * 0.31).sin() + 0.6 * (t * 0.02).cos() + 0.3 * rng.gen_range(-1.0..1.0)
        })
        .collect();
    TimeSeries::new("small", v).unwrap()
}

fn two_tone() -> TimeSeries {
    use std::f64::consts::PI;
    let v = (0..512)
        .map(|n| {
            let t = n as f64 / 512.0;
            (2.0 * PI * 25.0 * t).sin() + (2.0 * PI * 3.0 * t).sin()
        })
        .collect();
    TimeSeries::new("two_tone", v).unwrap()
}

#[test]
fn causal_features_ignore_the_future() {
    let s = Setup::new(small_series(3));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let steps = sample(&mut rng, s.split.test_len(), 10).into_vec();
    for m in METHODS {
        let layout = s.layout(m);
        let base = s.causal(&s.series, m, &layout);
        for (k, &step) in steps.iter().enumerate() {
            let t = s.split.train_len + step;
            let y = TimeSeries::new("p", perturb_from(s.series.values(), t, k as u64)).unwrap();
            let other = s.causal(&y, m, &layout);
            for j in 0..=step {
                assert_eq!(base.block(j), other.block(j), "{m} step {j} after perturbing from {t}");
            }
        }
    }
}

#[test]
fn strided_causal_features_ignore_the_future() {
    let s = Setup::new(small_series(4));
    let sched = CausalScheduleConfig { refresh_stride: 3 };
    let layout = s.layout(Method::Ssa);
    let run = |x: &TimeSeries| {
        build_test_features_causal(x, &s.split, Method::Ssa, &s.cfg, &layout, s.spec, sched).unwrap()
    };
    let base = run(&s.series);
    for step in [0, 1, 2, 5, 40, 99] {
        let t = s.split.train_len + step;
        let y = TimeSeries::new("p", perturb_from(s.series.values(), t, step as u64)).unwrap();
        let other = run(&y);
        assert_eq!(base.blocks[..=step], other.blocks[..=step]);
    }
}

#[test]
fn leaked_features_see_the_future() {
    let s = Setup::new(small_series(5));
    for m in METHODS {
        let layout = s.layout(m);
        let base = s.leaked(&s.series, m, &layout);
        // only values after the first test target move
        let from = s.split.train_len + 1;
        let y = TimeSeries::new("p", perturb_from(s.series.values(), from, 99)).unwrap();
        let other = s.leaked(&y, m, &layout);
        // step 0 predicts index P from rows P-12..P-1, all unperturbed raw values
        assert_eq!(base.row(0, 11)[0], other.row(0, 11)[0]);
        assert_ne!(base.block(0), other.block(0), "{m} step 0 should leak");
    }
}

#[test]
fn identity_decomposition_leaks_nothing() {
    let s = Setup::new(small_series(6));
    let layout = s.layout(Method::Identity);
    assert_eq!(layout, vec!["raw", "X"]);
    let leaked = s.leaked(&s.series, Method::Identity, &layout);
    let causal = s.causal(&s.series, Method::Identity, &layout);
    assert_eq!(leaked.blocks, causal.blocks);
}

#[test]
fn raw_channel_is_the_series() {
    let s = Setup::new(small_series(7));
    let x = s.series.values();
    for m in METHODS {
        let layout = s.layout(m);
        for f in [s.leaked(&s.series, m, &layout), s.causal(&s.series, m, &layout)] {
            for (k, &t) in f.target_index.iter().enumerate() {
                for r in 0..f.window {
                    assert_eq!(f.row(k, r)[0], x[t - f.window + r]);
                }
            }
        }
        let train = build_train_features(&s.series.prefix(s.split.train_len).unwrap(), m, &s.cfg).unwrap();
        assert_eq!(train.channels[0], &x[..s.split.train_len]);
    }
}

#[test]
fn first_causal_step_is_the_training_decomposition() {
    let s = Setup::new(fixture());
    for m in METHODS {
        let train = build_train_features(&s.series.prefix(s.split.train_len).unwrap(), m, &s.cfg).unwrap();
        let causal = s.causal(&s.series, m, &train.labels);
        let tail = windows_from_matrix(&train, &[s.split.train_len], s.spec).unwrap();
        assert_eq!(causal.block(0), tail.block(0), "{m}");
    }
}

#[test]
fn truncation_moves_imf1_at_the_prefix_end() {
    let s = Setup::new(two_tone());
    let layout = s.layout(Method::Emd);
    let leaked = s.leaked(&s.series, Method::Emd, &layout);
    let causal = s.causal(&s.series, Method::Emd, &layout);
    // IMF1 is channel 1, last row of the first test window = index P-1
    let dev = (leaked.row(0, 11)[1] - causal.row(0, 11)[1]).abs();
    eprintln!("two-tone IMF1 leaked vs causal at the prefix end: {dev:.6}");
    assert!(dev > 1e-3, "{dev}");
}
