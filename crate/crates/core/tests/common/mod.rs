#![allow(dead_code)]

use decompaudit_core::harness::{gen_synthetic, ExperimentConfig, SyntheticSpec};
use decompaudit_core::models::{Loss, MlpParams, OptimizerKind};
use decompaudit_core::{ModelKind, TimeSeries, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random walk plus a 0.07 cycles/sample tone and uniform noise.
pub fn random_series(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 0.0;
    (0..n)
        .map(|t| {
            level += rng.gen_range(-0.1..0.1);
            let tone = (2.0 * std::f64::consts::PI * 0.07 * t as f64).sin();
            level + tone + rng.gen_range(-1.0..1.0)
        })
        .collect()
}

pub fn fixture() -> TimeSeries {
    gen_synthetic(&SyntheticSpec::standard_fixture()).unwrap()
}

/// MLP training used for the desk-scale fixture runs.
pub fn fast_train() -> TrainConfig {
    TrainConfig {
        max_epochs: 200,
        optimizer: OptimizerKind::Adam,
        learning_rate: 1e-3,
        ..TrainConfig::default()
    }
}

pub fn fixture_mlp() -> ModelKind {
    ModelKind::Mlp { hidden: vec![32, 32, 32] }
}

pub fn fixture_ridge() -> ModelKind {
    ModelKind::Ridge { lambda: 1e-4 }
}

pub fn standard_config(models: Vec<ModelKind>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::standard(models);
    cfg.train = fast_train();
    cfg
}

/// Copy of `x` with every value from `from` on shifted by a seeded random
/// amount in [-1, 1] (never exactly zero).
pub fn perturb_from(x: &[f64], from: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = x.to_vec();
    for v in &mut y[from..] {
        let mut d: f64 = rng.gen_range(-1.0..1.0);
        if d == 0.0 {
            d = 0.5;
        }
        *v += d;
    }
    y
}

pub struct GradCheck {
    pub max_rel_err: f64,
    pub checked: usize,
    pub skipped: usize,
}

/// Central finite differences against the analytic gradient of a random
/// small network. Coordinates whose ±h perturbation flips a ReLU are
/// skipped: the loss is not differentiable across a kink.
pub fn gradient_check(seed: u64, loss: Loss) -> GradCheck {
    const H: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = rng.gen_range(1..=8);
    let depth = rng.gen_range(1..=3);
    let hidden: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=6)).collect();
    let batch = rng.gen_range(1..=5);
    let mut net = MlpParams::init(input, &hidden, &mut rng);
    for v in &mut net.values {
        *v += rng.gen_range(-0.3..0.3);
    }
    let xs: Vec<Vec<f64>> = (0..batch)
        .map(|_| (0..input).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let ys: Vec<f64> = (0..batch).map(|_| rng.gen_range(-1.0..1.0)).collect();

    let (_, grad) = net.loss_and_gradient(&xs, &ys, loss).unwrap();
    let patterns: Vec<Vec<bool>> = xs.iter().map(|x| net.activation_pattern(x)).collect();
    let signs: Vec<bool> = xs.iter().zip(&ys).map(|(x, y)| net.forward(x).unwrap() > *y).collect();
    let same_regime = |p: &MlpParams| {
        xs.iter().zip(&ys).enumerate().all(|(i, (x, y))| {
            p.activation_pattern(x) == patterns[i] && (p.forward(x).unwrap() > *y) == signs[i]
        })
    };

    let mut out = GradCheck {
        max_rel_err: 0.0,
        checked: 0,
        skipped: 0,
    };
    for j in 0..net.values.len() {
        let mut plus = net.clone();
        plus.values[j] += H;
        let mut minus = net.clone();
        minus.values[j] -= H;
        if !same_regime(&plus) || !same_regime(&minus) {
            out.skipped += 1;
            continue;
        }
        let lp = plus.loss_and_gradient(&xs, &ys, loss).unwrap().0;
        let lm = minus.loss_and_gradient(&xs, &ys, loss).unwrap().0;
        let fd = (lp - lm) / (2.0 * H);
        let rel = (fd - grad[j]).abs() / fd.abs().max(grad[j].abs()).max(1e-4);
        out.max_rel_err = out.max_rel_err.max(rel);
        out.checked += 1;
    }
    out
}
