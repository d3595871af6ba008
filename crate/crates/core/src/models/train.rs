use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mlp::{Loss, MlpParams};
use super::optim::{OptimizerKind, OptimizerState};
use super::ridge::ridge_fit;
use super::{ModelKind, ModelParams};
use crate::error::{Error, Result};
use crate::series::Window;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub patience: usize,
    pub validation_fraction: f64,
    pub loss: Loss,
    pub seed: u64,
    /// Hold out the last windows instead of a random subset.
    pub chronological_validation: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_epochs: 1000,
            batch_size: 32,
            learning_rate: 1e-4,
            optimizer: OptimizerKind::Adagrad,
            patience: 30,
            validation_fraction: 0.10,
            loss: Loss::Mse,
            seed: 0,
            chronological_validation: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_epochs == 0 || self.batch_size == 0 || self.patience == 0 {
            return Err(Error::InvalidConfig("epochs, batch size and patience must be positive".into()));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig("learning rate must be finite and non-negative".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::InvalidConfig("validation fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Per-epoch losses in the configured loss, on scaled targets.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub test_loss: Option<Vec<f64>>,
    pub best_epoch: usize,
}

impl TrainingHistory {
    pub fn epochs(&self) -> usize {
        self.train_loss.len()
    }
}

fn mean_loss(params: &ModelParams, windows: &[&Window], loss: Loss) -> Result<f64> {
    if windows.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for w in windows {
        total += loss.value(params.predict(w)?, w.target);
    }
    Ok(total / windows.len() as f64)
}

/// Fit a model on `windows`, optionally tracking the loss on `test` each
/// epoch. Returns the best-validation parameters and the full history.
pub fn train(
    kind: &ModelKind,
    windows: &[Window],
    cfg: &TrainConfig,
    test: Option<&[Window]>,
) -> Result<(ModelParams, TrainingHistory)> {
    cfg.validate()?;
    if windows.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: windows.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = windows.len();
    let n_val = ((cfg.validation_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    if !cfg.chronological_validation {
        order.shuffle(&mut rng);
    }
    let (train_idx, val_idx) = order.split_at(n - n_val);
    let train_set: Vec<&Window> = train_idx.iter().map(|&i| &windows[i]).collect();
    let val_set: Vec<&Window> = val_idx.iter().map(|&i| &windows[i]).collect();
    let test_set: Option<Vec<&Window>> = test.map(|t| t.iter().collect());

    let record = |params: &ModelParams, h: &mut TrainingHistory| -> Result<f64> {
        let val = mean_loss(params, &val_set, cfg.loss)?;
        h.train_loss.push(mean_loss(params, &train_set, cfg.loss)?);
        h.val_loss.push(val);
        if let (Some(t), Some(out)) = (&test_set, h.test_loss.as_mut()) {
            out.push(mean_loss(params, t, cfg.loss)?);
        }
        Ok(val)
    };
    let mut history = TrainingHistory {
        test_loss: test.map(|_| Vec::new()),
        ..TrainingHistory::default()
    };

    match kind {
        ModelKind::Persistence => {
            let params = ModelParams::Persistence;
            record(&params, &mut history)?;
            Ok((params, history))
        }
        ModelKind::Ridge { lambda } => {
            // deterministic: fit on every window, the held-out set only scores
            let inputs: Vec<&[f64]> = windows.iter().map(|w| w.inputs.as_slice()).collect();
            let targets: Vec<f64> = windows.iter().map(|w| w.target).collect();
            let params = ModelParams::Ridge(ridge_fit(&inputs, &targets, *lambda)?);
            record(&params, &mut history)?;
            Ok((params, history))
        }
        ModelKind::Mlp { hidden } => {
            let input_dim = windows[0].inputs.len();
            let mut net = MlpParams::init(input_dim, hidden, &mut rng);
            let mut opt = OptimizerState::new(cfg.optimizer, net.values.len());
            let mut best = net.clone();
            let mut best_val = f64::INFINITY;
            let mut batch_order: Vec<usize> = (0..train_set.len()).collect();
            let mut inputs: Vec<&[f64]> = Vec::with_capacity(cfg.batch_size);
            let mut targets: Vec<f64> = Vec::with_capacity(cfg.batch_size);
            for epoch in 0..cfg.max_epochs {
                batch_order.shuffle(&mut rng);
                for chunk in batch_order.chunks(cfg.batch_size) {
                    inputs.clear();
                    targets.clear();
                    for &i in chunk {
                        inputs.push(&train_set[i].inputs);
                        targets.push(train_set[i].target);
                    }
                    let (_, grad) = net.loss_and_gradient(&inputs, &targets, cfg.loss)?;
                    opt.step(&mut net.values, &grad, cfg.learning_rate);
                }
                let snapshot = ModelParams::Mlp(net);
                let val = record(&snapshot, &mut history)?;
                let ModelParams::Mlp(current) = snapshot else { unreachable!() };
                net = current;
                if val < best_val {
                    best_val = val;
                    best = net.clone();
                    history.best_epoch = epoch;
                } else if epoch - history.best_epoch >= cfg.patience {
                    break;
                }
            }
            Ok((ModelParams::Mlp(best), history))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{make_windows, WindowSpec};

    fn linear_windows(n: usize) -> Vec<Window> {
        let x: Vec<f64> = (0..n).map(|t| (t as f64 * 0.37).sin() * 0.4 + 0.5).collect();
        make_windows(&[x.clone()], &x, WindowSpec::new(3).unwrap()).unwrap()
    }

    #[test]
    fn early_stopping_on_flat_validation() {
        let cfg = TrainConfig {
            learning_rate: 0.0,
            max_epochs: 100,
            patience: 5,
            ..TrainConfig::default()
        };
        let kind = ModelKind::Mlp { hidden: vec![4] };
        let (_, h) = train(&kind, &linear_windows(60), &cfg, None).unwrap();
        assert_eq!(h.best_epoch, 0);
        assert_eq!(h.epochs(), 6);
    }

    #[test]
    fn improving_runs_to_max_epochs() {
        let cfg = TrainConfig {
            learning_rate: 1e-3,
            optimizer: OptimizerKind::Adam,
            max_epochs: 25,
            ..TrainConfig::default()
        };
        let kind = ModelKind::Mlp { hidden: vec![] };
        let (_, h) = train(&kind, &linear_windows(200), &cfg, None).unwrap();
        assert_eq!(h.epochs(), 25);
        assert_eq!(h.best_epoch, 24);
        assert!(h.val_loss.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn returns_best_not_last_params() {
        // a huge learning rate makes validation loss bounce around
        let cfg = TrainConfig {
            learning_rate: 0.5,
            optimizer: OptimizerKind::Adam,
            max_epochs: 40,
            patience: 40,
            ..TrainConfig::default()
        };
        let kind = ModelKind::Mlp { hidden: vec![8] };
        let windows = linear_windows(120);
        let (params, h) = train(&kind, &windows, &cfg, Some(&windows)).unwrap();
        let best = h.val_loss[h.best_epoch];
        assert!(h.val_loss.iter().all(|v| *v >= best));
        assert_eq!(h.test_loss.as_ref().unwrap().len(), h.epochs());
        // recompute the validation loss of the returned params
        let again = train(&kind, &windows, &cfg, None).unwrap();
        assert_eq!(again.0, params);
    }

    #[test]
    fn seeded_determinism() {
        let cfg = TrainConfig {
            learning_rate: 1e-2,
            optimizer: OptimizerKind::Adam,
            max_epochs: 10,
            seed: 9,
            ..TrainConfig::default()
        };
        let kind = ModelKind::Mlp { hidden: vec![6, 6, 6] };
        let w = linear_windows(100);
        let a = train(&kind, &w, &cfg, None).unwrap();
        let b = train(&kind, &w, &cfg, None).unwrap();
        assert_eq!(a, b);
        let c = train(&kind, &w, &TrainConfig { seed: 10, ..cfg }, None).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn too_few_windows() {
        let w = linear_windows(5);
        assert!(matches!(
            train(&ModelKind::Persistence, &w[..1], &TrainConfig::default(), None),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn ridge_beats_persistence_on_linear_target() {
        let w = linear_windows(300);
        let (ridge, hr) = train(&ModelKind::Ridge { lambda: 1e-9 }, &w, &TrainConfig::default(), None).unwrap();
        let (_, hp) = train(&ModelKind::Persistence, &w, &TrainConfig::default(), None).unwrap();
        assert!(hr.train_loss[0] <= hp.train_loss[0]);
        assert!(hr.val_loss[0] <= hp.val_loss[0]);
        // a sampled sinusoid obeys an exact two-term recurrence
        assert!(hr.train_loss[0] < 1e-16);
        assert!(matches!(ridge, ModelParams::Ridge(_)));
    }
}
