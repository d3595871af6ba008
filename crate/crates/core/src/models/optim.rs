//! First-order optimizers over a flat parameter vector.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Adam,
    Adagrad,
}

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const EPSILON: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum OptimizerState {
    Adam { m: Vec<f64>, v: Vec<f64>, step: u64 },
    Adagrad { sum_sq: Vec<f64> },
}

impl OptimizerState {
    pub fn new(kind: OptimizerKind, n_params: usize) -> Self {
        match kind {
            OptimizerKind::Adam => OptimizerState::Adam {
                m: vec![0.0; n_params],
                v: vec![0.0; n_params],
                step: 0,
            },
            OptimizerKind::Adagrad => OptimizerState::Adagrad {
                sum_sq: vec![0.0; n_params],
            },
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        match self {
            OptimizerState::Adam { m, v, step } => adam_step(m, v, step, params, grad, lr),
            OptimizerState::Adagrad { sum_sq } => adagrad_step(sum_sq, params, grad, lr),
        }
    }
}

/// Adam with bias correction.
pub fn adam_step(m: &mut [f64], v: &mut [f64], step: &mut u64, params: &mut [f64], grad: &[f64], lr: f64) {
    *step += 1;
    let t = *step as i32;
    let c1 = 1.0 - ADAM_BETA1.powi(t);
    let c2 = 1.0 - ADAM_BETA2.powi(t);
    for i in 0..params.len() {
        let g = grad[i];
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g;
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + EPSILON);
    }
}

pub fn adagrad_step(sum_sq: &mut [f64], params: &mut [f64], grad: &[f64], lr: f64) {
    for i in 0..params.len() {
        let g = grad[i];
        sum_sq[i] += g * g;
        params[i] -= lr * g / (sum_sq[i].sqrt() + EPSILON);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adam_first_step_is_about_lr() {
        for g in [0.3, -2.0, 1e-3] {
            let mut s = OptimizerState::new(OptimizerKind::Adam, 1);
            let mut p = [1.0];
            s.step(&mut p, &[g], 0.01);
            let expect = 0.01 * g.abs() / (g.abs() + EPSILON);
            assert!(((1.0 - p[0]).abs() - expect).abs() < 1e-15);
            assert_eq!((1.0 - p[0]).signum(), g.signum());
        }
    }

    #[test]
    fn adagrad_first_step() {
        let mut s = OptimizerState::new(OptimizerKind::Adagrad, 1);
        let mut p = [0.0];
        s.step(&mut p, &[-0.5], 0.1);
        assert!((p[0] - 0.1 * 0.5 / (0.5 + EPSILON)).abs() < 1e-15);
    }

    #[test]
    fn zero_gradient() {
        let mut s = OptimizerState::new(OptimizerKind::Adagrad, 2);
        let mut p = [1.0, 2.0];
        s.step(&mut p, &[0.0, 0.0], 0.1);
        assert_eq!(p, [1.0, 2.0]);
        assert_eq!(s, OptimizerState::Adagrad { sum_sq: vec![0.0, 0.0] });

        let mut s = OptimizerState::new(OptimizerKind::Adam, 1);
        let mut p = [1.0];
        s.step(&mut p, &[1.0], 0.1);
        let before = p;
        s.step(&mut p, &[0.0], 0.1);
        let OptimizerState::Adam { m, v, step } = &s else { unreachable!() };
        assert_eq!(*step, 2);
        assert!((m[0] - 0.1 * ADAM_BETA1).abs() < 1e-15);
        assert!((v[0] - 0.001 * ADAM_BETA2).abs() < 1e-15);
        // decayed first moment still moves the parameter
        assert!(p[0] < before[0]);
    }
}
