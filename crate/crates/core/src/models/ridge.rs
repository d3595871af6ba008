use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::cholesky_solve;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RidgeParams {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl RidgeParams {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.intercept + self.coefficients.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// L2-regularized least squares with an unpenalized intercept, solved via
/// the centered normal equations.
pub fn ridge_fit<X: AsRef<[f64]>>(inputs: &[X], targets: &[f64], lambda: f64) -> Result<RidgeParams> {
    if inputs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if inputs.len() != targets.len() {
        return Err(Error::InvalidInput("ridge inputs and targets differ in length".into()));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidConfig(format!("ridge lambda must be non-negative, got {lambda}")));
    }
    let d = inputs[0].as_ref().len();
    if inputs.iter().any(|x| x.as_ref().len() != d) {
        return Err(Error::InvalidInput("ridge inputs have inconsistent widths".into()));
    }
    let n = inputs.len() as f64;
    let mut x_mean = vec![0.0; d];
    for x in inputs {
        for (m, v) in x_mean.iter_mut().zip(x.as_ref()) {
            *m += v / n;
        }
    }
    let y_mean = targets.iter().sum::<f64>() / n;

    let mut gram = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    let mut centered = vec![0.0; d];
    for (x, &y) in inputs.iter().zip(targets) {
        for (c, (v, m)) in centered.iter_mut().zip(x.as_ref().iter().zip(&x_mean)) {
            *c = v - m;
        }
        let yc = y - y_mean;
        for i in 0..d {
            rhs[i] += centered[i] * yc;
            let ci = centered[i];
            for j in 0..=i {
                gram[i * d + j] += ci * centered[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            gram[j * d + i] = gram[i * d + j];
        }
        gram[i * d + i] += lambda;
    }
    let coefficients = cholesky_solve(&gram, &rhs, d)?;
    let intercept = y_mean - coefficients.iter().zip(&x_mean).map(|(w, m)| w * m).sum::<f64>();
    Ok(RidgeParams {
        coefficients,
        intercept,
    })
}
