//! Fully connected ReLU network with a linear scalar head and exact
//! backpropagation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    #[default]
    Mse,
    Mae,
}

impl Loss {
    pub fn value(self, pred: f64, target: f64) -> f64 {
        let e = pred - target;
        match self {
            Loss::Mse => e * e,
            Loss::Mae => e.abs(),
        }
    }

    fn derivative(self, pred: f64, target: f64) -> f64 {
        let e = pred - target;
        match self {
            Loss::Mse => 2.0 * e,
            Loss::Mae => {
                if e > 0.0 {
                    1.0
                } else if e < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Weights of every layer packed into one vector: for each layer, the
/// `out x in` weight matrix (row-major) followed by its bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    /// `[input, hidden.., 1]`
    pub sizes: Vec<usize>,
    pub values: Vec<f64>,
}

impl MlpParams {
    pub fn zeros(input: usize, hidden: &[usize]) -> Self {
        let mut sizes = Vec::with_capacity(hidden.len() + 2);
        sizes.push(input);
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let n = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        Self {
            sizes,
            values: vec![0.0; n],
        }
    }

    /// He-uniform weights, zero biases.
    pub fn init<R: Rng>(input: usize, hidden: &[usize], rng: &mut R) -> Self {
        let mut p = Self::zeros(input, hidden);
        let mut off = 0;
        for w in p.sizes.clone().windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / fan_in as f64).sqrt();
            for v in &mut p.values[off..off + fan_in * fan_out] {
                *v = rng.gen_range(-bound..bound);
            }
            off += fan_in * fan_out + fan_out;
        }
        p
    }

    pub fn n_layers(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    /// (weight offset, bias offset, in, out) per layer.
    fn layout(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut off = 0;
        self.sizes
            .windows(2)
            .map(|w| {
                let (i, o) = (w[0], w[1]);
                let entry = (off, off + i * o, i, o);
                off += i * o + o;
                entry
            })
            .collect()
    }

    /// Forward pass keeping every layer's post-activation output.
    fn forward_cached(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let layout = self.layout();
        let last = layout.len() - 1;
        let mut acts = Vec::with_capacity(layout.len() + 1);
        acts.push(x.to_vec());
        for (l, &(wo, bo, n_in, n_out)) in layout.iter().enumerate() {
            let input = &acts[l];
            let mut out = self.values[bo..bo + n_out].to_vec();
            for (o, z) in out.iter_mut().enumerate() {
                let row = &self.values[wo + o * n_in..wo + (o + 1) * n_in];
                *z += row.iter().zip(input).map(|(w, a)| w * a).sum::<f64>();
                if l != last && *z < 0.0 {
                    *z = 0.0;
                }
            }
            acts.push(out);
        }
        acts
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim() {
            return Err(Error::InvalidInput(format!(
                "MLP expects {} inputs, got {}",
                self.input_dim(),
                x.len()
            )));
        }
        let y = self.forward_cached(x).last().unwrap()[0];
        if !y.is_finite() {
            return Err(Error::NumericOverflow("MLP output is not finite".into()));
        }
        Ok(y)
    }

    /// Mean loss over the batch and its exact gradient.
    pub fn loss_and_gradient<X: AsRef<[f64]>>(&self, inputs: &[X], targets: &[f64], loss: Loss) -> Result<(f64, Vec<f64>)> {
        let layout = self.layout();
        let mut grad = vec![0.0; self.values.len()];
        let mut total = 0.0;
        let scale = 1.0 / inputs.len().max(1) as f64;
        for (x, &y) in inputs.iter().zip(targets) {
            let x = x.as_ref();
            if x.len() != self.input_dim() {
                return Err(Error::InvalidInput("MLP batch width mismatch".into()));
            }
            let acts = self.forward_cached(x);
            let pred = acts.last().unwrap()[0];
            if !pred.is_finite() {
                return Err(Error::NumericOverflow("MLP output is not finite".into()));
            }
            total += loss.value(pred, y);
            // delta holds dL/dz for the current layer's pre-activations
            let mut delta = vec![loss.derivative(pred, y) * scale];
            for l in (0..layout.len()).rev() {
                let (wo, bo, n_in, n_out) = layout[l];
                let input = &acts[l];
                for o in 0..n_out {
                    let d = delta[o];
                    if d == 0.0 {
                        continue;
                    }
                    grad[bo + o] += d;
                    let g = &mut grad[wo + o * n_in..wo + (o + 1) * n_in];
                    for (gi, a) in g.iter_mut().zip(input) {
                        *gi += d * a;
                    }
                }
                if l > 0 {
                    let mut prev = vec![0.0; n_in];
                    for (o, d) in delta.iter().enumerate() {
                        if *d == 0.0 {
                            continue;
                        }
                        let row = &self.values[wo + o * n_in..wo + (o + 1) * n_in];
                        for (p, w) in prev.iter_mut().zip(row) {
                            *p += d * w;
                        }
                    }
                    // ReLU derivative: the cached activation is positive iff z > 0
                    for (p, a) in prev.iter_mut().zip(input) {
                        if *a <= 0.0 {
                            *p = 0.0;
                        }
                    }
                    delta = prev;
                }
            }
        }
        Ok((total * scale, grad))
    }

    /// ReLU on/off pattern for an input, used to detect kinks in
    /// finite-difference checks.
    pub fn activation_pattern(&self, x: &[f64]) -> Vec<bool> {
        let acts = self.forward_cached(x);
        acts[1..acts.len() - 1].iter().flatten().map(|a| *a > 0.0).collect()
    }
}
