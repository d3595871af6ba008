//! Shared inputs for the criterion benches.

use decompaudit_core::harness::{gen_synthetic, SyntheticSpec};
use decompaudit_core::models::MlpParams;

/// First `len` samples of the standard two-tone fixture.
pub fn fixture(len: usize) -> Vec<f64> {
    let spec = SyntheticSpec {
        length: len,
        ..SyntheticSpec::standard_fixture()
    };
    gen_synthetic(&spec).expect("fixture spec is valid").values().to_vec()
}

/// A network with deterministic non-zero weights and a batch of windows cut
/// from the fixture.
pub fn mlp_batch(window: usize, hidden: &[usize], batch: usize) -> (MlpParams, Vec<Vec<f64>>, Vec<f64>) {
    let mut p = MlpParams::zeros(window, hidden);
    for (i, v) in p.values.iter_mut().enumerate() {
        *v = 0.1 * ((i as f64) * 0.618).sin();
    }
    let x = fixture(batch + window);
    let inputs = (0..batch).map(|i| x[i..i + window].to_vec()).collect();
    let targets = x[window..window + batch].to_vec();
    (p, inputs, targets)
}
