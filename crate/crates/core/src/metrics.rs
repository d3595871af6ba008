//! Forecast accuracy metrics and Welch's unequal-variance t-test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominator guard for MAPE.
pub const MAPE_EPSILON: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mse: f64,
    pub mae: f64,
    /// Percent.
    pub mape: f64,
    /// `None` when the truth is constant and R² is undefined.
    pub r2: Option<f64>,
    pub n: usize,
}

pub fn compute_metrics(truth: &[f64], pred: &[f64]) -> Result<MetricsReport> {
    if truth.len() != pred.len() {
        return Err(Error::InvalidInput(format!(
            "truth has {} values but prediction has {}",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::InvalidInput("cannot score an empty prediction".into()));
    }
    if truth.iter().chain(pred).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value in truth or prediction".into()));
    }
    let n = truth.len() as f64;
    let mean = truth.iter().sum::<f64>() / n;
    let (mut se, mut ae, mut pe, mut tot) = (0.0, 0.0, 0.0, 0.0);
    for (&y, &p) in truth.iter().zip(pred) {
        let err = y - p;
        se += err * err;
        ae += err.abs();
        pe += err.abs() / y.abs().max(MAPE_EPSILON);
        tot += (y - mean) * (y - mean);
    }
    Ok(MetricsReport {
        mse: se / n,
        mae: ae / n,
        mape: 100.0 * pe / n,
        r2: (tot > 0.0).then(|| 1.0 - se / tot),
        n: truth.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub df: f64,
}

/// Mean and unbiased variance; `NaN`s for an empty slice.
pub fn mean_and_var(x: &[f64]) -> (f64, f64) {
    if x.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = x.len() as f64;
    // shifted by the first sample so identical samples give exactly zero
    let shift = x[0];
    let m = shift + x.iter().map(|v| v - shift).sum::<f64>() / n;
    let v = if x.len() > 1 {
        x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, v)
}

/// Welch's two-sided t-test with Welch-Satterthwaite degrees of freedom.
///
/// Two zero-variance samples give `p = 1` when their means agree and
/// `p = 0` (infinite `t`) when they differ.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidInput("Welch test needs at least two values per sample".into()));
    }
    let (ma, va) = mean_and_var(a);
    let (mb, vb) = mean_and_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        return Ok(if ma == mb {
            WelchTest { t: 0.0, p: 1.0, df: f64::NAN }
        } else {
            WelchTest {
                t: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                p: 0.0,
                df: f64::NAN,
            }
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    if !df.is_finite() || df <= 0.0 {
        return Err(Error::InvalidInput("Welch degrees of freedom are undefined".into()));
    }
    Ok(WelchTest {
        t,
        p: student_t_two_sided_p(t, df),
        df,
    })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(0.5 * df, 0.5, x).clamp(0.0, 1.0)
}

/// Lanczos approximation (g = 7, n = 9) of `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized incomplete beta `I_x(a, b)`, via the modified Lentz
/// evaluation of its continued fraction.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // the fraction converges fast for x < (a + 1) / (a + b + 2)
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
