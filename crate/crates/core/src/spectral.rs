//! Radix-2 FFT and power spectra for characterizing decomposed components.

use std::f64::consts::PI;
use std::io::Write;
use std::ops::{Add, Mul, Sub};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

impl Add for Complex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

/// In-place iterative Cooley-Tukey. `buf.len()` must be a power of two.
fn transform(buf: &mut [Complex], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    // bit reversal
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // direct twiddles; recurrence drifts too far for the 1e-10 round trip
                let (s, c) = (step * k as f64).sin_cos();
                let w = Complex::new(c, s);
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
    if inverse {
        let inv = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v = v.scale(inv);
        }
    }
}

/// Forward DFT of `signal`, zero-padded to the next power of two.
pub fn fft(signal: &[f64]) -> Result<Vec<Complex>> {
    if signal.is_empty() {
        return Err(Error::InvalidInput("fft of an empty signal".into()));
    }
    let n = signal.len().next_power_of_two();
    let mut buf: Vec<Complex> = signal.iter().map(|&x| Complex::new(x, 0.0)).collect();
    buf.resize(n, Complex::default());
    transform(&mut buf, false);
    Ok(buf)
}

pub fn fft_complex(signal: &[Complex]) -> Result<Vec<Complex>> {
    if signal.is_empty() {
        return Err(Error::InvalidInput("fft of an empty signal".into()));
    }
    let mut buf = signal.to_vec();
    buf.resize(signal.len().next_power_of_two(), Complex::default());
    transform(&mut buf, false);
    Ok(buf)
}

/// Inverse DFT (with 1/N normalization). Length must be a power of two.
pub fn ifft(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    if coeffs.is_empty() || !coeffs.len().is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "inverse fft needs a power-of-two length, got {}",
            coeffs.len()
        )));
    }
    let mut buf = coeffs.to_vec();
    transform(&mut buf, true);
    Ok(buf)
}

/// One-sided power spectrum over frequencies `k / n` for `k = 0..=n/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Cycles per sample, in `[0, 0.5]`.
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    /// Transform length after zero padding.
    pub n: usize,
}

impl Spectrum {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("frequency,power\n");
        for (f, p) in self.frequencies.iter().zip(&self.power) {
            out.push_str(&format!("{f},{p}\n"));
        }
        std::fs::File::create(path)
            .and_then(|mut f| f.write_all(out.as_bytes()))
            .map_err(|e| Error::io(path, e))
    }
}

/// `|X_k|^2 / n` for the non-negative frequencies.
pub fn power_spectrum(signal: &[f64]) -> Result<Spectrum> {
    let coeffs = fft(signal)?;
    let n = coeffs.len();
    let half = n / 2;
    let frequencies = (0..=half).map(|k| k as f64 / n as f64).collect();
    let power = coeffs[..=half].iter().map(|c| c.norm_sqr() / n as f64).collect();
    Ok(Spectrum {
        frequencies,
        power,
        n,
    })
}

/// Result of a dominant-frequency search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominantFrequency {
    /// Cycles per sample.
    pub frequency: f64,
    pub bin: usize,
    pub power: f64,
    /// Set when the winning bin carries essentially no power (e.g. a
    /// constant signal), so the frequency is only the tie-break default.
    pub low_power: bool,
}

/// Strongest non-zero bin of the padded spectrum; ties go to the lowest
/// frequency.
pub fn dominant_frequency(signal: &[f64]) -> Result<DominantFrequency> {
    if signal.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: signal.len(),
        });
    }
    let spec = power_spectrum(signal)?;
    let mut bin = 1;
    for k in 2..spec.power.len() {
        if spec.power[k] > spec.power[bin] {
            bin = k;
        }
    }
    let total: f64 = spec.power.iter().sum();
    let power = spec.power[bin];
    Ok(DominantFrequency {
        frequency: spec.frequencies[bin],
        bin,
        power,
        low_power: power <= 1e-12 * total || total == 0.0,
    })
}
