//! Thin wrapper around `rustfft` for real periodic data.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub struct Fourier {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("n", &self.n).finish()
    }
}

impl Fourier {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized forward transform of real samples.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub fn forward_into(&self, values: &[f64], buf: &mut [Complex64]) {
        for (b, &v) in buf.iter_mut().zip(values) {
            *b = Complex64::new(v, 0.0);
        }
        self.forward.process(buf);
    }

    /// Inverse transform (normalized by `1/n`), keeping the real part.
    pub fn inverse_real(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut spectrum);
        let scale = 1.0 / self.n as f64;
        spectrum.iter().map(|c| c.re * scale).collect()
    }

    /// In-place inverse; `out` receives the real part.
    pub fn inverse_into(&self, spectrum: &mut [Complex64], out: &mut [f64]) {
        self.inverse.process(spectrum);
        let scale = 1.0 / self.n as f64;
        for (o, c) in out.iter_mut().zip(spectrum.iter()) {
            *o = c.re * scale;
        }
    }
}

/// Signed mode index of FFT bin `j`: `0, 1, ..., n/2, -(n/2 - 1), ..., -1`.
/// The Nyquist bin (even `n`) maps to `+n/2`.
pub fn mode_index(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

pub fn is_nyquist(j: usize, n: usize) -> bool {
    n % 2 == 0 && j == n / 2
}
