//! Linear dispersion relations of the homogenized system about `(ρ0, 0)`.
//!
//! Two forms are available: the all-space-derivative (`xxx`) system, which
//! loses stability at large wavenumbers, and the mixed-derivative (`xxt`)
//! system, which stays real whenever `α5b, β11b > 0`.

use std::fmt;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::homogenize::HomogCoefficients;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionForm {
    Xxx,
    Xxt,
}

impl fmt::Display for DispersionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DispersionForm::Xxx => "xxx",
            DispersionForm::Xxt => "xxt",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub k: f64,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    pub form: DispersionForm,
}

impl DispersionSample {
    fn pair(k: f64, omega: Complex64, form: DispersionForm) -> Self {
        Self {
            k,
            omega_plus: omega,
            omega_minus: -omega,
            form,
        }
    }

    /// `Re ω₊ / k`, or the long-wave limit is not defined at `k = 0` (NaN).
    pub fn phase_speed(&self) -> f64 {
        self.omega_plus.re / self.k
    }
}

/// `ω₊ = k·sqrt((α1 + ikα2 − k²α5)(β1 + β3ρ0 + ik(β4 + β10ρ0) − k²β11))`.
pub fn omega_xxx(k: f64, h: &HomogCoefficients, rho0: f64) -> DispersionSample {
    let i = Complex64::i();
    let left = h.alpha1 + i * k * h.alpha2 - k * k * h.alpha5;
    let right =
        h.beta1 + h.beta3 * rho0 + i * k * (h.beta4 + h.beta10 * rho0) - k * k * h.beta11;
    DispersionSample::pair(k, k * (left * right).sqrt(), DispersionForm::Xxx)
}

/// `ω₊ = k·sqrt(α1(β1 + β3ρ0) / ((1 + α5b k²)(1 + β11b k²)))`.
pub fn omega_xxt(k: f64, h: &HomogCoefficients, rho0: f64) -> Result<DispersionSample> {
    let k2 = k * k;
    for c in [h.alpha5b, h.beta11b] {
        if 1.0 + c * k2 == 0.0 {
            return Err(Error::SingularOperator { c, k });
        }
    }
    let num = h.alpha1 * (h.beta1 + h.beta3 * rho0);
    let den = (1.0 + h.alpha5b * k2) * (1.0 + h.beta11b * k2);
    let omega = k * Complex64::new(num / den, 0.0).sqrt();
    Ok(DispersionSample::pair(k, omega, DispersionForm::Xxt))
}

/// `sqrt(α1(β1 + β3ρ0))`, the `k → 0` phase speed of both forms.
pub fn long_wave_speed(h: &HomogCoefficients, rho0: f64) -> f64 {
    (h.alpha1 * (h.beta1 + h.beta3 * rho0)).sqrt()
}

/// `sqrt(α1 β1)`, the long-wave speed with the `O(δ)` correction dropped.
pub fn leading_order_speed(h: &HomogCoefficients) -> f64 {
    (h.alpha1 * h.beta1).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub k_max: f64,
    pub n_samples: usize,
    pub max_imag_xxx: f64,
    pub max_imag_xxt: f64,
    /// Smallest `k` at which `|Im ω|` of the `xxx` form exceeds the
    /// threshold, refined by bisection.
    pub xxx_threshold: Option<f64>,
    /// Sample with the largest `|Im ω|` of the `xxx` form.
    pub k_at_max_imag_xxx: f64,
}

pub const IMAG_THRESHOLD: f64 = 1e-10;

/// Scans `k ∈ [0, k_max]` on `n_samples` equispaced points.
pub fn stability_scan(
    h: &HomogCoefficients,
    rho0: f64,
    k_max: f64,
    n_samples: usize,
) -> Result<StabilityReport> {
    if !(k_max > 0.0 && k_max.is_finite()) {
        return Err(Error::param("k_max", format!("must be positive, got {k_max}")));
    }
    if n_samples < 2 {
        return Err(Error::param("n_samples", "need at least 2 samples"));
    }
    let imag_xxx = |k: f64| omega_xxx(k, h, rho0).omega_plus.im.abs();
    let mut max_xxx = 0.0_f64;
    let mut k_at_max = 0.0;
    let mut max_xxt = 0.0_f64;
    let mut threshold = None;
    let mut prev_k = 0.0;
    for j in 0..n_samples {
        let k = k_max * j as f64 / (n_samples - 1) as f64;
        let im = imag_xxx(k);
        if im > max_xxx {
            max_xxx = im;
            k_at_max = k;
        }
        if threshold.is_none() && im > IMAG_THRESHOLD {
            threshold = Some(bisect(&imag_xxx, prev_k, k));
        }
        max_xxt = max_xxt.max(omega_xxt(k, h, rho0)?.omega_plus.im.abs());
        prev_k = k;
    }
    Ok(StabilityReport {
        k_max,
        n_samples,
        max_imag_xxx: max_xxx,
        max_imag_xxt: max_xxt,
        xxx_threshold: threshold,
        k_at_max_imag_xxx: k_at_max,
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) > IMAG_THRESHOLD {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Samples both forms on `k ∈ [0, k_max]`.
pub fn sample_both(
    h: &HomogCoefficients,
    rho0: f64,
    k_max: f64,
    n_samples: usize,
) -> Result<Vec<DispersionSample>> {
    if n_samples < 2 {
        return Err(Error::param("n_samples", "need at least 2 samples"));
    }
    let mut out = Vec::with_capacity(2 * n_samples);
    for j in 0..n_samples {
        let k = k_max * j as f64 / (n_samples - 1) as f64;
        out.push(omega_xxx(k, h, rho0));
        out.push(omega_xxt(k, h, rho0)?);
    }
    Ok(out)
}
