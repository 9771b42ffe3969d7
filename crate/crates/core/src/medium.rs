//! Gas pressure law and periodic pipe cross-sections.

use std::f64::consts::TAU;

use crate::averaging::{PeriodicFunction, PiecewisePoly};
use crate::error::{Error, Result};

/// Isentropic pressure law `P(ρ) = κ ρ^γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    kappa: f64,
    gamma: f64,
}

/// `P`, `P'` and `P''` at one density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pressure {
    pub p: f64,
    pub dp: f64,
    pub d2p: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            gamma: 1.4,
        }
    }
}

impl GasModel {
    /// Requires `κ > 0` and `1 < γ < 5/3`.
    pub fn new(kappa: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma < 5.0 / 3.0) {
            return Err(Error::param(
                "gamma",
                format!("{gamma} outside (1, 5/3); use GasModel::new_unrestricted to override"),
            ));
        }
        Self::new_unrestricted(kappa, gamma)
    }

    /// Only requires `κ > 0` and `γ ≥ 1`.
    pub fn new_unrestricted(kappa: f64, gamma: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::param("kappa", format!("must be positive, got {kappa}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::param("gamma", format!("must be >= 1, got {gamma}")));
        }
        Ok(Self { kappa, gamma })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn pressure(&self, rho: f64) -> Result<Pressure> {
        if !(rho > 0.0) {
            return Err(Error::Vacuum { rho });
        }
        let g = self.gamma;
        let rg2 = rho.powf(g - 2.0);
        let dp = self.kappa * g * rg2 * rho;
        Ok(Pressure {
            p: dp * rho / g,
            dp,
            d2p: self.kappa * g * (g - 1.0) * rg2,
        })
    }

    /// `(P, sqrt(P'))` without the vacuum check; callers guarantee `rho > 0`.
    #[inline]
    pub(crate) fn p_and_sound_speed(&self, rho: f64) -> (f64, f64) {
        let p = self.kappa * rho.powf(self.gamma);
        (p, (self.gamma * p / rho).sqrt())
    }
}

/// Shape of one period of the cross-section.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `values[i]` on `[breakpoints[i], breakpoints[i+1])`, the last value
    /// running up to the period. Breakpoints are physical positions in
    /// `[0, period)` starting at 0.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// `mean + amplitude·sin(2πx/period)`.
    Sinusoidal { mean: f64, amplitude: f64 },
    /// Uniform samples at `x_j = j·period/M`, linearly interpolated.
    Sampled { samples: Vec<f64> },
}

/// Periodic cross-sectional area `a(x)` with period `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionProfile {
    kind: ProfileKind,
    period: f64,
    /// Normalized shape on `[0, 1)`, present for piecewise-polynomial kinds.
    shape: Option<PiecewisePoly>,
}

impl CrossSectionProfile {
    pub fn new(kind: ProfileKind, period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::param("period", format!("must be positive, got {period}")));
        }
        let shape = match &kind {
            ProfileKind::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                if breakpoints.is_empty() || breakpoints.len() != values.len() {
                    return Err(Error::param(
                        "breakpoints",
                        "need one breakpoint per value, the first at 0",
                    ));
                }
                if breakpoints[0] != 0.0 {
                    return Err(Error::param("breakpoints", "first breakpoint must be 0"));
                }
                if breakpoints.windows(2).any(|w| w[1] <= w[0])
                    || breakpoints[breakpoints.len() - 1] >= period
                {
                    return Err(Error::param(
                        "breakpoints",
                        "must be strictly increasing inside [0, period)",
                    ));
                }
                let mut unit: Vec<f64> = breakpoints.iter().map(|b| b / period).collect();
                unit.push(1.0);
                Some(PiecewisePoly::piecewise_constant(unit, values)?)
            }
            ProfileKind::Sinusoidal { mean, amplitude } => {
                if !(amplitude.abs() < *mean) {
                    return Err(Error::NonPositiveProfile {
                        min: mean - amplitude.abs(),
                    });
                }
                None
            }
            ProfileKind::Sampled { samples } => Some(PiecewisePoly::periodic_linear(samples)?),
        };
        let profile = Self {
            kind,
            period,
            shape,
        };
        let min = profile.min_value();
        if !(min > 0.0) {
            return Err(Error::NonPositiveProfile { min });
        }
        Ok(profile)
    }

    pub fn constant(value: f64, period: f64) -> Result<Self> {
        Self::new(
            ProfileKind::PiecewiseConstant {
                breakpoints: vec![0.0],
                values: vec![value],
            },
            period,
        )
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn min_value(&self) -> f64 {
        match &self.kind {
            ProfileKind::PiecewiseConstant { values, .. } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
            ProfileKind::Sinusoidal { mean, amplitude } => mean - amplitude.abs(),
            ProfileKind::Sampled { samples } => {
                samples.iter().copied().fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Short human-readable description.
    pub fn label(&self) -> String {
        match &self.kind {
            ProfileKind::PiecewiseConstant { values, .. } => {
                format!("piecewise{values:?}/period={}", self.period)
            }
            ProfileKind::Sinusoidal { mean, amplitude } => {
                format!("sinusoidal(mean={mean},amplitude={amplitude})/period={}", self.period)
            }
            ProfileKind::Sampled { samples } => {
                format!("sampled({} points)/period={}", samples.len(), self.period)
            }
        }
    }

    /// `a(x)`, periodically extended.
    pub fn eval(&self, x: f64) -> f64 {
        let y = (x / self.period).rem_euclid(1.0);
        match (&self.kind, &self.shape) {
            (ProfileKind::Sinusoidal { mean, amplitude }, _) => mean + amplitude * (TAU * y).sin(),
            (_, Some(shape)) => shape.eval(y),
            _ => unreachable!("piecewise kinds always carry a shape"),
        }
    }

    /// `da/dy` in the fast variable, available in closed form for the
    /// sinusoidal kind only.
    pub fn slope(&self, y: f64) -> Option<f64> {
        match &self.kind {
            ProfileKind::Sinusoidal { amplitude, .. } => Some(TAU * amplitude * (TAU * y).cos()),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match (&self.kind, &self.shape) {
            (ProfileKind::Sinusoidal { mean, .. }, _) => *mean,
            (_, Some(shape)) => shape.integral(),
            _ => unreachable!(),
        }
    }

    /// `∫₀^s a dx` for `s ∈ [0, period]`.
    fn integral_within_period(&self, s: f64) -> f64 {
        let y = s / self.period;
        match (&self.kind, &self.shape) {
            (ProfileKind::Sinusoidal { mean, amplitude }, _) => {
                mean * s + amplitude * self.period / TAU * (1.0 - (TAU * y).cos())
            }
            (_, Some(shape)) => {
                let mut acc = 0.0;
                for (w, c) in shape.breaks().windows(2).zip(shape.pieces()) {
                    if y <= w[0] {
                        break;
                    }
                    let h = y.min(w[1]) - w[0];
                    let mut power = h;
                    for (k, &ck) in c.iter().enumerate() {
                        acc += ck * power / (k + 1) as f64;
                        power *= h;
                    }
                }
                acc * self.period
            }
            _ => unreachable!(),
        }
    }

    /// Exact average of `a` over `[x_lo, x_hi]`.
    pub fn cell_average(&self, x_lo: f64, x_hi: f64) -> Result<f64> {
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::DegenerateInterval { lo: x_lo, hi: x_hi });
        }
        let d = self.period;
        let n_lo = (x_lo / d).floor();
        let n_hi = (x_hi / d).floor();
        let r_lo = (x_lo - n_lo * d).clamp(0.0, d);
        let r_hi = (x_hi - n_hi * d).clamp(0.0, d);
        let integral = if n_lo == n_hi {
            self.integral_within_period(r_hi) - self.integral_within_period(r_lo)
        } else {
            let full = self.integral_within_period(d);
            (full - self.integral_within_period(r_lo))
                + (n_hi - n_lo - 1.0) * full
                + self.integral_within_period(r_hi)
        };
        Ok(integral / (x_hi - x_lo))
    }

    /// The profile as a function of the fast variable, `a(y·period)`,
    /// carrying the exact representation when one exists.
    pub fn unit_function(&self, n: usize) -> Result<PeriodicFunction> {
        match (&self.kind, &self.shape) {
            (ProfileKind::Sinusoidal { mean, amplitude }, _) => {
                PeriodicFunction::from_fn(n, self.period, |y| mean + amplitude * (TAU * y).sin())
            }
            (_, Some(shape)) => PeriodicFunction::from_piecewise(n, self.period, shape.clone()),
            _ => unreachable!(),
        }
    }

    /// `da/dy` as a periodic function, when available in closed form.
    pub fn unit_slope(&self, n: usize) -> Option<Result<PeriodicFunction>> {
        self.slope(0.0)?;
        Some(PeriodicFunction::from_fn(n, self.period, |y| {
            self.slope(y).expect("checked above")
        }))
    }
}
