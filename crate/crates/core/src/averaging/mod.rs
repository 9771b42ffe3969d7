//! Averaging operators on periodic functions of the fast variable.
//!
//! A [`PeriodicFunction`] is described on the normalized cell `y ∈ [0, 1)`
//! (physical position `x = y·period`). Three operators act on it:
//!
//! * [`mean`](PeriodicFunction::mean): `⟨b⟩ = ∫₀¹ b dy`
//! * [`fluctuation`](PeriodicFunction::fluctuation): `{b} = b − ⟨b⟩`
//! * [`bracket`](PeriodicFunction::bracket): `[[b]](y) = {∫₀^y {b} dξ}`
//!
//! When a function carries an exact piecewise-polynomial representation all
//! three are evaluated in closed form, so discontinuous data (step profiles)
//! never gets sampled across a jump. Otherwise samples are used: the mean is
//! the trapezoid rule and the bracket is the spectral antiderivative, both of
//! which converge spectrally for smooth periodic data.

mod piecewise;

pub use piecewise::PiecewisePoly;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{is_nyquist, mode_index, Fourier};

pub const DEFAULT_SAMPLES: usize = 1024;
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone)]
pub struct PeriodicFunction {
    samples: Vec<f64>,
    period: f64,
    exact: Option<PiecewisePoly>,
}

fn check_len(n: usize) -> Result<()> {
    if n < MIN_SAMPLES || !n.is_power_of_two() {
        return Err(Error::param(
            "samples",
            format!("need a power of two >= {MIN_SAMPLES}, got {n}"),
        ));
    }
    Ok(())
}

fn check_period(period: f64) -> Result<()> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::param("period", format!("must be positive, got {period}")));
    }
    Ok(())
}

impl PeriodicFunction {
    /// Sample `f(y)` at `y_j = j/n`.
    pub fn from_fn(n: usize, period: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_len(n)?;
        check_period(period)?;
        let samples = (0..n).map(|j| f(j as f64 / n as f64)).collect();
        Ok(Self {
            samples,
            period,
            exact: None,
        })
    }

    pub fn from_samples(samples: Vec<f64>, period: f64) -> Result<Self> {
        check_len(samples.len())?;
        check_period(period)?;
        Ok(Self {
            samples,
            period,
            exact: None,
        })
    }

    pub fn from_piecewise(n: usize, period: f64, exact: PiecewisePoly) -> Result<Self> {
        check_len(n)?;
        check_period(period)?;
        Ok(Self::with_exact(n, period, exact))
    }

    pub fn constant(n: usize, period: f64, c: f64) -> Result<Self> {
        Self::from_piecewise(n, period, PiecewisePoly::constant(c))
    }

    fn with_exact(n: usize, period: f64, exact: PiecewisePoly) -> Self {
        let samples = (0..n).map(|j| exact.eval(j as f64 / n as f64)).collect();
        Self {
            samples,
            period,
            exact: Some(exact),
        }
    }

    fn sampled(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            period: self.period,
            exact: None,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn exact(&self) -> Option<&PiecewisePoly> {
        self.exact.as_ref()
    }

    /// Value at the fast variable `y` (reduced mod 1). Uses the exact
    /// representation when present, otherwise the trigonometric interpolant.
    pub fn eval(&self, y: f64) -> f64 {
        if let Some(p) = &self.exact {
            return p.eval(y);
        }
        let n = self.len();
        let spec = Fourier::new(n).forward(&self.samples);
        let y = y.rem_euclid(1.0);
        let mut sum = 0.0;
        for (j, c) in spec.iter().enumerate() {
            let phase = std::f64::consts::TAU * mode_index(j, n) as f64 * y;
            // Nyquist term split symmetrically between +n/2 and -n/2
            if is_nyquist(j, n) {
                sum += c.re * phase.cos();
            } else {
                sum += c.re * phase.cos() - c.im * phase.sin();
            }
        }
        sum / n as f64
    }

    pub fn mean(&self) -> f64 {
        match &self.exact {
            Some(p) => p.integral(),
            None => self.samples.iter().sum::<f64>() / self.len() as f64,
        }
    }

    pub fn fluctuation(&self) -> Self {
        self.add_scalar(-self.mean())
    }

    pub fn bracket(&self) -> Self {
        let n = self.len();
        if let Some(p) = &self.exact {
            let anti = p.add_scalar(-p.integral()).antiderivative();
            let anti = anti.add_scalar(-anti.integral());
            return Self::with_exact(n, self.period, anti);
        }
        let fourier = Fourier::new(n);
        let mut spec = fourier.forward(&self.samples);
        for (j, c) in spec.iter_mut().enumerate() {
            let m = mode_index(j, n);
            if m == 0 || is_nyquist(j, n) {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c /= Complex64::new(0.0, std::f64::consts::TAU * m as f64);
            }
        }
        self.sampled(fourier.inverse_real(spec))
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v + s).collect(),
            period: self.period,
            exact: self.exact.as_ref().map(|p| p.add_scalar(s)),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v * s).collect(),
            period: self.period,
            exact: self.exact.as_ref().map(|p| p.scale(s)),
        }
    }

    pub fn pointwise(&self, other: &Self, op: PointwiseOp) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Incompatible(format!(
                "sample counts differ ({} vs {})",
                self.len(),
                other.len()
            )));
        }
        if (self.period - other.period).abs() > 1e-12 * self.period {
            return Err(Error::Incompatible(format!(
                "periods differ ({} vs {})",
                self.period, other.period
            )));
        }
        if op == PointwiseOp::Div {
            let min_abs = match &other.exact {
                Some(p) => p.min_abs(),
                None => other.samples.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())),
            };
            let scale = other.samples.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            if !(min_abs > 1e-12 * scale) {
                return Err(Error::DivisionByZero { min_abs });
            }
        }
        if let (Some(p), Some(q)) = (&self.exact, &other.exact) {
            let exact = match op {
                PointwiseOp::Add => Some(p.add(q)),
                PointwiseOp::Sub => Some(p.sub(q)),
                PointwiseOp::Mul => Some(p.mul(q)),
                PointwiseOp::Div => p.div(q),
            };
            if let Some(exact) = exact {
                return Ok(Self::with_exact(self.len(), self.period, exact));
            }
        }
        let f: fn(f64, f64) -> f64 = match op {
            PointwiseOp::Add => |a, b| a + b,
            PointwiseOp::Sub => |a, b| a - b,
            PointwiseOp::Mul => |a, b| a * b,
            PointwiseOp::Div => |a, b| a / b,
        };
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(self.sampled(samples))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.pointwise(other, PointwiseOp::Mul)
    }

    /// Pointwise real power. Negative exponents require a function bounded
    /// away from zero.
    pub fn pow(&self, exponent: f64) -> Result<Self> {
        if exponent < 0.0 {
            let min_abs = match &self.exact {
                Some(p) => p.min_abs(),
                None => self.samples.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())),
            };
            if !(min_abs > 1e-300) {
                return Err(Error::DivisionByZero { min_abs });
            }
        }
        if let Some(exact) = self.exact.as_ref().and_then(|p| p.pow(exponent)) {
            return Ok(Self::with_exact(self.len(), self.period, exact));
        }
        let samples: Vec<f64> = self.samples.iter().map(|v| v.powf(exponent)).collect();
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("exponent", "power produced non-finite values"));
        }
        Ok(self.sampled(samples))
    }

    /// `⟨self · other⟩`.
    pub fn mean_product(&self, other: &Self) -> Result<f64> {
        Ok(self.mul(other)?.mean())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn step() -> PeriodicFunction {
        let p = PiecewisePoly::piecewise_constant(vec![0.0, 0.5, 1.0], &[0.25, 0.75]).unwrap();
        PeriodicFunction::from_piecewise(DEFAULT_SAMPLES, 1.0, p).unwrap()
    }

    fn sine() -> PeriodicFunction {
        PeriodicFunction::from_fn(DEFAULT_SAMPLES, 1.0, |y| (TAU * y).sin()).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert!(sine().mean().abs() < 1e-15);
        assert_eq!(step().mean(), 0.5);
        let c = PeriodicFunction::constant(64, 1.0, 2.5).unwrap();
        assert_eq!(c.mean(), 2.5);
    }

    #[test]
    fn fluctuation_examples() {
        let c = PeriodicFunction::constant(64, 1.0, 2.5).unwrap().fluctuation();
        assert!(c.samples().iter().all(|&v| v == 0.0));
        let f = step().fluctuation();
        assert_eq!(f.eval(0.2), -0.25);
        assert_eq!(f.eval(0.7), 0.25);
        let s = sine();
        let fs = s.fluctuation();
        for (a, b) in s.samples().iter().zip(fs.samples()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn bracket_of_sine_is_shifted_cosine() {
        let b = sine().bracket();
        for (j, v) in b.samples().iter().enumerate() {
            let y = j as f64 / b.len() as f64;
            assert!((v + (TAU * y).cos() / (2.0 * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn bracket_of_step_is_tent() {
        let b = step().bracket();
        assert!((b.eval(0.0) - 1.0 / 16.0).abs() < 1e-16);
        assert!((b.eval(0.5) + 1.0 / 16.0).abs() < 1e-16);
        assert!((b.eval(0.25)).abs() < 1e-16);
        assert!((b.eval(1.0 - 1e-12) - 1.0 / 16.0).abs() < 1e-12);
        assert!(b.mean().abs() < 1e-16);
        let c = PeriodicFunction::constant(64, 1.0, 3.0).unwrap().bracket();
        assert!(c.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pointwise_examples() {
        let a = step();
        let inv = a.pow(-1.0).unwrap();
        assert_eq!(inv.eval(0.1), 4.0);
        assert!((inv.eval(0.6) - 4.0 / 3.0).abs() < 1e-15);
        let one = a.mul(&inv).unwrap();
        assert!(one.samples().iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let back = a.fluctuation().add_scalar(a.mean());
        assert_eq!(back.samples(), a.samples());
    }

    #[test]
    fn division_by_zero_is_rejected() {
        let zero_crossing = sine();
        let one = PeriodicFunction::constant(DEFAULT_SAMPLES, 1.0, 1.0).unwrap();
        assert!(matches!(
            one.pointwise(&zero_crossing, PointwiseOp::Div),
            Err(Error::DivisionByZero { .. })
        ));
        assert!(zero_crossing.pow(-1.0).is_err());
    }

    #[test]
    fn exact_samples_agree_with_representation() {
        let b = step().bracket().mul(&step()).unwrap();
        let p = b.exact().unwrap();
        for (j, v) in b.samples().iter().enumerate() {
            assert!((v - p.eval(j as f64 / b.len() as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn trig_interpolant_eval() {
        let f = PeriodicFunction::from_fn(64, 1.0, |y| (TAU * 3.0 * y).cos() + 0.5).unwrap();
        assert!((f.eval(0.123) - ((TAU * 3.0 * 0.123).cos() + 0.5)).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(PeriodicFunction::from_fn(8, 1.0, |_| 1.0).is_err());
        assert!(PeriodicFunction::from_fn(100, 1.0, |_| 1.0).is_err());
        assert!(PeriodicFunction::from_fn(64, 0.0, |_| 1.0).is_err());
    }
}
