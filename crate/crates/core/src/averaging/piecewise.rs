//! Piecewise polynomials on the unit period `[0, 1)`.
//!
//! Each piece stores its coefficients in ascending powers of the local
//! variable `t = y - breaks[i]`, which keeps evaluation well conditioned
//! near breakpoints. Pieces are left-closed: at a breakpoint the value of
//! the piece starting there is used.

use crate::error::{Error, Result};

const BREAK_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl PiecewisePoly {
    /// `breaks` must start at 0, end at 1 and be strictly increasing; there is
    /// one coefficient vector per interval.
    pub fn new(breaks: Vec<f64>, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if breaks.len() < 2 || coeffs.len() != breaks.len() - 1 {
            return Err(Error::param(
                "breaks",
                "need n+1 breakpoints for n polynomial pieces",
            ));
        }
        if breaks[0] != 0.0 || breaks[breaks.len() - 1] != 1.0 {
            return Err(Error::param("breaks", "must start at 0 and end at 1"));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("breaks", "must be strictly increasing"));
        }
        if coeffs.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::param("coeffs", "non-finite coefficient"));
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| if c.is_empty() { vec![0.0] } else { c })
            .collect();
        Ok(Self { breaks, coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            breaks: vec![0.0, 1.0],
            coeffs: vec![vec![c]],
        }
    }

    /// Step function: `values[i]` on `[breaks[i], breaks[i+1])`.
    pub fn piecewise_constant(breaks: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(breaks, values.iter().map(|&v| vec![v]).collect())
    }

    /// Continuous piecewise-linear interpolant of uniform periodic samples.
    pub fn periodic_linear(samples: &[f64]) -> Result<Self> {
        let m = samples.len();
        if m < 2 {
            return Err(Error::param("samples", "need at least two samples"));
        }
        let h = 1.0 / m as f64;
        let mut breaks: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();
        breaks.push(1.0);
        let coeffs = (0..m)
            .map(|i| {
                let next = samples[(i + 1) % m];
                vec![samples[i], (next - samples[i]) / h]
            })
            .collect();
        Self::new(breaks, coeffs)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c[1..].iter().all(|&v| v == 0.0))
    }

    fn piece_index(&self, y: f64) -> usize {
        let idx = self.breaks.partition_point(|&b| b <= y);
        idx.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    /// Evaluate at `y`, reduced into `[0, 1)` first.
    pub fn eval(&self, y: f64) -> f64 {
        let y = y.rem_euclid(1.0);
        let i = self.piece_index(y);
        horner(&self.coeffs[i], y - self.breaks[i])
    }

    /// Exact integral over one period.
    pub fn integral(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.coeffs)
            .map(|(w, c)| integrate_local(c, w[1] - w[0]))
            .sum()
    }

    /// Continuous antiderivative vanishing at `y = 0`.
    pub fn antiderivative(&self) -> Self {
        let mut offset = 0.0;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (w, c) in self.breaks.windows(2).zip(&self.coeffs) {
            let mut anti = Vec::with_capacity(c.len() + 1);
            anti.push(offset);
            anti.extend(c.iter().enumerate().map(|(k, &ck)| ck / (k + 1) as f64));
            offset = horner(&anti, w[1] - w[0]);
            coeffs.push(anti);
        }
        Self {
            breaks: self.breaks.clone(),
            coeffs,
        }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            c[0] += s;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            for v in c.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    /// Re-express on a finer partition that contains every current breakpoint.
    fn refine(&self, breaks: &[f64]) -> Vec<Vec<f64>> {
        breaks[..breaks.len() - 1]
            .iter()
            .map(|&b| {
                let i = self.piece_index(b);
                taylor_shift(&self.coeffs[i], b - self.breaks[i])
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&[f64], &[f64]) -> Vec<f64>) -> Self {
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let lhs = self.refine(&breaks);
        let rhs = other.refine(&breaks);
        let coeffs = lhs.iter().zip(&rhs).map(|(p, q)| f(p, q)).collect();
        Self { breaks, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| poly_add(p, q, 1.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| poly_add(p, q, -1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, poly_mul)
    }

    /// Division by a piecewise-constant, nowhere-vanishing divisor.
    /// Returns `None` when the quotient is not a piecewise polynomial.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if !other.is_piecewise_constant() || other.coeffs.iter().any(|c| c[0] == 0.0) {
            return None;
        }
        Some(self.zip_with(other, |p, q| p.iter().map(|v| v / q[0]).collect()))
    }

    /// Real power. Exact for piecewise-constant data with any exponent and for
    /// non-negative integer exponents of general pieces.
    pub fn pow(&self, exponent: f64) -> Option<Self> {
        if self.is_piecewise_constant() {
            let coeffs: Vec<Vec<f64>> = self
                .coeffs
                .iter()
                .map(|c| vec![c[0].powf(exponent)])
                .collect();
            if coeffs.iter().any(|c| !c[0].is_finite()) {
                return None;
            }
            return Some(Self {
                breaks: self.breaks.clone(),
                coeffs,
            });
        }
        if exponent >= 0.0 && exponent.fract() == 0.0 && exponent <= 16.0 {
            let mut acc = Self::constant(1.0);
            for _ in 0..exponent as usize {
                acc = acc.mul(self);
            }
            return Some(acc);
        }
        None
    }

    /// Smallest absolute value taken on each piece, sampled densely. Exact for
    /// piecewise-constant and piecewise-linear data.
    pub fn min_abs(&self) -> f64 {
        let mut min = f64::INFINITY;
        for (w, c) in self.breaks.windows(2).zip(&self.coeffs) {
            let h = w[1] - w[0];
            let probes = if c.len() <= 2 { 1 } else { 64 };
            for j in 0..=probes {
                let t = h * j as f64 / probes as f64;
                min = min.min(horner(c, t).abs());
            }
        }
        min
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck)
}

fn integrate_local(c: &[f64], h: f64) -> f64 {
    let mut power = h;
    let mut sum = 0.0;
    for (k, &ck) in c.iter().enumerate() {
        sum += ck * power / (k + 1) as f64;
        power *= h;
    }
    sum
}

/// Coefficients of `p(t + s)` given those of `p(t)`.
fn taylor_shift(c: &[f64], s: f64) -> Vec<f64> {
    let mut out = c.to_vec();
    if s == 0.0 {
        return out;
    }
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            out[j] += s * out[j + 1];
        }
    }
    out
}

fn poly_add(p: &[f64], q: &[f64], sign: f64) -> Vec<f64> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|k| p.get(k).copied().unwrap_or(0.0) + sign * q.get(k).copied().unwrap_or(0.0))
        .collect()
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

fn merge_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for v in all {
        match out.last() {
            Some(&last) if v - last <= BREAK_TOL => {}
            _ => out.push(v),
        }
    }
    // the final break is always exactly 1
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}
