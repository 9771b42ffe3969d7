use crate::error::{Error, Result};
use crate::fvm::BoundaryCondition;

/// Smallest number of cells per period `period_average` accepts.
pub const MIN_CELLS_PER_PERIOD: f64 = 8.0;

/// Centered moving average over one period of a cell-wise constant field on
/// uniform cells with the given `centers`. Cells partially inside the window
/// are weighted by their overlap; beyond the ends the field is extended per
/// `bc`.
pub fn period_average(
    centers: &[f64],
    values: &[f64],
    period: f64,
    bc: BoundaryCondition,
) -> Result<Vec<f64>> {
    let n = centers.len();
    if values.len() != n {
        return Err(Error::Mismatch(format!("{n} centers but {} values", values.len())));
    }
    if n < 2 {
        return Err(Error::param("centers", "need at least 2 cells"));
    }
    if !(period > 0.0) {
        return Err(Error::param("period", "must be positive"));
    }
    let dx = centers[1] - centers[0];
    if !(dx > 0.0) {
        return Err(Error::param("centers", "must increase"));
    }
    if period / dx < MIN_CELLS_PER_PERIOD * (1.0 - 1e-12) {
        return Err(Error::param(
            "cells_per_period",
            format!(
                "resolution {:.3} cells per period is below {MIN_CELLS_PER_PERIOD}",
                period / dx
            ),
        ));
    }
    let x_lo = centers[0] - 0.5 * dx;
    // prefix[j] = ∫ from x_lo to the left edge of cell j
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for v in values {
        acc += v * dx;
        prefix.push(acc);
    }
    let total = prefix[n];
    let within = |s: f64| -> f64 {
        let j = (s.floor() as usize).min(n - 1);
        prefix[j] + values[j] * (s - j as f64) * dx
    };
    let integral_to = |x: f64| -> f64 {
        let s = (x - x_lo) / dx;
        match bc {
            BoundaryCondition::Outflow => {
                if s < 0.0 {
                    values[0] * s * dx
                } else if s > n as f64 {
                    total + values[n - 1] * (s - n as f64) * dx
                } else {
                    within(s)
                }
            }
            BoundaryCondition::Periodic => {
                let wraps = (s / n as f64).floor();
                wraps * total + within(s - wraps * n as f64)
            }
        }
    };
    let half = 0.5 * period;
    Ok(centers
        .iter()
        .map(|&x| (integral_to(x + half) - integral_to(x - half)) / period)
        .collect())
}
