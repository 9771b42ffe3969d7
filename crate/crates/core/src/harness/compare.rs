use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use rustfft::num_complex::Complex64;

use super::average::period_average;
use super::scenario::{Numerics, Scenario};
use crate::error::{Error, Result};
use crate::fourier::Fourier;
use crate::snapshot::{fmt_float, Series, SolverKind};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub scenario: String,
    pub times: Vec<f64>,
    pub rel_l2_rho: Vec<f64>,
    pub rel_l2_q: Vec<f64>,
    pub peaks_fvm: Vec<usize>,
    pub peaks_homog: Vec<usize>,
    /// Speed of the leading right-going peak between consecutive snapshots;
    /// NaN at the first.
    pub leading_speed: Vec<f64>,
    /// Position of the right-going peak the window follows.
    pub window_center: Vec<f64>,
    /// Largest period-averaged `|ρ_x|` of the fine solution.
    pub max_gradient: Vec<f64>,
    pub wave_breaking: Vec<bool>,
}

impl ComparisonReport {
    pub fn any_breaking(&self) -> bool {
        self.wave_breaking.iter().any(|&b| b)
    }
}

/// Evaluates the trigonometric interpolant of `values`, sampled at
/// `x0 + j·length/n`, at each target.
pub fn spectral_interpolate(x0: f64, length: f64, values: &[f64], targets: &[f64]) -> Vec<f64> {
    let n = values.len();
    let spec = Fourier::new(n).forward(values);
    let half = n / 2;
    targets
        .iter()
        .map(|&x| {
            let theta = TAU * (x - x0) / length;
            let step = Complex64::from_polar(1.0, theta);
            let mut w = Complex64::new(1.0, 0.0);
            let mut acc = spec[0].re;
            for (m, c) in spec.iter().enumerate().take(n - half).skip(1) {
                w *= step;
                // resync the recurrence to keep rounding from accumulating
                if m % 256 == 0 {
                    w = Complex64::from_polar(1.0, theta * m as f64);
                }
                acc += 2.0 * (c * w).re;
            }
            if n % 2 == 0 {
                acc += spec[half].re * (theta * half as f64).cos();
            }
            acc / n as f64
        })
        .collect()
}

/// Indices of local maxima whose topographic prominence is at least
/// `min_prominence`. Flat tops count once, at their left end.
pub fn count_peaks(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                let h = values[i];
                let mut left_min = h;
                for k in (0..i).rev() {
                    if values[k] > h {
                        break;
                    }
                    left_min = left_min.min(values[k]);
                }
                let mut right_min = h;
                for &v in &values[j + 1..] {
                    if v > h {
                        break;
                    }
                    right_min = right_min.min(v);
                }
                if h - left_min.max(right_min) >= min_prominence {
                    peaks.push(i);
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// Position of the largest value at or to the right of `center`.
pub fn right_going_peak(x: &[f64], values: &[f64], center: f64) -> Option<f64> {
    argmax_where(x, values, |xi| xi >= center)
}

/// Position of the largest value at or to the left of `center`.
pub fn left_going_peak(x: &[f64], values: &[f64], center: f64) -> Option<f64> {
    argmax_where(x, values, |xi| xi <= center)
}

fn argmax_where(x: &[f64], values: &[f64], keep: impl Fn(f64) -> bool) -> Option<f64> {
    x.iter()
        .zip(values)
        .filter(|(xi, _)| keep(**xi))
        .fold(None, |best: Option<(f64, f64)>, (&xi, &v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((xi, v)),
        })
        .map(|(xi, _)| xi)
}

fn l2(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|d| d * d).sum::<f64>().sqrt()
}

/// `‖a − b‖ / ‖reference‖`, or the plain difference norm when the
/// reference vanishes.
fn relative_l2(a: &[f64], b: &[f64], reference: &[f64]) -> f64 {
    let num = l2(a.iter().zip(b).map(|(a, b)| a - b));
    let den = l2(reference.iter().copied());
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Period-averaged fine fields, compared against the homogenized solution
/// on a window that follows the right-going pulse.
pub fn compare(
    fvm: &Series,
    homog: &Series,
    scenario: &Scenario,
    numerics: &Numerics,
) -> Result<ComparisonReport> {
    if fvm.solver != SolverKind::Fvm || homog.solver != SolverKind::Homog {
        return Err(Error::Mismatch("expected an fvm series and a homog series".into()));
    }
    if fvm.snapshots.len() != homog.snapshots.len() {
        return Err(Error::Mismatch(format!(
            "{} fvm snapshots but {} homog snapshots",
            fvm.snapshots.len(),
            homog.snapshots.len()
        )));
    }
    let rho0 = scenario.rho_background;
    let period = scenario.period();
    let prominence = numerics.prominence_fraction * scenario.pulse.amplitude;
    let mut r = ComparisonReport {
        scenario: scenario.name.clone(),
        times: Vec::new(),
        rel_l2_rho: Vec::new(),
        rel_l2_q: Vec::new(),
        peaks_fvm: Vec::new(),
        peaks_homog: Vec::new(),
        leading_speed: Vec::new(),
        window_center: Vec::new(),
        max_gradient: Vec::new(),
        wave_breaking: Vec::new(),
    };
    let mut prev_lead: Option<(f64, f64)> = None;

    for (f, h) in fvm.snapshots.iter().zip(&homog.snapshots) {
        if (f.t - h.t).abs() > 1e-9 * f.t.abs().max(1.0) {
            return Err(Error::Mismatch(format!("snapshot times {} and {} differ", f.t, h.t)));
        }
        let rho_avg = period_average(&f.x, &f.rho, period, numerics.bc)?;
        let q_avg = period_average(&f.x, &f.q, period, numerics.bc)?;
        let dx = f.x[1] - f.x[0];
        let grad = rho_avg
            .windows(2)
            .map(|w| ((w[1] - w[0]) / dx).abs())
            .fold(0.0, f64::max);

        let center = right_going_peak(&f.x, &rho_avg, scenario.pulse.center)
            .ok_or_else(|| Error::Mismatch("fvm snapshot has no points right of the pulse".into()))?;
        // once the two halves of the pulse have separated, cut the window at
        // the midpoint so the left-going part stays out of it
        let split = left_going_peak(&f.x, &rho_avg, scenario.pulse.center)
            .filter(|&xl| center - xl > 2.0 * scenario.pulse.width)
            .map_or(f64::NEG_INFINITY, |xl| 0.5 * (xl + center));
        let lo = (center - numerics.window_half_width).max(split);
        let hi = center + numerics.window_half_width;
        let idx: Vec<usize> = (0..f.x.len()).filter(|&i| f.x[i] >= lo && f.x[i] <= hi).collect();
        let xs: Vec<f64> = idx.iter().map(|&i| f.x[i]).collect();

        let h_len = h.x.len() as f64 * (h.x[1] - h.x[0]);
        let h_rho = spectral_interpolate(h.x[0], h_len, &h.rho, &xs);
        let h_q = spectral_interpolate(h.x[0], h_len, &h.q, &xs);
        let f_pert: Vec<f64> = idx.iter().map(|&i| rho_avg[i] - rho0).collect();
        let h_pert: Vec<f64> = h_rho.iter().map(|v| v - rho0).collect();
        let f_q: Vec<f64> = idx.iter().map(|&i| q_avg[i]).collect();

        let peaks_f = count_peaks(&f_pert, prominence);
        let lead = peaks_f.last().map(|&i| xs[i]);
        let speed = match (prev_lead, lead) {
            (Some((t0, x0)), Some(x1)) if f.t > t0 => (x1 - x0) / (f.t - t0),
            _ => f64::NAN,
        };
        prev_lead = lead.map(|x| (f.t, x));

        r.times.push(f.t);
        r.rel_l2_rho.push(relative_l2(&f_pert, &h_pert, &f_pert));
        r.rel_l2_q.push(relative_l2(&f_q, &h_q, &f_q));
        r.peaks_fvm.push(peaks_f.len());
        r.peaks_homog.push(count_peaks(&h_pert, prominence).len());
        r.leading_speed.push(speed);
        r.window_center.push(center);
        r.max_gradient.push(grad);
        r.wave_breaking.push(grad > numerics.steepness_threshold);
    }
    Ok(r)
}

pub const REPORT_COLUMNS: &str = "time,rel_L2_rho,rel_L2_q,peaks_fvm,peaks_homog,leading_speed";

pub fn report_csv(report: &ComparisonReport) -> String {
    let t = report.times.last().copied().unwrap_or(0.0);
    let mut out = format!(
        "# t={t} scenario={} solver=compare wave_breaking={}\n{REPORT_COLUMNS}\n",
        report.scenario,
        report.any_breaking()
    );
    for i in 0..report.times.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(report.times[i]),
            fmt_float(report.rel_l2_rho[i]),
            fmt_float(report.rel_l2_q[i]),
            report.peaks_fvm[i],
            report.peaks_homog[i],
            fmt_float(report.leading_speed[i]),
        ));
    }
    out
}

pub fn write_report(report: &ComparisonReport, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, report_csv(report))?;
    Ok(())
}
