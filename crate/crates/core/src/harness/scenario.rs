use crate::error::{Error, Result};
use crate::fvm::{BoundaryCondition, Limiter};
use crate::medium::{CrossSectionProfile, GasModel, ProfileKind};

pub const PRESETS: [&str; 2] = ["scenario_a", "scenario_b"];

/// Gaussian density bump `amplitude·exp(−((x − center)/width)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
}

impl Pulse {
    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.width;
        self.amplitude * (-s * s).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub profile: CrossSectionProfile,
    pub gas: GasModel,
    pub rho_background: f64,
    pub pulse: Pulse,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.pulse.amplitude > 0.0) {
            return Err(Error::param("pulse.amplitude", "must be positive"));
        }
        if !(self.pulse.width > 0.0) {
            return Err(Error::param("pulse.width", "must be positive"));
        }
        if !self.pulse.center.is_finite() {
            return Err(Error::param("pulse.center", "must be finite"));
        }
        if !(self.rho_background > 0.0 && self.rho_background.is_finite()) {
            return Err(Error::param("rho0", "must be positive"));
        }
        if !(self.x_hi > self.x_lo) || !self.x_lo.is_finite() || !self.x_hi.is_finite() {
            return Err(Error::DegenerateInterval {
                lo: self.x_lo,
                hi: self.x_hi,
            });
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::param("t_end", "must be non-negative"));
        }
        if self.snapshot_times.is_empty() {
            return Err(Error::param("snapshots", "need at least one time"));
        }
        let mut prev = f64::NEG_INFINITY;
        for &t in &self.snapshot_times {
            if !(t >= 0.0 && t > prev && t <= self.t_end) {
                return Err(Error::param(
                    "snapshots",
                    format!("times must increase within [0, t_end = {}], got {t}", self.t_end),
                ));
            }
            prev = t;
        }
        Ok(())
    }

    pub fn initial_density(&self, x: f64) -> f64 {
        self.rho_background + self.pulse.eval(x)
    }

    pub fn period(&self) -> f64 {
        self.profile.period()
    }

    /// The reduced-size variant: domain `[−100, 100]`, `t_end = 60`.
    pub fn ci_scale(mut self) -> Self {
        self.x_lo = -100.0;
        self.x_hi = 100.0;
        self.t_end = 60.0;
        self.snapshot_times = vec![0.0, 15.0, 30.0, 45.0, 60.0];
        self
    }

    /// Replaces `t_end` and drops snapshot times beyond it, keeping `t_end`
    /// itself as the last snapshot.
    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self.snapshot_times.retain(|&t| t < t_end);
        self.snapshot_times.push(t_end);
        self
    }
}

pub const DEFAULT_SNAPSHOTS: [f64; 6] = [0.0, 30.0, 60.0, 120.0, 240.0, 480.0];
pub const DEFAULT_DOMAIN: (f64, f64) = (-500.0, 500.0);

fn preset(name: &str, kind: ProfileKind, pulse: Pulse) -> Scenario {
    Scenario {
        name: name.to_string(),
        profile: CrossSectionProfile::new(kind, 1.0).expect("preset profile is valid"),
        gas: GasModel::default(),
        rho_background: 0.3,
        pulse,
        x_lo: DEFAULT_DOMAIN.0,
        x_hi: DEFAULT_DOMAIN.1,
        t_end: 480.0,
        snapshot_times: DEFAULT_SNAPSHOTS.to_vec(),
    }
}

pub fn scenario_a() -> Scenario {
    preset(
        "scenario_a",
        ProfileKind::PiecewiseConstant {
            breakpoints: vec![0.0, 0.5],
            values: vec![0.25, 0.75],
        },
        Pulse {
            amplitude: 1.0 / 20.0,
            width: 8.0,
            center: 0.0,
        },
    )
}

pub fn scenario_b() -> Scenario {
    preset(
        "scenario_b",
        ProfileKind::Sinusoidal {
            mean: 0.6,
            amplitude: 0.4,
        },
        Pulse {
            amplitude: 1.0 / 12.0,
            width: 5.0,
            center: 0.0,
        },
    )
}

pub fn build_scenario(name: &str) -> Result<Scenario> {
    match name {
        "scenario_a" => Ok(scenario_a()),
        "scenario_b" => Ok(scenario_b()),
        _ => Err(Error::UnknownPreset {
            name: name.to_string(),
            available: PRESETS.join(", "),
        }),
    }
}

/// Discretization and comparison settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub cells_per_period: usize,
    pub cfl: f64,
    pub bc: BoundaryCondition,
    /// Finite-volume correction limiter; `none` is the first-order scheme.
    pub limiter: Limiter,
    pub n_modes: usize,
    pub spectral_cfl: f64,
    pub dealias: bool,
    /// Half-width of the comparison window around the right-going peak.
    pub window_half_width: f64,
    /// Peak prominence threshold as a fraction of the pulse amplitude.
    pub prominence_fraction: f64,
    /// Period-averaged `|ρ_x|` above which a run is flagged as breaking.
    pub steepness_threshold: f64,
    /// Largest acceptable `rel_L2_rho` at the earliest nonzero snapshot.
    pub early_error_threshold: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            cells_per_period: 32,
            cfl: 0.45,
            bc: BoundaryCondition::Outflow,
            limiter: Limiter::Mc,
            n_modes: 8192,
            spectral_cfl: 0.5,
            dealias: true,
            window_half_width: 50.0,
            prominence_fraction: 0.1,
            steepness_threshold: 0.02,
            early_error_threshold: 0.05,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        if self.cells_per_period < 8 {
            return Err(Error::param("cells_per_period", "need at least 8"));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::param("cfl", "must lie in (0, 1)"));
        }
        if !(self.spectral_cfl > 0.0 && self.spectral_cfl.is_finite()) {
            return Err(Error::param("spectral_cfl", "must be positive"));
        }
        if !(self.window_half_width > 0.0) {
            return Err(Error::param("window_half_width", "must be positive"));
        }
        if !(self.prominence_fraction > 0.0) {
            return Err(Error::param("prominence_fraction", "must be positive"));
        }
        if !(self.steepness_threshold > 0.0) {
            return Err(Error::param("steepness_threshold", "must be positive"));
        }
        Ok(())
    }

    /// Spectral resolution matching the CI-scale domain at the default
    /// point density.
    pub fn ci_scale(mut self) -> Self {
        self.n_modes = 2048;
        self
    }
}
