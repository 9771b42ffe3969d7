//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. `scenario` picks the
//! preset every other key overrides (default `scenario_a`); giving `profile`
//! replaces the preset's cross-section with one built from the `profile.*`
//! keys. Lists are comma-separated.

use std::collections::BTreeMap;

use super::scenario::{build_scenario, Numerics, Scenario};
use crate::error::{Error, Result};
use crate::medium::{CrossSectionProfile, GasModel, ProfileKind};

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("scenario", "base preset: scenario_a or scenario_b"),
    ("name", "scenario id written into output headers"),
    ("profile", "piecewise, sinusoidal or constant; replaces the preset profile"),
    ("profile.breakpoints", "piecewise breakpoints within one period, starting at 0"),
    ("profile.values", "piecewise values, one per breakpoint"),
    ("profile.mean", "sinusoidal mean, or the constant value"),
    ("profile.amplitude", "sinusoidal amplitude"),
    ("period", "profile period"),
    ("kappa", "pressure constant"),
    ("gamma", "adiabatic exponent, 1 < gamma < 5/3"),
    ("rho0", "background density"),
    ("pulse.amplitude", "initial density bump height"),
    ("pulse.width", "initial density bump width"),
    ("pulse.center", "initial density bump center"),
    ("x_lo", "left domain bound"),
    ("x_hi", "right domain bound"),
    ("t_end", "final time"),
    ("snapshots", "snapshot times"),
    ("cells_per_period", "finite-volume cells per period"),
    ("cfl", "finite-volume CFL number"),
    ("bc", "finite-volume boundary: outflow or periodic"),
    ("limiter", "finite-volume limiter: none, minmod, superbee, vanleer or mc"),
    ("n_modes", "spectral collocation points"),
    ("spectral_cfl", "spectral time step as a fraction of dx/c0"),
    ("dealias", "two-thirds rule on or off: true or false"),
    ("window_half_width", "half-width of the comparison window"),
    ("prominence_fraction", "peak prominence as a fraction of the pulse amplitude"),
    ("steepness_threshold", "period-averaged |rho_x| that flags wave breaking"),
    ("early_error_threshold", "rel_L2_rho bound at the earliest nonzero snapshot"),
];

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| Error::Config {
                line,
                reason: format!("`{key}`: {e}"),
            }),
        }
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| Error::Config {
                    line,
                    reason: format!("`{key}`: {e}"),
                }),
        }
    }
}

fn required<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::param("profile", format!("missing `{key}`")))
}

pub fn parse_config(text: &str) -> Result<(Scenario, Numerics)> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (k, v) = trimmed.split_once('=').ok_or_else(|| Error::Config {
            line,
            reason: format!("expected key = value, got `{trimmed}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !known(k) {
            return Err(Error::Config {
                line,
                reason: format!("unknown key `{k}`"),
            });
        }
        if map.insert(k.to_string(), (line, v.to_string())).is_some() {
            return Err(Error::Config {
                line,
                reason: format!("duplicate key `{k}`"),
            });
        }
    }
    let mut e = Entries { map };

    let base = e.take("scenario").map(|(_, v)| v);
    let mut s = build_scenario(base.as_deref().unwrap_or("scenario_a"))?;
    if let Some((_, name)) = e.take("name") {
        s.name = name;
    }

    let period = e.parse::<f64>("period")?.unwrap_or(s.profile.period());
    let kind = match e.take("profile") {
        Some((line, kind)) => {
            let kind = match kind.as_str() {
                "piecewise" => ProfileKind::PiecewiseConstant {
                    breakpoints: required(e.list("profile.breakpoints")?, "profile.breakpoints")?,
                    values: required(e.list("profile.values")?, "profile.values")?,
                },
                "sinusoidal" => ProfileKind::Sinusoidal {
                    mean: required(e.parse("profile.mean")?, "profile.mean")?,
                    amplitude: required(e.parse("profile.amplitude")?, "profile.amplitude")?,
                },
                "constant" => {
                    let v: f64 = required(e.parse("profile.mean")?, "profile.mean")?;
                    ProfileKind::PiecewiseConstant {
                        breakpoints: vec![0.0],
                        values: vec![v],
                    }
                }
                other => {
                    return Err(Error::Config {
                        line,
                        reason: format!("unknown profile kind `{other}`"),
                    })
                }
            };
            Some(kind)
        }
        None => None,
    };
    if let Some((line, _)) = ["profile.breakpoints", "profile.values", "profile.mean", "profile.amplitude"]
        .iter()
        .find_map(|k| e.map.get(*k).cloned())
    {
        return Err(Error::Config {
            line,
            reason: "profile.* keys need a matching `profile` kind".into(),
        });
    }
    let kind = kind.unwrap_or_else(|| match s.profile.kind().clone() {
        ProfileKind::PiecewiseConstant { breakpoints, values } => {
            let scale = period / s.profile.period();
            ProfileKind::PiecewiseConstant {
                breakpoints: breakpoints.iter().map(|b| b * scale).collect(),
                values,
            }
        }
        k => k,
    });
    s.profile = CrossSectionProfile::new(kind, period)?;

    let kappa = e.parse::<f64>("kappa")?.unwrap_or(s.gas.kappa());
    let gamma = e.parse::<f64>("gamma")?.unwrap_or(s.gas.gamma());
    s.gas = GasModel::new(kappa, gamma)?;

    if let Some(v) = e.parse("rho0")? {
        s.rho_background = v;
    }
    if let Some(v) = e.parse("pulse.amplitude")? {
        s.pulse.amplitude = v;
    }
    if let Some(v) = e.parse("pulse.width")? {
        s.pulse.width = v;
    }
    if let Some(v) = e.parse("pulse.center")? {
        s.pulse.center = v;
    }
    if let Some(v) = e.parse("x_lo")? {
        s.x_lo = v;
    }
    if let Some(v) = e.parse("x_hi")? {
        s.x_hi = v;
    }
    let snapshots = e.list("snapshots")?;
    if let Some(t_end) = e.parse::<f64>("t_end")? {
        s = s.with_t_end(t_end);
    }
    if let Some(times) = snapshots {
        s.snapshot_times = times;
    }

    let mut n = Numerics::default();
    if let Some(v) = e.parse("cells_per_period")? {
        n.cells_per_period = v;
    }
    if let Some(v) = e.parse("cfl")? {
        n.cfl = v;
    }
    if let Some(v) = e.parse("bc")? {
        n.bc = v;
    }
    if let Some(v) = e.parse("limiter")? {
        n.limiter = v;
    }
    if let Some(v) = e.parse("n_modes")? {
        n.n_modes = v;
    }
    if let Some(v) = e.parse("spectral_cfl")? {
        n.spectral_cfl = v;
    }
    if let Some(v) = e.parse("dealias")? {
        n.dealias = v;
    }
    if let Some(v) = e.parse("window_half_width")? {
        n.window_half_width = v;
    }
    if let Some(v) = e.parse("prominence_fraction")? {
        n.prominence_fraction = v;
    }
    if let Some(v) = e.parse("steepness_threshold")? {
        n.steepness_threshold = v;
    }
    if let Some(v) = e.parse("early_error_threshold")? {
        n.early_error_threshold = v;
    }
    debug_assert!(e.map.is_empty(), "unconsumed keys {:?}", e.map.keys());

    s.validate()?;
    n.validate()?;
    Ok((s, n))
}
