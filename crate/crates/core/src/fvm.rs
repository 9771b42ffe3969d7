//! First-order f-wave finite-volume solver for
//!
//! ```text
//! a ρ_t + (a m)_x = 0
//! a m_t + (a m²/ρ + a P(ρ))_x = P(ρ) a_x
//! ```
//!
//! with `a` acting as a capacity function. The interface source is folded
//! into the flux difference so that `ρ = const, m = 0` is an exact discrete
//! steady state for any area profile.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::medium::{CrossSectionProfile, GasModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    /// Zero-order extrapolation; waves leave the domain without reflection.
    #[default]
    Outflow,
    Periodic,
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outflow" => Ok(Self::Outflow),
            "periodic" => Ok(Self::Periodic),
            _ => Err(Error::param("bc", format!("expected outflow or periodic, got `{s}`"))),
        }
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Outflow => "outflow",
            Self::Periodic => "periodic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FvmGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_cells: usize,
    pub dx: f64,
    /// Exact cell averages of the area.
    pub a_cells: Vec<f64>,
    /// Interface values `ã`, `n_cells + 1` of them; entry `j` sits between
    /// cells `j - 1` and `j`.
    pub a_edges: Vec<f64>,
    pub bc: BoundaryCondition,
}

impl FvmGrid {
    pub fn new(
        profile: &CrossSectionProfile,
        x_lo: f64,
        x_hi: f64,
        n_cells: usize,
        bc: BoundaryCondition,
    ) -> Result<Self> {
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::DegenerateInterval { lo: x_lo, hi: x_hi });
        }
        if n_cells < 2 {
            return Err(Error::param("n_cells", "need at least 2 cells"));
        }
        let dx = (x_hi - x_lo) / n_cells as f64;
        let a_cells = (0..n_cells)
            .map(|i| {
                let lo = x_lo + i as f64 * dx;
                profile.cell_average(lo, lo + dx)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_capacities(x_lo, x_hi, a_cells, bc)
    }

    pub fn from_capacities(
        x_lo: f64,
        x_hi: f64,
        a_cells: Vec<f64>,
        bc: BoundaryCondition,
    ) -> Result<Self> {
        let n_cells = a_cells.len();
        if n_cells < 2 {
            return Err(Error::param("n_cells", "need at least 2 cells"));
        }
        let min = a_cells.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::NonPositiveProfile { min });
        }
        let mut a_edges = Vec::with_capacity(n_cells + 1);
        let wrap = 0.5 * (a_cells[n_cells - 1] + a_cells[0]);
        a_edges.push(match bc {
            BoundaryCondition::Outflow => a_cells[0],
            BoundaryCondition::Periodic => wrap,
        });
        for w in a_cells.windows(2) {
            a_edges.push(0.5 * (w[0] + w[1]));
        }
        a_edges.push(match bc {
            BoundaryCondition::Outflow => a_cells[n_cells - 1],
            BoundaryCondition::Periodic => wrap,
        });
        Ok(Self {
            x_lo,
            x_hi,
            n_cells,
            dx: (x_hi - x_lo) / n_cells as f64,
            a_cells,
            a_edges,
            bc,
        })
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells)
            .map(|i| self.x_lo + (i as f64 + 0.5) * self.dx)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellState {
    pub rho: f64,
    pub m: f64,
}

impl CellState {
    pub fn new(rho: f64, m: f64) -> Self {
        Self { rho, m }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FvmState {
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub t: f64,
}

impl FvmState {
    pub fn from_fn(grid: &FvmGrid, f: impl Fn(f64) -> CellState) -> Self {
        let (rho, m) = grid
            .centers()
            .into_iter()
            .map(|x| {
                let s = f(x);
                (s.rho, s.m)
            })
            .unzip();
        Self { rho, m, t: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn cell(&self, i: usize) -> CellState {
        CellState::new(self.rho[i], self.m[i])
    }

    /// `q = a m` per cell.
    pub fn q(&self, grid: &FvmGrid) -> Vec<f64> {
        self.m.iter().zip(&grid.a_cells).map(|(m, a)| a * m).collect()
    }

    /// `Σ a_i ρ_i Δx`.
    pub fn mass(&self, grid: &FvmGrid) -> f64 {
        self.rho.iter().zip(&grid.a_cells).map(|(r, a)| a * r).sum::<f64>() * grid.dx
    }

    /// `Σ a_i m_i Δx`.
    pub fn momentum(&self, grid: &FvmGrid) -> f64 {
        self.m.iter().zip(&grid.a_cells).map(|(m, a)| a * m).sum::<f64>() * grid.dx
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceAverages {
    pub a: f64,
    pub rho: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub waves: [[f64; 2]; 2],
    pub speeds: [f64; 2],
    pub source: [f64; 2],
}

impl RiemannSolution {
    /// `(A⁻ΔV, A⁺ΔV)`; a wave with zero speed is split evenly.
    pub fn fluctuations(&self) -> ([f64; 2], [f64; 2]) {
        let mut left = [0.0; 2];
        let mut right = [0.0; 2];
        for (z, &s) in self.waves.iter().zip(&self.speeds) {
            let w = if s < 0.0 {
                1.0
            } else if s > 0.0 {
                0.0
            } else {
                0.5
            };
            for c in 0..2 {
                left[c] += w * z[c];
                right[c] += (1.0 - w) * z[c];
            }
        }
        (left, right)
    }
}

/// Arithmetic means of area, density and momentum across an interface.
pub fn interface_averages(
    left: CellState,
    right: CellState,
    a_l: f64,
    a_r: f64,
) -> InterfaceAverages {
    InterfaceAverages {
        a: 0.5 * (a_l + a_r),
        rho: 0.5 * (left.rho + right.rho),
        m: 0.5 * (left.m + right.m),
    }
}

/// `Ψ = (0, ½(P_l + P_r)(a_r − a_l)/Δx)`.
pub fn interface_source(
    left: CellState,
    right: CellState,
    a_l: f64,
    a_r: f64,
    gas: &GasModel,
    dx: f64,
) -> Result<[f64; 2]> {
    let pl = gas.pressure(left.rho)?.p;
    let pr = gas.pressure(right.rho)?.p;
    Ok([0.0, 0.5 * (pl + pr) * (a_r - a_l) / dx])
}

/// `Δf − ΔxΨ` in the combined form `(Δ(am), Δ(am²/ρ) + ã ΔP)`.
fn balanced_jump(l: &Side, r: &Side) -> [f64; 2] {
    let a_avg = 0.5 * (l.a + r.a);
    [r.am - l.am, r.am * r.u - l.am * l.u + a_avg * (r.p - l.p)]
}

/// Per-cell quantities a Riemann solve needs.
#[derive(Debug, Clone, Copy)]
struct Side {
    rho: f64,
    m: f64,
    a: f64,
    p: f64,
    c: f64,
    u: f64,
    am: f64,
}

impl Side {
    fn new(s: CellState, a: f64, gas: &GasModel) -> Result<Self> {
        if !(s.rho > 0.0) {
            return Err(Error::Vacuum { rho: s.rho });
        }
        let (p, c) = gas.p_and_sound_speed(s.rho);
        Ok(Self {
            rho: s.rho,
            m: s.m,
            a,
            p,
            c,
            u: s.m / s.rho,
            am: a * s.m,
        })
    }
}

const SONIC_GUARD: f64 = 1e-12;

fn solve_sides(l: &Side, r: &Side, gas: &GasModel) -> ([[f64; 2]; 2], [f64; 2]) {
    let a_t = 0.5 * (l.a + r.a);
    let rho_t = 0.5 * (l.rho + r.rho);
    let m_t = 0.5 * (l.m + r.m);
    let (_, c_t) = gas.p_and_sound_speed(rho_t);
    let rc = rho_t * c_t;

    let column = |sign: f64| {
        let d = m_t + sign * rc;
        if d.abs() < SONIC_GUARD * rc {
            [a_t, a_t * (m_t / rho_t + sign * c_t)]
        } else {
            [rho_t / d, 1.0]
        }
    };
    let r1 = column(-1.0);
    let r2 = column(1.0);

    let delta = balanced_jump(l, r);
    let inv_det = 1.0 / (r1[0] * r2[1] - r2[0] * r1[1]);
    let b1 = (r2[1] * delta[0] - r2[0] * delta[1]) * inv_det;
    let b2 = (r1[0] * delta[1] - r1[1] * delta[0]) * inv_det;

    let s1 = (l.a * (l.u - l.c)).min(r.a * (r.u - r.c));
    let s2 = (l.a * (l.u + l.c)).max(r.a * (r.u + r.c));
    (
        [[b1 * r1[0], b1 * r1[1]], [b2 * r2[0], b2 * r2[1]]],
        [s1, s2],
    )
}

/// f-wave decomposition of `Δf − ΔxΨ` at one interface.
pub fn fwave_solve(
    left: CellState,
    right: CellState,
    a_l: f64,
    a_r: f64,
    gas: &GasModel,
    dx: f64,
) -> Result<RiemannSolution> {
    let l = Side::new(left, a_l, gas)?;
    let r = Side::new(right, a_r, gas)?;
    let (waves, speeds) = solve_sides(&l, &r, gas);
    Ok(RiemannSolution {
        waves,
        speeds,
        source: [0.0, 0.5 * (l.p + r.p) * (a_r - a_l) / dx],
    })
}

/// Slope limiter for the second-order correction waves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Limiter {
    /// No correction: the first-order Godunov-type update.
    #[default]
    None,
    Minmod,
    Superbee,
    VanLeer,
    /// Monotonized centered.
    Mc,
}

impl Limiter {
    /// `φ(θ)` for the ratio `θ` of the upwind wave to the local one.
    pub fn phi(self, theta: f64) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Minmod => theta.clamp(0.0, 1.0),
            Self::Superbee => (2.0 * theta).min(1.0).max(theta.min(2.0)).max(0.0),
            Self::VanLeer => (theta + theta.abs()) / (1.0 + theta.abs()),
            Self::Mc => (0.5 * (1.0 + theta)).min(2.0).min(2.0 * theta).max(0.0),
        }
    }
}

impl FromStr for Limiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "minmod" => Ok(Self::Minmod),
            "superbee" => Ok(Self::Superbee),
            "vanleer" => Ok(Self::VanLeer),
            "mc" => Ok(Self::Mc),
            _ => Err(Error::param(
                "limiter",
                format!("expected none, minmod, superbee, vanleer or mc, got `{s}`"),
            )),
        }
    }
}

impl std::fmt::Display for Limiter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Minmod => "minmod",
            Self::Superbee => "superbee",
            Self::VanLeer => "vanleer",
            Self::Mc => "mc",
        })
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Explicit f-wave stepper with reusable scratch storage.
#[derive(Debug, Clone)]
pub struct FvmSolver {
    pub grid: FvmGrid,
    pub gas: GasModel,
    pub cfl: f64,
    pub limiter: Limiter,
    inv_a: Vec<f64>,
    sides: Vec<Side>,
    /// Per interface, indexed like `grid.a_edges`.
    waves: Vec<[[f64; 2]; 2]>,
    speeds: Vec<[f64; 2]>,
    /// Per interface: mass, momentum, and area-scaled momentum corrections.
    correction: Vec<[f64; 3]>,
}

impl FvmSolver {
    pub fn new(grid: FvmGrid, gas: GasModel, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::param("cfl", format!("must lie in (0, 1), got {cfl}")));
        }
        let n = grid.n_cells;
        Ok(Self {
            inv_a: grid.a_cells.iter().map(|a| 1.0 / a).collect(),
            grid,
            gas,
            cfl,
            limiter: Limiter::None,
            sides: Vec::with_capacity(n),
            waves: vec![[[0.0; 2]; 2]; n + 1],
            speeds: vec![[0.0; 2]; n + 1],
            correction: vec![[0.0; 3]; n + 1],
        })
    }

    pub fn with_limiter(mut self, limiter: Limiter) -> Self {
        self.limiter = limiter;
        self
    }

    fn check_state(&self, state: &FvmState) -> Result<()> {
        if state.rho.len() != self.grid.n_cells || state.m.len() != self.grid.n_cells {
            return Err(Error::Mismatch(format!(
                "state has {} cells, grid has {}",
                state.rho.len(),
                self.grid.n_cells
            )));
        }
        Ok(())
    }

    /// Solves every interface and returns the stable time step.
    fn sweep(&mut self, state: &FvmState) -> Result<f64> {
        let n = self.grid.n_cells;
        self.sides.clear();
        for i in 0..n {
            let side = Side::new(state.cell(i), self.grid.a_cells[i], &self.gas).map_err(|_| {
                Error::Blowup {
                    t: state.t,
                    detail: format!("vacuum or NaN density {} in cell {i}", state.rho[i]),
                }
            })?;
            self.sides.push(side);
        }
        let mut max_rate = 0.0_f64;
        for j in 1..n {
            let (waves, speeds) = solve_sides(&self.sides[j - 1], &self.sides[j], &self.gas);
            let rate = (speeds[0].abs() * self.inv_a[j - 1]).max(speeds[1].abs() * self.inv_a[j]);
            max_rate = max_rate.max(rate);
            self.waves[j] = waves;
            self.speeds[j] = speeds;
        }
        let (waves, speeds) = match self.grid.bc {
            BoundaryCondition::Outflow => ([[0.0; 2]; 2], [0.0; 2]),
            BoundaryCondition::Periodic => {
                let (waves, speeds) = solve_sides(&self.sides[n - 1], &self.sides[0], &self.gas);
                let rate = (speeds[0].abs() * self.inv_a[n - 1]).max(speeds[1].abs() * self.inv_a[0]);
                max_rate = max_rate.max(rate);
                (waves, speeds)
            }
        };
        self.waves[0] = waves;
        self.speeds[0] = speeds;
        self.waves[n] = waves;
        self.speeds[n] = speeds;
        if !(max_rate.is_finite() && max_rate > 0.0) {
            return Ok(f64::INFINITY);
        }
        Ok(self.cfl * self.grid.dx / max_rate)
    }

    /// Limited correction fluxes `½ Σ sign(s)(1 − Δt|s|/(aΔx)) φ(θ) Z`.
    ///
    /// Entries 0 and 1 are differenced with the cell capacity. The
    /// Lax-Wendroff part of the momentum correction sits in entry 2, already
    /// divided by the interface area and differenced without capacity: the
    /// momentum equation is `m_t + (a m u)_x / a + P_x = 0`, and dividing by
    /// the cell area there produces energy growth where `a` varies.
    fn corrections(&mut self, ratio: f64) {
        let n = self.grid.n_cells;
        let periodic = self.grid.bc == BoundaryCondition::Periodic;
        for j in 1..=n {
            let mut f = [0.0; 3];
            let inv_a = 0.5 * (self.inv_a[j - 1] + self.inv_a[j % n]);
            for p in 0..2 {
                let z = self.waves[j][p];
                let norm = dot(z, z);
                if norm == 0.0 {
                    continue;
                }
                let s = self.speeds[j][p];
                let upwind = if s > 0.0 {
                    Some(j - 1)
                } else if j < n {
                    Some(j + 1)
                } else if periodic {
                    Some(1)
                } else {
                    None
                };
                let theta = upwind.map_or(0.0, |k| dot(self.waves[k][p], z) / norm);
                let phi = self.limiter.phi(theta);
                let sign = if s > 0.0 { 1.0 } else if s < 0.0 { -1.0 } else { 0.0 };
                let nu = ratio * s.abs() * inv_a;
                let w = 0.5 * sign * (1.0 - nu).max(0.0) * phi;
                f[0] += w * z[0];
                f[1] += (0.5 * sign * phi) * z[1];
                f[2] += (w - 0.5 * sign * phi) * z[1] * inv_a;
            }
            self.correction[j] = f;
        }
        self.correction[0] = if periodic { self.correction[n] } else { [0.0; 3] };
        if !periodic {
            self.correction[n] = [0.0; 3];
        }
    }

    /// Stable time step for the current state.
    pub fn stable_dt(&mut self, state: &FvmState) -> Result<f64> {
        self.check_state(state)?;
        self.sweep(state)
    }

    /// Advances by the CFL step, capped at `dt_max`; returns the step taken.
    pub fn step_capped(&mut self, state: &mut FvmState, dt_max: f64) -> Result<f64> {
        self.check_state(state)?;
        let dt = self.sweep(state)?.min(dt_max);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Blowup {
                t: state.t,
                detail: format!("non-positive or infinite time step {dt}"),
            });
        }
        let ratio = dt / self.grid.dx;
        let limited = self.limiter != Limiter::None;
        if limited {
            self.corrections(ratio);
        }
        for i in 0..self.grid.n_cells {
            // right-going waves from the left interface, left-going from the right
            let mut d = [0.0; 2];
            for (z, &s) in self.waves[i].iter().zip(&self.speeds[i]) {
                let w = if s > 0.0 { 1.0 } else if s < 0.0 { 0.0 } else { 0.5 };
                d[0] += w * z[0];
                d[1] += w * z[1];
            }
            for (z, &s) in self.waves[i + 1].iter().zip(&self.speeds[i + 1]) {
                let w = if s < 0.0 { 1.0 } else if s > 0.0 { 0.0 } else { 0.5 };
                d[0] += w * z[0];
                d[1] += w * z[1];
            }
            if limited {
                let (fl, fr) = (self.correction[i], self.correction[i + 1]);
                d[0] += fr[0] - fl[0];
                d[1] += fr[1] - fl[1];
                state.m[i] -= ratio * (fr[2] - fl[2]);
            }
            let k = ratio * self.inv_a[i];
            state.rho[i] -= k * d[0];
            state.m[i] -= k * d[1];
        }
        state.t += dt;
        for i in 0..self.grid.n_cells {
            if !(state.rho[i] > 0.0) || !state.m[i].is_finite() {
                return Err(Error::Blowup {
                    t: state.t,
                    detail: format!(
                        "cell {i} at x = {:.6}: rho = {}, m = {}",
                        self.grid.x_lo + (i as f64 + 0.5) * self.grid.dx,
                        state.rho[i],
                        state.m[i]
                    ),
                });
            }
        }
        Ok(dt)
    }

    pub fn step(&mut self, state: &mut FvmState) -> Result<f64> {
        self.step_capped(state, f64::INFINITY)
    }

    /// Advances until `t_target`, landing on it exactly. Returns the number
    /// of steps taken.
    pub fn advance_to(&mut self, state: &mut FvmState, t_target: f64) -> Result<usize> {
        let mut steps = 0;
        while state.t < t_target {
            let remaining = t_target - state.t;
            self.step_capped(state, remaining)?;
            steps += 1;
            if t_target - state.t <= 1e-12 * t_target.abs().max(1.0) {
                state.t = t_target;
            }
        }
        Ok(steps)
    }

    /// Snapshots at each of `times`, which must be nondecreasing and not
    /// before the initial time.
    pub fn run(&mut self, mut state: FvmState, times: &[f64]) -> Result<Vec<FvmState>> {
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if t < state.t {
                return Err(Error::param(
                    "snapshot_times",
                    format!("time {t} precedes current time {}", state.t),
                ));
            }
            self.advance_to(&mut state, t)?;
            out.push(state.clone());
        }
        Ok(out)
    }
}
