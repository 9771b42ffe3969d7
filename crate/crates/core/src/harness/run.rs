use std::thread;

use super::scenario::{Numerics, Scenario};
use crate::error::{Error, Result};
use crate::fvm::{CellState, FvmGrid, FvmSolver, FvmState};
use crate::homogenize::{homogenize, BracketCoefficients, HomogCoefficients};
use crate::snapshot::{Series, Snapshot, SolverKind};
use crate::spectral::{RhsMode, SpectralGrid, SpectralSolver, SpectralState};

pub fn fvm_grid(s: &Scenario, n: &Numerics) -> Result<FvmGrid> {
    let periods = (s.x_hi - s.x_lo) / s.period();
    let cells = periods * n.cells_per_period as f64;
    let rounded = cells.round();
    if (cells - rounded).abs() > 1e-9 * cells {
        return Err(Error::param(
            "x_lo/x_hi",
            format!("domain must span a whole number of cells ({cells} at this resolution)"),
        ));
    }
    FvmGrid::new(&s.profile, s.x_lo, s.x_hi, rounded as usize, n.bc)
}

pub fn fvm_initial(s: &Scenario, grid: &FvmGrid) -> FvmState {
    FvmState::from_fn(grid, |x| CellState::new(s.initial_density(x), 0.0))
}

fn fvm_snapshot(grid: &FvmGrid, state: &FvmState) -> Snapshot {
    Snapshot {
        t: state.t,
        x: grid.centers(),
        rho: state.rho.clone(),
        m: Some(state.m.clone()),
        q: state.q(grid),
    }
}

pub fn run_fvm(s: &Scenario, n: &Numerics) -> Result<Series> {
    s.validate()?;
    n.validate()?;
    let grid = fvm_grid(s, n)?;
    let init = fvm_initial(s, &grid);
    let mut solver = FvmSolver::new(grid, s.gas, n.cfl)?.with_limiter(n.limiter);
    let states = solver.run(init, &s.snapshot_times)?;
    Ok(Series {
        scenario: s.name.clone(),
        solver: SolverKind::Fvm,
        meta: vec![
            ("n_cells".into(), solver.grid.n_cells.to_string()),
            ("cfl".into(), n.cfl.to_string()),
            ("bc".into(), solver.grid.bc.to_string()),
            ("limiter".into(), n.limiter.to_string()),
        ],
        snapshots: states.iter().map(|st| fvm_snapshot(&solver.grid, st)).collect(),
    })
}

/// Solver, initial perturbation and time step of the homogenized run.
pub struct HomogSetup {
    pub brackets: BracketCoefficients,
    pub coeffs: HomogCoefficients,
    pub solver: SpectralSolver,
    pub initial: SpectralState,
    pub dt: f64,
}

pub fn homog_setup(s: &Scenario, n: &Numerics) -> Result<HomogSetup> {
    s.validate()?;
    n.validate()?;
    let (brackets, coeffs) = homogenize(&s.profile, &s.gas, s.rho_background)?;
    let grid = SpectralGrid::new(s.x_lo, s.x_hi, n.n_modes)?;
    let delta = coeffs.delta;
    let initial = SpectralState::from_fn(&grid, |x| (s.pulse.eval(x) / delta, 0.0));
    let solver = SpectralSolver::new(grid, coeffs.clone(), RhsMode::Full, n.dealias)?;
    let dt = solver.default_dt(n.spectral_cfl);
    Ok(HomogSetup {
        brackets,
        coeffs,
        solver,
        initial,
        dt,
    })
}

pub struct HomogRun {
    pub series: Series,
    pub warnings: Vec<String>,
    pub coeffs: HomogCoefficients,
}

pub fn run_homog(s: &Scenario, n: &Numerics) -> Result<HomogRun> {
    let setup = homog_setup(s, n)?;
    let run = setup
        .solver
        .run(setup.initial, &s.snapshot_times, setup.dt)?;
    let rho0 = s.rho_background;
    let delta = setup.coeffs.delta;
    let x = setup.solver.grid.points();
    let snapshots = run
        .snapshots
        .iter()
        .map(|st| Snapshot {
            t: st.t,
            x: x.clone(),
            rho: st.physical_rho(rho0, delta),
            m: None,
            q: st.physical_q(delta),
        })
        .collect();
    Ok(HomogRun {
        series: Series {
            scenario: s.name.clone(),
            solver: SolverKind::Homog,
            meta: vec![
                ("n_modes".into(), n.n_modes.to_string()),
                ("dt".into(), setup.dt.to_string()),
                ("dealias".into(), n.dealias.to_string()),
            ],
            snapshots,
        },
        warnings: run.warnings,
        coeffs: setup.coeffs,
    })
}

/// Both runs of one comparison, executed concurrently.
pub fn run_both(s: &Scenario, n: &Numerics) -> Result<(Series, HomogRun)> {
    thread::scope(|scope| {
        let fine = scope.spawn(|| run_fvm(s, n));
        let homog = run_homog(s, n)?;
        let fine = fine.join().expect("fvm thread panicked")?;
        Ok((fine, homog))
    })
}

