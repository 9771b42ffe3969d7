use pipewave::fvm::{
    fwave_solve, interface_source, BoundaryCondition, CellState, FvmGrid, FvmSolver, FvmState,
    Limiter,
};
use pipewave::harness::{scenario_a, scenario_b};
use pipewave::{CrossSectionProfile, GasModel};
use proptest::prelude::*;

const LIMITERS: [Limiter; 5] =
    [Limiter::None, Limiter::Minmod, Limiter::Superbee, Limiter::VanLeer, Limiter::Mc];

fn flux(s: CellState, a: f64, gas: &GasModel) -> [f64; 2] {
    let p = gas.pressure(s.rho).unwrap().p;
    [a * s.m, a * s.m * s.m / s.rho + a * p]
}

fn state() -> impl Strategy<Value = CellState> {
    (0.05..3.0f64, -1.0..1.0f64).prop_map(|(rho, u)| CellState::new(rho, rho * u))
}

proptest! {
    #[test]
    fn waves_sum_to_the_balanced_flux_jump(
        l in state(), r in state(), a_l in 0.1..2.0f64, a_r in 0.1..2.0f64, dx in 0.01..1.0f64
    ) {
        let gas = GasModel::default();
        let sol = fwave_solve(l, r, a_l, a_r, &gas, dx).unwrap();
        let psi = interface_source(l, r, a_l, a_r, &gas, dx).unwrap();
        let (fl, fr) = (flux(l, a_l, &gas), flux(r, a_r, &gas));
        for c in 0..2 {
            let jump = fr[c] - fl[c] - dx * psi[c];
            let sum = sol.waves[0][c] + sol.waves[1][c];
            prop_assert!((sum - jump).abs() <= 1e-12 * (1.0 + fr[c].abs() + fl[c].abs()));
        }
        let (left, right) = sol.fluctuations();
        for c in 0..2 {
            prop_assert!((left[c] + right[c] - sol.waves[0][c] - sol.waves[1][c]).abs() < 1e-14);
        }
    }

    #[test]
    fn speeds_are_ordered(l in state(), r in state(), a_l in 0.1..2.0f64, a_r in 0.1..2.0f64) {
        let sol = fwave_solve(l, r, a_l, a_r, &GasModel::default(), 0.1).unwrap();
        prop_assert!(sol.speeds[0] <= sol.speeds[1]);
    }

    #[test]
    fn limiters_are_symmetric_and_bounded(theta in 0.01..10.0f64) {
        for lim in LIMITERS {
            let phi = lim.phi(theta);
            prop_assert!((0.0..=2.0).contains(&phi));
            prop_assert_eq!(lim.phi(-theta), 0.0);
            if lim != Limiter::None {
                prop_assert!((phi / theta - lim.phi(1.0 / theta)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn any_cfl_keeps_a_smooth_pulse_bounded_and_conservative(
        cfl in 0.05..0.95f64, amp in 0.001..0.1f64, lim_ix in 0usize..5
    ) {
        let s = scenario_b();
        let grid = FvmGrid::new(&s.profile, -10.0, 10.0, 320, BoundaryCondition::Periodic).unwrap();
        let mut state = FvmState::from_fn(&grid, |x| CellState::new(0.3 + amp * (-x * x / 4.0).exp(), 0.0));
        let mass0 = state.mass(&grid);
        let mut solver = FvmSolver::new(grid, s.gas, cfl).unwrap().with_limiter(LIMITERS[lim_ix]);
        for _ in 0..100 {
            solver.step(&mut state).unwrap();
        }
        let max = state.rho.iter().copied().fold(0.0, f64::max);
        prop_assert!(max < 0.3 + 2.0 * amp);
        prop_assert!(((state.mass(&solver.grid) - mass0) / mass0).abs() < 1e-13);
    }
}

#[test]
fn limiter_reference_values() {
    assert_eq!(Limiter::Mc.phi(0.5), 0.75);
    assert_eq!(Limiter::Mc.phi(3.0), 2.0);
    assert_eq!(Limiter::Minmod.phi(0.5), 0.5);
    assert_eq!(Limiter::Superbee.phi(0.75), 1.0);
    assert_eq!(Limiter::Superbee.phi(1.5), 1.5);
    assert_eq!(Limiter::VanLeer.phi(1.0), 1.0);
    assert_eq!(Limiter::None.phi(1.0), 0.0);
    for lim in LIMITERS {
        assert_eq!(lim.to_string().parse::<Limiter>().unwrap(), lim);
    }
}

#[test]
fn single_step_matches_hand_computation() {
    let gas = GasModel::default();
    let profile = CrossSectionProfile::constant(1.0, 1.0).unwrap();
    let grid = FvmGrid::new(&profile, 0.0, 4.0, 4, BoundaryCondition::Outflow).unwrap();
    let init = [1.1, 1.1, 1.0, 1.0];
    let mut state = FvmState::from_fn(&grid, |x| CellState::new(init[x as usize], 0.0));
    let mut solver = FvmSolver::new(grid, gas, 0.45).unwrap();
    let dt = solver.step(&mut state).unwrap();

    // still gas: Δ = (0, ΔP), eigenvectors (∓1/c̃, 1), both strengths ΔP/2
    let (pl, pr) = (1.1_f64.powf(1.4), 1.0);
    let c_left = (1.4 * 1.1_f64.powf(0.4)).sqrt();
    let c_t = (1.4 * 1.05_f64.powf(0.4)).sqrt();
    assert!((dt - 0.45 / c_left).abs() < 1e-15);
    let half = 0.5 * (pr - pl);
    let ratio = dt;
    let expected_rho = [1.1, 1.1 - ratio * (-half / c_t), 1.0 - ratio * (half / c_t), 1.0];
    let expected_m = [0.0, -ratio * half, -ratio * half, 0.0];
    for i in 0..4 {
        assert!((state.rho[i] - expected_rho[i]).abs() < 1e-15, "rho[{i}]");
        assert!((state.m[i] - expected_m[i]).abs() < 1e-15, "m[{i}]");
    }
}

#[test]
fn steady_state_is_preserved_by_every_limiter() {
    let s = scenario_a();
    for lim in LIMITERS {
        for bc in [BoundaryCondition::Outflow, BoundaryCondition::Periodic] {
            let grid = FvmGrid::new(&s.profile, -5.0, 5.0, 320, bc).unwrap();
            let init = FvmState::from_fn(&grid, |_| CellState::new(0.3, 0.0));
            let mut solver = FvmSolver::new(grid, s.gas, 0.45).unwrap().with_limiter(lim);
            let mut state = init.clone();
            for _ in 0..200 {
                solver.step(&mut state).unwrap();
            }
            assert_eq!(state.rho, init.rho, "{lim} {bc}");
            assert_eq!(state.m, init.m, "{lim} {bc}");
        }
    }
}

#[test]
fn vacuum_or_nan_aborts_with_blowup() {
    let s = scenario_a();
    let grid = FvmGrid::new(&s.profile, 0.0, 2.0, 64, BoundaryCondition::Outflow).unwrap();
    let mut solver = FvmSolver::new(grid.clone(), s.gas, 0.45).unwrap();
    for bad in [0.0, -0.1, f64::NAN] {
        let mut state = FvmState::from_fn(&grid, |x| CellState::new(if x < 1.0 { 0.3 } else { bad }, 0.0));
        let err = solver.step(&mut state).unwrap_err();
        assert!(matches!(err, pipewave::Error::Blowup { .. }), "{err}");
    }
}

#[test]
fn outflow_lets_a_pulse_leave() {
    let s = scenario_b();
    let grid = FvmGrid::new(&s.profile, -20.0, 20.0, 1280, BoundaryCondition::Outflow).unwrap();
    let state = FvmState::from_fn(&grid, |x| CellState::new(0.3 + 0.01 * (-x * x / 4.0).exp(), 0.0));
    let mut solver = FvmSolver::new(grid, s.gas, 0.45).unwrap().with_limiter(Limiter::Mc);
    let end = solver.run(state, &[60.0]).unwrap().pop().unwrap();
    let residual = end.rho.iter().map(|r| (r - 0.3).abs()).fold(0.0, f64::max);
    assert!(residual < 1e-3, "residual {residual}");
}

fn energy(grid: &FvmGrid, state: &FvmState, rho0: f64) -> f64 {
    let e = |r: f64| r.powf(1.4) / 0.4;
    let de = 1.4 * rho0.powf(0.4) / 0.4;
    (0..grid.n_cells)
        .map(|i| {
            let (r, m) = (state.rho[i], state.m[i]);
            grid.a_cells[i] * grid.dx * (0.5 * m * m / r + e(r) - e(rho0) - de * (r - rho0))
        })
        .sum()
}

#[test]
fn limited_scheme_does_not_create_energy_where_the_area_varies() {
    let s = scenario_b();
    let grid = FvmGrid::new(&s.profile, -20.0, 20.0, 1280, BoundaryCondition::Periodic).unwrap();
    let init = FvmState::from_fn(&grid, |x| {
        CellState::new(0.3 + 0.003 * (0.3 * x).sin() + 0.002 * (1.7 * x).cos(), 0.0)
    });
    let e0 = energy(&grid, &init, 0.3);
    let mut solver = FvmSolver::new(grid.clone(), s.gas, 0.45).unwrap().with_limiter(Limiter::Mc);
    for state in solver.run(init, &[100.0, 200.0, 300.0]).unwrap() {
        let e = energy(&grid, &state, 0.3);
        assert!(e <= e0, "t = {}: energy {e} above initial {e0}", state.t);
    }
}
