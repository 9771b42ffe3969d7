use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pipewave::averaging::PeriodicFunction;
use pipewave::dispersion::{omega_xxt, stability_scan};
use pipewave::fvm::{BoundaryCondition, CellState, FvmGrid, FvmSolver, FvmState};
use pipewave::harness::compare::{left_going_peak, right_going_peak};
use pipewave::harness::{
    compare, period_average, run_both, scenario_a, scenario_b, ComparisonReport, Numerics, Scenario,
};
use pipewave::homogenize::{bracket_coefficients, coefficient_forms, homogenize};
use pipewave::snapshot::Series;
use pipewave::spectral::{
    helmholtz_invert, ssprk3_step, RhsMode, SpectralGrid, SpectralSolver, SpectralState,
};
use pipewave::HomogCoefficients;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const RHO0: f64 = 0.3;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn coeffs(s: &Scenario) -> Result<HomogCoefficients, String> {
    homogenize(&s.profile, &s.gas, RHO0).map(|(_, h)| h).map_err(err)
}

fn operator_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_240_517);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let modes = |rng: &mut StdRng| -> Vec<(f64, f64)> {
            let n = rng.gen_range(1..=8);
            (0..n).map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect()
        };
        let (fm, gm) = (modes(&mut rng), modes(&mut rng));
        let (fo, go): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let build = |m: &[(f64, f64)], off: f64| {
            PeriodicFunction::from_fn(256, 1.0, |y| {
                off + m
                    .iter()
                    .enumerate()
                    .map(|(j, (c, s))| {
                        let w = TAU * (j + 1) as f64 * y;
                        c * w.cos() + s * w.sin()
                    })
                    .sum::<f64>()
            })
        };
        let f = build(&fm, fo).map_err(err)?;
        let g = build(&gm, go).map_err(err)?;
        let lhs = f.mean_product(&g.bracket()).map_err(err)?;
        let rhs = -f.bracket().mean_product(&g).map_err(err)?;
        for v in [f.fluctuation().mean(), f.bracket().mean(), lhs - rhs] {
            worst = worst.max(v.abs());
        }
    }
    ensure(worst < 1e-10, || format!("largest identity residual {worst:.3e}"))?;
    Ok(format!("50 functions, largest residual {worst:.1e}"))
}

fn equality_chains() -> Outcome {
    let mut worst_b = 0.0_f64;
    let forms = coefficient_forms(&scenario_b().profile, RHO0, 4096).map_err(err)?;
    for f in &forms {
        let first = forms.iter().find(|g| g.coefficient == f.coefficient).unwrap();
        worst_b = worst_b.max((f.value - first.value).abs() / first.value.abs().max(1.0));
    }
    ensure(worst_b < 1e-8, || format!("scenario_b forms disagree by {worst_b:.3e}"))?;

    let exact = [
        ("C1", 0.0),
        ("C2", 1.0 / 144.0),
        ("C3", 800.0 / 81.0),
        ("C4", 0.0),
        ("C5", -12800.0 / 243.0),
        ("C6", -51200.0 / 729.0),
        ("C7", 0.0),
        ("C8", 0.0),
        ("C9", -1.0 / 288.0),
        ("C11", -1.0 / 54.0),
        ("C13", 80.0 / 27.0),
        ("C15", 0.0),
    ];
    let mut worst_a = 0.0_f64;
    for f in coefficient_forms(&scenario_a().profile, RHO0, 4096).map_err(err)? {
        let (_, want) = exact
            .iter()
            .find(|(n, _)| *n == f.coefficient)
            .ok_or_else(|| format!("no exact value for {}", f.coefficient))?;
        worst_a = worst_a.max((f.value - want).abs() / want.abs().max(1.0));
    }
    ensure(worst_a < 1e-12, || format!("scenario_a forms off the exact values by {worst_a:.3e}"))?;

    for s in [scenario_a(), scenario_b()] {
        let c = bracket_coefficients(&s.profile, RHO0).map_err(err)?;
        ensure(c.c1.abs() < 1e-12, || format!("{}: C1 = {}", s.name, c.c1))?;
    }
    let c9 = bracket_coefficients(&scenario_a().profile, RHO0).map_err(err)?.c9;
    ensure((c9 + 1.0 / 288.0).abs() < 1e-12, || format!("scenario_a C9 = {c9}"))?;
    Ok(format!("scenario_b spread {worst_b:.1e}, scenario_a vs exact {worst_a:.1e}"))
}

fn sign_conditions() -> Outcome {
    let mut detail = Vec::new();
    for s in [scenario_a(), scenario_b()] {
        let (c, h) = homogenize(&s.profile, &s.gas, RHO0).map_err(err)?;
        ensure(c.c2 > 0.0 && c.c9 < 0.0 && c.c11 < 0.0, || {
            format!("{}: C2 = {}, C9 = {}, C11 = {}", s.name, c.c2, c.c9, c.c11)
        })?;
        ensure(h.alpha5b > 0.0 && h.beta11b > 0.0, || {
            format!("{}: alpha5b = {}, beta11b = {}", s.name, h.alpha5b, h.beta11b)
        })?;
        let scan = stability_scan(&h, RHO0, 100.0, 4001).map_err(err)?;
        ensure(scan.max_imag_xxt < 1e-12, || {
            format!("{}: xxt max |Im| = {:.3e}", s.name, scan.max_imag_xxt)
        })?;
        ensure(scan.max_imag_xxx > 1e-6, || {
            format!("{}: xxx max |Im| = {:.3e}", s.name, scan.max_imag_xxx)
        })?;
        detail.push(format!(
            "{}: xxt |Im| {:.1e}, xxx |Im| {:.1e}",
            s.name, scan.max_imag_xxt, scan.max_imag_xxx
        ));
    }
    Ok(detail.join("; "))
}

fn effective_speed() -> Outcome {
    let mut detail = Vec::new();
    for s in [scenario_a(), scenario_b()] {
        let h = coeffs(&s)?;
        let expected = (h.alpha1 * (h.beta1 + h.beta3 * RHO0)).sqrt();
        let dk = 1e-5;
        let w = |k: f64| omega_xxt(k, &h, RHO0).map(|d| d.omega_plus.re).map_err(err);
        let slope = (w(2.0 * dk)? - w(dk)?) / dk;
        ensure((slope - expected).abs() < 1e-8, || {
            format!("{}: finite-difference speed {slope} vs {expected}", s.name)
        })?;
        detail.push(format!("{} {slope:.8}", s.name));
    }
    let m = bracket_coefficients(&scenario_a().profile, RHO0).map_err(err)?.moments;
    let factor = 1.0 / (m.mean * m.inv).sqrt();
    ensure((factor - 3.0_f64.sqrt() / 2.0).abs() < 1e-10, || format!("reduction factor {factor}"))?;
    detail.push(format!("reduction factor {factor:.12}"));
    Ok(detail.join(", "))
}

fn well_balancing() -> Outcome {
    let s = scenario_a();
    let n = Numerics::default();
    let grid = FvmGrid::new(&s.profile, -10.0, 10.0, 640, BoundaryCondition::Outflow).map_err(err)?;
    let mut state = FvmState::from_fn(&grid, |_| CellState::new(RHO0, 0.0));
    let mut solver = FvmSolver::new(grid, s.gas, n.cfl).map_err(err)?.with_limiter(n.limiter);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let before = state.clone();
        solver.step(&mut state).map_err(err)?;
        for i in 0..state.rho.len() {
            worst = worst.max((state.rho[i] - before.rho[i]).abs()).max((state.m[i] - before.m[i]).abs());
        }
    }
    ensure(worst <= 1e-13, || format!("steady state drifted by {worst:.3e} in one step"))?;

    let grid = FvmGrid::new(&s.profile, -10.0, 10.0, 640, BoundaryCondition::Periodic).map_err(err)?;
    let mut state = FvmState::from_fn(&grid, |x| {
        CellState::new(RHO0 + 0.05 * (-x * x / 4.0).exp(), 0.01 * (TAU * x / 20.0).sin())
    });
    let mass0 = state.mass(&grid);
    let mut solver = FvmSolver::new(grid.clone(), s.gas, n.cfl).map_err(err)?.with_limiter(n.limiter);
    for _ in 0..10_000 {
        solver.step(&mut state).map_err(err)?;
    }
    let drift = ((state.mass(&grid) - mass0) / mass0).abs();
    ensure(drift < 1e-12, || format!("relative mass drift {drift:.3e}"))?;
    Ok(format!("max per-step change {worst:.1e}, mass drift {drift:.1e}"))
}

/// Coarsens by pairs of cells, weighting by the cell areas.
fn restrict(grid: &FvmGrid, rho: &[f64]) -> Vec<f64> {
    rho.chunks(2)
        .zip(grid.a_cells.chunks(2))
        .map(|(r, a)| (r[0] * a[0] + r[1] * a[1]) / (a[0] + a[1]))
        .collect()
}

fn fvm_convergence() -> Outcome {
    let s = scenario_b();
    let n = Numerics::default();
    let t_end = 5.0;
    let (lo, hi) = (-20.0, 20.0);
    let run = |cells_per_period: usize| -> Result<(FvmGrid, Vec<f64>), String> {
        let cells = ((hi - lo) / s.period()) as usize * cells_per_period;
        let grid = FvmGrid::new(&s.profile, lo, hi, cells, BoundaryCondition::Periodic).map_err(err)?;
        let init = FvmState::from_fn(&grid, |x| CellState::new(s.initial_density(x), 0.0));
        let mut solver = FvmSolver::new(grid.clone(), s.gas, n.cfl).map_err(err)?.with_limiter(n.limiter);
        let end = solver.run(init, &[t_end]).map_err(err)?.pop().unwrap();
        Ok((grid, end.rho))
    };
    let levels = [16, 32, 64];
    let sols = levels.iter().map(|&c| run(c)).collect::<Result<Vec<_>, _>>()?;
    let l1 = |coarse: &(FvmGrid, Vec<f64>), fine: &(FvmGrid, Vec<f64>)| {
        let r = restrict(&fine.0, &fine.1);
        coarse.1.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum::<f64>() * coarse.0.dx
    };
    let (e1, e2) = (l1(&sols[0], &sols[1]), l1(&sols[1], &sols[2]));
    let order = (e1 / e2).log2();
    ensure(order >= 0.8, || format!("L1 order {order:.3} (differences {e1:.3e}, {e2:.3e})"))?;
    Ok(format!("L1 order {order:.2} over {levels:?} cells per period"))
}

fn standing_wave_frequency(h: &HomogCoefficients, mode: usize) -> Result<(f64, f64), String> {
    let length = 40.0;
    let grid = SpectralGrid::new(0.0, length, 128).map_err(err)?;
    let k = TAU * mode as f64 / length;
    let solver = SpectralSolver::new(grid.clone(), h.clone(), RhsMode::Linear { background: RHO0 }, true)
        .map_err(err)?;
    let omega = omega_xxt(k, h, RHO0).map_err(err)?.omega_plus.re;
    let t_end = 0.45 * PI / omega;
    let mut state = SpectralState::from_fn(&grid, |x| ((k * x).cos(), 0.0));
    solver.advance_to(&mut state, t_end, 1e-3).map_err(err)?;
    let x = grid.points();
    let proj = state.rho.iter().zip(&x).map(|(r, x)| r * (k * x).cos()).sum::<f64>() * 2.0 / x.len() as f64;
    Ok((proj.acos() / t_end / k, omega / k))
}

fn spectral_verification() -> Outcome {
    let mut worst_poly = 0.0_f64;
    for i in 0..=30 {
        for j in 0..=30 {
            let (re, im) = (-2.5 + 3.0 * i as f64 / 30.0, -1.7 + 3.4 * j as f64 / 30.0);
            let mut st = SpectralState { rho: vec![1.0], q: vec![0.0], t: 0.0 };
            ssprk3_step(&mut st, 1.0, |r, q| {
                Ok((vec![re * r[0] - im * q[0]], vec![im * r[0] + re * q[0]]))
            })
            .map_err(err)?;
            let (z2r, z2i) = (re * re - im * im, 2.0 * re * im);
            let (z3r, z3i) = (z2r * re - z2i * im, z2r * im + z2i * re);
            let pr = 1.0 + re + z2r / 2.0 + z3r / 6.0;
            let pi = im + z2i / 2.0 + z3i / 6.0;
            worst_poly = worst_poly.max((st.rho[0] - pr).abs()).max((st.q[0] - pi).abs());
        }
    }
    ensure(worst_poly < 1e-14, || format!("stability polynomial residual {worst_poly:.3e}"))?;

    let grid = SpectralGrid::new(-20.0, 20.0, 256).map_err(err)?;
    let x = grid.points();
    let mut worst_helm = 0.0_f64;
    for c in [0.0, 0.01, 0.1, 0.4] {
        let f: Vec<f64> = x.iter().map(|&x| (-x * x / 4.0).exp() + 0.1 * (TAU * x / 40.0).sin()).collect();
        let fxx = grid.derivative(&f, 2);
        let g: Vec<f64> = f.iter().zip(&fxx).map(|(f, d)| f - c * d).collect();
        let back = helmholtz_invert(&grid, &g, c).map_err(err)?;
        for (a, b) in back.iter().zip(&f) {
            worst_helm = worst_helm.max((a - b).abs());
        }
    }
    ensure(worst_helm < 1e-12, || format!("Helmholtz round-trip error {worst_helm:.3e}"))?;

    let mut worst_speed = 0.0_f64;
    for s in [scenario_a(), scenario_b()] {
        let h = coeffs(&s)?;
        for mode in [1, 4, 10] {
            let (measured, expected) = standing_wave_frequency(&h, mode)?;
            worst_speed = worst_speed.max(((measured - expected) / expected).abs());
        }
    }
    ensure(worst_speed < 1e-6, || format!("phase speed relative error {worst_speed:.3e}"))?;

    let s = scenario_b();
    let h = coeffs(&s)?;
    let grid = SpectralGrid::new(-40.0, 40.0, 512).map_err(err)?;
    let solver = SpectralSolver::new(grid.clone(), h.clone(), RhsMode::Full, true).map_err(err)?;
    let run = |dt: f64| -> Result<SpectralState, String> {
        let mut st = SpectralState::from_fn(&grid, |x| (s.pulse.eval(x) / h.delta, 0.0));
        solver.advance_to(&mut st, 4.0, dt).map_err(err)?;
        Ok(st)
    };
    let diff = |a: &SpectralState, b: &SpectralState| {
        a.rho.iter().zip(&b.rho).chain(a.q.iter().zip(&b.q)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let (a, b, c) = (run(0.1)?, run(0.05)?, run(0.025)?);
    let order = (diff(&a, &b) / diff(&b, &c)).log2();
    ensure((2.5..=3.5).contains(&order), || format!("temporal order {order:.3}"))?;
    Ok(format!(
        "polynomial {worst_poly:.1e}, Helmholtz {worst_helm:.1e}, phase speed {worst_speed:.1e}, order {order:.2}"
    ))
}

/// Both halves of the pulse are visible and apart at the first nonzero
/// snapshot.
fn pulse_split(fvm: &Series, s: &Scenario, n: &Numerics) -> Result<(), String> {
    let snap = fvm.snapshots.iter().find(|sn| sn.t > 0.0).ok_or("no nonzero snapshot")?;
    let avg = period_average(&snap.x, &snap.rho, s.period(), n.bc).map_err(err)?;
    let c = s.pulse.center;
    let xr = right_going_peak(&snap.x, &avg, c + s.pulse.width).ok_or("no right-going peak")?;
    let xl = left_going_peak(&snap.x, &avg, c - s.pulse.width).ok_or("no left-going peak")?;
    let at = |x0: f64| {
        let i = snap.x.iter().position(|&x| x >= x0).unwrap_or(snap.x.len() - 1);
        avg[i] - s.rho_background
    };
    let amp = s.pulse.amplitude;
    ensure(at(xr) > 0.25 * amp && at(xl) > 0.25 * amp && at(c) < 0.25 * amp, || {
        format!(
            "t = {}: right {:.4} at {xr:.1}, left {:.4} at {xl:.1}, centre {:.4}",
            snap.t,
            at(xr),
            at(xl),
            at(c)
        )
    })
}

fn nondecreasing<T: PartialOrd + Copy>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

struct ScenarioRun {
    report: ComparisonReport,
    elapsed: Duration,
}

fn run_scenario(s: &Scenario, n: &Numerics) -> Result<ScenarioRun, String> {
    let start = Instant::now();
    let (fvm, homog) = run_both(s, n).map_err(err)?;
    let report = compare(&fvm, &homog.series, s, n).map_err(err)?;
    let elapsed = start.elapsed();
    pulse_split(&fvm, s, n).map_err(|e| format!("{}: pulse did not split: {e}", s.name))?;
    Ok(ScenarioRun { report, elapsed })
}

fn check_errors(name: &str, r: &ComparisonReport) -> Result<(), String> {
    let early = r.rel_l2_rho[1];
    ensure(early < 0.05, || format!("{name}: rel_L2_rho = {early:.4} at t = {}", r.times[1]))?;
    ensure(nondecreasing(&r.rel_l2_rho), || format!("{name}: rel_L2_rho not nondecreasing {:?}", r.rel_l2_rho))
}

fn summary(name: &str, run: &ScenarioRun) -> String {
    let r = &run.report;
    let errs: Vec<String> = r.rel_l2_rho.iter().map(|e| format!("{e:.3}")).collect();
    format!(
        "{name}: peaks {:?}, rel_L2_rho [{}], {:.0} s",
        r.peaks_fvm,
        errs.join(", "),
        run.elapsed.as_secs_f64()
    )
}

fn scenario_reproduction() -> Outcome {
    let mut detail = Vec::new();
    let mut failures = Vec::new();
    for s in [scenario_a(), scenario_b()] {
        let n = Numerics::default().ci_scale();
        let run = run_scenario(&s.clone().ci_scale(), &n)?;
        println!("    ci-scale {}", summary(&s.name, &run));
        if let Err(e) = check_errors(&s.name, &run.report) {
            failures.push(format!("ci-scale {e}"));
        }
        if run.elapsed > Duration::from_secs(60) {
            failures.push(format!("ci-scale {} took {:.0} s", s.name, run.elapsed.as_secs_f64()));
        }
    }
    for s in [scenario_a(), scenario_b()] {
        let n = Numerics::default();
        let run = run_scenario(&s, &n)?;
        println!("    full {}", summary(&s.name, &run));
        let r = &run.report;
        if let Err(e) = check_errors(&s.name, r) {
            failures.push(e);
        }
        let last = *r.peaks_fvm.last().unwrap();
        if !nondecreasing(&r.peaks_fvm) || last < 3 {
            failures.push(format!("{}: FVM peak counts {:?}", s.name, r.peaks_fvm));
        }
        if run.elapsed > Duration::from_secs(600) {
            failures.push(format!("{} took {:.0} s", s.name, run.elapsed.as_secs_f64()));
        }
        detail.push(format!("{} {} peaks", s.name, last));
    }
    if failures.is_empty() {
        Ok(detail.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("operator identities", 5, operator_identities),
        ("coefficient equality chains", 5, equality_chains),
        ("sign conditions and dispersion", 5, sign_conditions),
        ("effective sound speed", 1, effective_speed),
        ("fvm well-balancing and mass", 30, well_balancing),
        ("fvm self-convergence", 120, fvm_convergence),
        ("spectral solver verification", 60, spectral_verification),
        ("scenario reproduction", 1260, scenario_reproduction),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(d) if secs > budget as f64 => Err(format!("{d}; took {secs:.1} s, budget {budget} s")),
            other => other,
        };
        match outcome {
            Ok(d) => println!("PASS {name}: {d} ({secs:.2} s)"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name}: {d} ({secs:.2} s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
