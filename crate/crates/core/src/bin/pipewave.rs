use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pipewave::dispersion::{leading_order_speed, long_wave_speed, sample_both, stability_scan};
use pipewave::fvm::{BoundaryCondition, Limiter};
use pipewave::harness::{self, build_scenario, parse_config, Numerics, Scenario};
use pipewave::homogenize::homogenize;
use pipewave::snapshot::{fmt_float, write_series};
use pipewave::Result;

#[derive(Parser)]
#[command(name = "pipewave", version, about = "Gas waves in a periodically varying pipe")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print and save the bracket and homogenized coefficients.
    Coeffs(Common),
    /// Sample both dispersion relations and scan for instability.
    Dispersion {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100.0)]
        k_max: f64,
        #[arg(long, default_value_t = 2001)]
        n_k: usize,
    },
    /// Run the finite-volume solver and write snapshots.
    RunFvm(Common),
    /// Run the homogenized spectral solver and write snapshots.
    RunHomog(Common),
    /// Run both solvers and write snapshots plus a comparison report.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// Preset name (scenario_a, scenario_b).
    #[arg(long)]
    scenario: Option<String>,
    /// Flat key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Comma-separated snapshot times.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
    #[arg(long)]
    cells_per_period: Option<usize>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// outflow or periodic.
    #[arg(long)]
    bc: Option<BoundaryCondition>,
    /// none, minmod, superbee, vanleer or mc.
    #[arg(long)]
    limiter: Option<Limiter>,
}

impl Common {
    fn resolve(&self) -> Result<(Scenario, Numerics)> {
        let (mut s, mut n) = match &self.config {
            Some(path) => parse_config(&fs::read_to_string(path)?)?,
            None => (build_scenario("scenario_a")?, Numerics::default()),
        };
        if let Some(name) = &self.scenario {
            let preset = build_scenario(name)?;
            if self.config.is_some() && s.name != preset.name {
                eprintln!("note: --scenario {name} replaces the scenario from the config file");
            }
            s = preset;
        }
        if let Some(t) = self.t_end {
            s = s.with_t_end(t);
        }
        if let Some(times) = &self.snapshots {
            s.snapshot_times = times.clone();
        }
        if let Some(v) = self.cells_per_period {
            n.cells_per_period = v;
        }
        if let Some(v) = self.n_modes {
            n.n_modes = v;
        }
        if let Some(v) = self.cfl {
            n.cfl = v;
        }
        if let Some(v) = self.bc {
            n.bc = v;
        }
        if let Some(v) = self.limiter {
            n.limiter = v;
        }
        s.validate()?;
        n.validate()?;
        Ok((s, n))
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn coeffs(common: &Common) -> Result<()> {
    let (s, _) = common.resolve()?;
    let (c, h) = homogenize(&s.profile, &s.gas, s.rho_background)?;
    let mut csv = format!(
        "# scenario={} profile={} rho0={} delta={}\nname,value\n",
        s.name,
        c.profile_label.replace(' ', ""),
        s.rho_background,
        h.delta
    );
    let moments = [
        ("mean_a", c.moments.mean),
        ("mean_inv_a", c.moments.inv),
        ("mean_inv_a2", c.moments.inv2),
        ("mean_inv_a3", c.moments.inv3),
    ];
    for (name, v) in moments.iter().chain(c.table().iter()).chain(h.table().iter()) {
        println!("{name:>12} = {v:+.12e}");
        csv.push_str(&format!("{name},{}\n", fmt_float(*v)));
    }
    write(&common.out_dir.join(format!("{}_coeffs.csv", s.name)), &csv)
}

fn dispersion(common: &Common, k_max: f64, n_k: usize) -> Result<()> {
    let (s, _) = common.resolve()?;
    let rho0 = s.rho_background;
    let (_, h) = homogenize(&s.profile, &s.gas, rho0)?;
    let mut csv = format!("# scenario={} rho0={rho0}\nk,re_omega_plus,im_omega_plus,form\n", s.name);
    for d in sample_both(&h, rho0, k_max, n_k)? {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(d.k),
            fmt_float(d.omega_plus.re),
            fmt_float(d.omega_plus.im),
            d.form
        ));
    }
    let scan = stability_scan(&h, rho0, k_max, n_k)?;
    println!(
        "phase_speed_k0={:.10} phase_speed_k0_without_beta3={:.10} xxx_threshold={} max_imag_xxx={:.3e} max_imag_xxt={:.3e}",
        long_wave_speed(&h, rho0),
        leading_order_speed(&h),
        scan.xxx_threshold.map_or("none".to_string(), |k| format!("{k:.10}")),
        scan.max_imag_xxx,
        scan.max_imag_xxt
    );
    write(&common.out_dir.join(format!("{}_dispersion.csv", s.name)), &csv)
}

fn report_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run_fvm(common: &Common) -> Result<()> {
    let (s, n) = common.resolve()?;
    let series = harness::run_fvm(&s, &n)?;
    report_paths(&write_series(&series, &common.out_dir)?);
    Ok(())
}

fn run_homog(common: &Common) -> Result<()> {
    let (s, n) = common.resolve()?;
    let run = harness::run_homog(&s, &n)?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    report_paths(&write_series(&run.series, &common.out_dir)?);
    Ok(())
}

fn compare(common: &Common) -> Result<()> {
    let (s, n) = common.resolve()?;
    let (fine, homog) = harness::run_both(&s, &n)?;
    for w in &homog.warnings {
        eprintln!("warning: {w}");
    }
    report_paths(&write_series(&fine, &common.out_dir)?);
    report_paths(&write_series(&homog.series, &common.out_dir)?);
    let report = harness::compare(&fine, &homog.series, &s, &n)?;
    for i in 0..report.times.len() {
        println!(
            "t={:<6} rel_L2_rho={:.4e} rel_L2_q={:.4e} peaks_fvm={} peaks_homog={} leading_speed={:.4}{}",
            report.times[i],
            report.rel_l2_rho[i],
            report.rel_l2_q[i],
            report.peaks_fvm[i],
            report.peaks_homog[i],
            report.leading_speed[i],
            if report.wave_breaking[i] { " (steep: wave breaking likely)" } else { "" }
        );
    }
    let path = common.out_dir.join(format!("{}_report.csv", s.name));
    harness::write_report(&report, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Coeffs(c) => coeffs(c),
        Command::Dispersion { common, k_max, n_k } => dispersion(common, *k_max, *n_k),
        Command::RunFvm(c) => run_fvm(c),
        Command::RunHomog(c) => run_homog(c),
        Command::Compare(c) => compare(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
