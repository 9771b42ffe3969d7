//! Scenario presets, configuration, and the pipeline that runs both solvers
//! and compares their output.

pub mod average;
pub mod compare;
pub mod config;
pub mod run;
pub mod scenario;

pub use average::period_average;
pub use compare::{compare, report_csv, write_report, ComparisonReport};
pub use config::parse_config;
pub use run::{run_both, run_fvm, run_homog, HomogRun};
pub use scenario::{build_scenario, scenario_a, scenario_b, Numerics, Pulse, Scenario, PRESETS};
