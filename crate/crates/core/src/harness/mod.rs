//! Experiment driver: configuration, seeded test families, sweeps, fits and
//! reports.

pub mod algebra;
pub mod config;
pub mod families;
pub mod geometry;
pub mod report;
pub mod scaling;
pub mod table;
pub mod tomas;

pub use algebra::run_algebra_suite;
pub use config::ExperimentConfig;
pub use geometry::run_sector_geometry;
pub use report::{emit_report, Report, Row, Verdict};
pub use scaling::{run_annulus_scaling, run_endpoint_scaling, ScalingFit};
pub use table::run_full_restriction_table;
pub use tomas::run_tomas_stein_components;

use crate::error::{Error, Result};

/// Experiment names accepted by [`run_experiment`], in `all` order.
pub const EXPERIMENTS: [&str; 6] = [
    "algebra",
    "annulus",
    "endpoint",
    "table",
    "tomas-stein",
    "geometry",
];

/// Runs one named experiment, or every experiment for `"all"`.
pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<Vec<Report>> {
    match name {
        "all" => run_all(cfg),
        "algebra" => Ok(vec![run_algebra_suite(cfg)?]),
        "annulus" => Ok(vec![run_annulus_scaling(cfg)?]),
        "endpoint" => Ok(vec![run_endpoint_scaling(cfg)?]),
        "table" => Ok(vec![run_full_restriction_table(cfg)?]),
        "tomas-stein" => Ok(vec![run_tomas_stein_components(cfg)?]),
        "geometry" => Ok(vec![run_sector_geometry(cfg)?]),
        other => Err(Error::Config(format!("unknown experiment {other:?}"))),
    }
}

pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<Report>> {
    EXPERIMENTS
        .iter()
        .map(|e| run_experiment(e, cfg).map(|mut v| v.remove(0)))
        .collect()
}
