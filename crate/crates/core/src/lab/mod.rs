//! Configuration, dilation sweeps, hyperuniformity classification and CSV
//! reports: everything the command-line tool orchestrates.

mod classify;
mod config;
mod report;
mod sweep;

pub use classify::{
    classify_curve, classify_hyperuniformity, fit_through_origin, top_half_start, Classification, Hyperuniformity,
    MIN_RECORDS,
};
pub use config::{parse_config, SolverMethod, SweepConfig, DEFAULT_AREA_LAW_SPREAD, DEFAULT_QUAD_ORDER};
pub use report::{emit_report, load_report, parse_report, write_report, REPORT_HEADER};
pub use sweep::{
    functionals_on, relative_spread, run_sweep, scaled_order, solve_domain, FitSummary, ScalingRecord, ScalingReport,
};
