//! Configuration-driven sweeps over the NDT formulas and simulation
//! verification runs, with CSV output.

mod config;
mod run;

pub use config::{
    parse_config, parse_config_with_overrides, ConfigError, Curve, Mode, Origin, SweepConfig,
    SweepVar, DEFAULT_COUNT, DEFAULT_ROUNDS,
};
pub use run::{
    evaluate_curve, manifest, ndt_csv, run_ndt_sweep, run_sim_verify, sweep_grid, verify_csv,
    verify_options, SimVerifyOutcome, SweepError, SweepRow, NDT_HEADER, VERIFY_HEADER,
};
