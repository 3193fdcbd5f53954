//! Configuration, simulation driving and file output for the `slvp` command.
//!
//! The binary is a thin wrapper; everything it does is reachable from here, which is
//! also what the integration tests use.

pub mod analysis;
pub mod config;
pub mod converge;
pub mod error;
pub mod run;
pub mod snapshot;

pub use config::{parse_config, parse_sources, RunConfig, StartMode, StartupPlan, OUTPUT_DIR_ENV};
pub use converge::{run_convergence_study, ConvergenceRow};
pub use error::{AppError, AppResult};
pub use run::{run_simulation, RunSummary};
pub use snapshot::Snapshot;
