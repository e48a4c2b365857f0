//! Verification and sweep harness for sparse character sums.

pub mod config;
pub mod error;
pub mod generate;
pub mod plot;
pub mod record;
pub mod run;
pub mod suites;

pub use config::SweepConfig;
pub use error::{HarnessError, Result};
pub use record::{ResultRecord, Status};
pub use run::{run_sweep, run_verify, Format, Summary};
