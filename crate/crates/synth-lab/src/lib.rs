//! Virtual crane laboratory.
//!
//! Experiments run on the hybrid simulator and come back as the same
//! encoder-grade records the hardware produces: positions quantised to
//! encoder resolution, inputs logged, velocities withheld. The lab also
//! answers breakaway queries for the active friction-map sampling.

pub mod error;
pub mod lab;
pub mod oracle;
pub mod suite;

pub use error::{LabError, Result};
pub use lab::{peak_excursion, run_experiment, setup, simulate, to_record, Experiment, ExperimentSpec, LabConfig};
pub use oracle::{breakaway_event, breakaway_oracle, breakaway_ramp, OracleConfig, OracleMode, SimOracle};
pub use suite::{generate_suite, tune_amplitude, NamedRecord, Suite, SuiteSpec};
