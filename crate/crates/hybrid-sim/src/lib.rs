//! Hybrid stick-slip simulation of the crane.
//!
//! Each axis is in one of three modes (moving negative, at rest, moving
//! positive). Resting axes are held exactly; guards detect velocity zero
//! crossings, position limits and breakaway, and an adaptive Dormand–Prince
//! integrator localises each event by bisection on its dense output. The
//! same integrator also runs the smooth `tanh` friction baseline.

pub mod benchmark;
pub mod cases;
pub mod config;
pub mod error;
pub mod events;
pub mod input;
pub mod integrate;
pub mod solver;
pub mod trajectory;

pub use benchmark::{benchmark, BenchRow, BenchTable, DEFAULT_KS};
pub use cases::{case1, case2, Scenario};
pub use config::{Model, SimConfig};
pub use error::{Result, SimError};
pub use events::{apply_transition, guard_check, EventKind, GuardEvent};
pub use input::{InputSignal, Waveform};
pub use integrate::integrate;
pub use trajectory::{rmse, Sample, SimStats, Trajectory};
