//! Parameter identification for the crane.
//!
//! The hoist is identified first: its Coulomb level from slow ramps, then
//! inertia and viscous terms by least squares on a no-load record, then the
//! gain from loaded records. The trolley Coulomb maps are learned by
//! Gaussian process regression with maximum-variance sampling and reduced
//! to quartics; with the maps fixed, the remaining axis terms follow by
//! least squares. Swing damping comes last, from free oscillations.
//!
//! All parameters are voltage-normalised (`P = quantity / K`).

pub mod active;
pub mod axis;
pub mod breakaway;
pub mod error;
pub mod gpr;
pub mod ls;
pub mod pipeline;
pub mod poly;
pub mod preprocess;
pub mod record;
pub mod rope;
pub mod swing;

pub use active::{active_sampling, fit_maps, ActiveConfig, ActiveResult, BreakawayOracle, FrictionComponents, MapId, StopReason};
pub use axis::{estimate_axis, p6_from_rope, AxisEstimate, AxisMaps};
pub use breakaway::{estimate_breakaway, first_motion, mean_breakaway, BreakawaySample, DETECTION_QUANTA};
pub use error::{EstError, Result};
pub use gpr::{gpr_fit, gpr_fit_bounded, grid, GprModel, GprSummary, Hyper, HyperBounds};
pub use ls::{ls_solve, LsResult, RegressionProblem, MAX_CONDITION};
pub use pipeline::{maps_from_records, missing_records, moved_mass, run_pipeline, Estimates, MapsEstimate, PipelineConfig, Step, SWING_FILTER};
pub use poly::{fit_poly4, fit_quartic, PolyFit, POLY_GRID};
pub use preprocess::{differentiate, differentiate_unmasked, Derivatives, PreprocessConfig};
pub use record::{MeasurementRecord, Quanta, RecordKind};
pub use rope::{estimate_p3, estimate_rope, estimate_rope_joint, RopeEstimate};
pub use swing::{estimate_swing_damping, SwingEstimate, STATIONARY_RATE};
