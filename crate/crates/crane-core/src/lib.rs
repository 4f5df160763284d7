//! Core model of a 3D overhead crane driven by three DC motors.
//!
//! The state, parameter and mode types are shared by the simulator, the
//! synthetic laboratory and the estimation pipeline. Everything here is a
//! pure function of immutable values.

pub mod dynamics;
pub mod error;
pub mod friction;
pub mod params;
pub mod presets;
pub mod state;

pub use dynamics::{
    evaluate, mechanical_energy, net_axis_force, payload_position, payload_velocity, vector_field,
    AxisLaws, Evaluation, SINGULAR_SIN_ALPHA,
};
pub use error::{CoreError, Result};
pub use friction::{axis_friction, coulomb_force, coulomb_magnitude, viscous_force, AxisLaw};
pub use params::{
    effective_axis, effective_rope, CoulombUnits, CraneParams, Limits, LinearAxis, MotorParams,
    Polynomial4, RawAxisFriction, RopeAxis,
};
pub use state::{Axis, AxisMode, CraneState, InputVector, ModeVector, STATE_DIM};
