//! Parameter sets of the laboratory crane and of the two friction benchmark
//! cases.
//!
//! The rail and trolley masses are not identified by the estimation
//! procedure; the values below are the manufacturer's nominal ones.

use crate::params::{CoulombUnits, CraneParams, Limits, LinearAxis, Polynomial4, RopeAxis};

pub const RAIL_MASS: f64 = 2.2;
pub const TROLLEY_MASS: f64 = 1.155;
pub const RADIUS_X: f64 = 40e-3;
pub const RADIUS_Y: f64 = 40e-3;
pub const RADIUS_ROPE: f64 = 15e-3;
pub const X_LIMITS: Limits = Limits::new(0.0, 0.505);
pub const Y_LIMITS: Limits = Limits::new(0.0, 0.505);
pub const ROPE_LIMITS: Limits = Limits::new(0.13, 0.57);

/// Identified parameters of the laboratory crane. The Coulomb maps of the X
/// and Y axes are breakaway-voltage maps (volts); the negative-direction map
/// of the Y axis is stored as a magnitude.
pub fn table3() -> CraneParams {
    CraneParams {
        rail_mass: RAIL_MASS,
        trolley_mass: TROLLEY_MASS,
        payload_mass: 0.457,
        gravity: 9.81,
        radius_x: RADIUS_X,
        radius_y: RADIUS_Y,
        radius_rope: RADIUS_ROPE,
        x: LinearAxis {
            inertia: 1.76,
            gain: 2.33,
            viscous_pos: 76.23,
            viscous_neg: 75.12,
            coulomb_pos: Polynomial4::new([2.63, 0.08, -2.14, 22.47, -19.69]),
            coulomb_neg: Polynomial4::new([2.32, 0.98, 1.44, -25.06, 30.61]),
            limits: X_LIMITS,
        },
        y: LinearAxis {
            inertia: 3.52,
            gain: 4.66,
            viscous_pos: 145.94,
            viscous_neg: 143.70,
            coulomb_pos: Polynomial4::new([3.86, -4.06, 32.12, -72.83, 51.83]),
            coulomb_neg: Polynomial4::new([3.38, -1.31, 13.54, -30.94, 18.23]),
            limits: Y_LIMITS,
        },
        rope: RopeAxis {
            inertia: 17.76,
            gain: 8.83,
            viscous: 676.12,
            coulomb: 9.511,
            limits: ROPE_LIMITS,
        },
        damping_alpha: 2.573e-4,
        damping_beta: 0.0059,
        coulomb_units: CoulombUnits::Volts,
        input_limit: Some(12.0),
    }
}

fn frictionless_axis(coulomb: f64, limits: Limits) -> LinearAxis {
    LinearAxis {
        inertia: 0.0,
        gain: 1.0,
        viscous_pos: 0.0,
        viscous_neg: 0.0,
        coulomb_pos: Polynomial4::constant(coulomb),
        coulomb_neg: Polynomial4::constant(coulomb),
        limits,
    }
}

fn force_driven(payload_mass: f64, trolley_coulomb: f64, rope_coulomb: f64) -> CraneParams {
    CraneParams {
        rail_mass: RAIL_MASS,
        trolley_mass: TROLLEY_MASS,
        payload_mass,
        gravity: 9.81,
        radius_x: RADIUS_X,
        radius_y: RADIUS_Y,
        radius_rope: RADIUS_ROPE,
        x: frictionless_axis(trolley_coulomb, X_LIMITS),
        y: frictionless_axis(trolley_coulomb, Y_LIMITS),
        rope: RopeAxis {
            inertia: 0.0,
            gain: 1.0,
            viscous: 0.0,
            coulomb: rope_coulomb,
            limits: ROPE_LIMITS,
        },
        damping_alpha: 0.0,
        damping_beta: 0.0,
        coulomb_units: CoulombUnits::Newtons,
        input_limit: None,
    }
}

/// Swinging payload dragging the trolley: 0.457 kg payload, 1 N dry
/// friction, no viscous friction or motor inertia, unit gains so the inputs
/// are forces.
pub fn case1() -> CraneParams {
    force_driven(0.457, 1.0, 1.0)
}

/// Hoist only: 1 kg payload and a rope Coulomb level equal to its weight.
pub fn case2() -> CraneParams {
    force_driven(1.0, 1.0, 9.81)
}
