//! Effective friction of the three axes.
//!
//! All forces returned here are *friction* forces `d̄` with the sign of the
//! motion they resist, i.e. they enter the dynamics as `K u - d̄`.

use crate::params::{CoulombUnits, CraneParams};
use crate::state::{Axis, AxisMode};

/// Signed Coulomb friction for a given direction of motion.
///
/// Returns `+C̄⁺(pos)` for `direction > 0`, `-C̄⁻(pos)` for `direction < 0`
/// and zero at rest. The position argument is clamped to the axis limits
/// before the quartic map is evaluated.
pub fn coulomb_force(params: &CraneParams, axis: Axis, position: f64, direction: f64) -> f64 {
    if direction == 0.0 {
        return 0.0;
    }
    direction.signum() * coulomb_magnitude(params, axis, position, direction)
}

/// Coulomb level (non-negative) that applies to motion in `direction`.
pub fn coulomb_magnitude(params: &CraneParams, axis: Axis, position: f64, direction: f64) -> f64 {
    let lin = match axis {
        Axis::X => &params.x,
        Axis::Y => &params.y,
        Axis::Rope => return params.rope.coulomb,
    };
    let p = lin.limits.clamp(position);
    let map = if direction >= 0.0 {
        &lin.coulomb_pos
    } else {
        &lin.coulomb_neg
    };
    let value = map.eval(p);
    match params.coulomb_units {
        CoulombUnits::Newtons => value,
        CoulombUnits::Volts => value * lin.gain,
    }
}

/// Direction-dependent viscous friction `D̄(±) v`.
pub fn viscous_force(params: &CraneParams, axis: Axis, velocity: f64) -> f64 {
    let coeff = match axis {
        Axis::X if velocity > 0.0 => params.x.viscous_pos,
        Axis::X => params.x.viscous_neg,
        Axis::Y if velocity > 0.0 => params.y.viscous_pos,
        Axis::Y => params.y.viscous_neg,
        Axis::Rope => params.rope.viscous,
    };
    if velocity == 0.0 {
        0.0
    } else {
        coeff * velocity
    }
}

/// How one axis is treated when the vector field is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisLaw {
    /// Held by static friction (or locked): zero velocity and acceleration.
    Held,
    /// Sliding in a fixed direction; friction follows the direction, not the
    /// sign of the instantaneous velocity.
    Sliding(AxisMode),
    /// Smooth approximation: `sign(v)` replaced by `tanh(k v)`.
    Smooth { k: f64 },
}

impl AxisLaw {
    pub fn from_mode(mode: AxisMode) -> Self {
        match mode {
            AxisMode::Rest => AxisLaw::Held,
            m => AxisLaw::Sliding(m),
        }
    }

    pub fn is_held(&self) -> bool {
        matches!(self, AxisLaw::Held)
    }
}

/// Total friction `d̄` on a moving axis under `law`. Zero for held axes.
pub fn axis_friction(params: &CraneParams, axis: Axis, position: f64, velocity: f64, law: AxisLaw) -> f64 {
    match law {
        AxisLaw::Held => 0.0,
        AxisLaw::Sliding(mode) => {
            let dir = mode.direction();
            let coeff = viscous_coefficient(params, axis, dir);
            coeff * velocity + coulomb_force(params, axis, position, dir)
        }
        AxisLaw::Smooth { k } => {
            let dir = if velocity >= 0.0 { 1.0 } else { -1.0 };
            viscous_force(params, axis, velocity)
                + coulomb_magnitude(params, axis, position, dir) * (k * velocity).tanh()
        }
    }
}

fn viscous_coefficient(params: &CraneParams, axis: Axis, direction: f64) -> f64 {
    match axis {
        Axis::X if direction > 0.0 => params.x.viscous_pos,
        Axis::X => params.x.viscous_neg,
        Axis::Y if direction > 0.0 => params.y.viscous_pos,
        Axis::Y => params.y.viscous_neg,
        Axis::Rope => params.rope.viscous,
    }
}
