//! Continuous dynamics of the crane with the motors folded in.
//!
//! Trolley accelerations are computed first and substituted into the rope and
//! swing equations. When the hoist is held, the rope force is the reaction
//! that keeps the rope length constant; it is solved together with the
//! trolley accelerations, which keeps the locked-rope subsystem energy
//! consistent.

use crate::error::{CoreError, Result};
use crate::friction::{axis_friction, AxisLaw};
use crate::params::CraneParams;
use crate::state::{Axis, AxisMode, CraneState, InputVector, ModeVector};

/// Below this `|sin(alpha)|` the `beta` equation is singular and only its
/// damping term is kept.
pub const SINGULAR_SIN_ALPHA: f64 = 1e-4;

/// Per-axis evaluation law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisLaws {
    pub x: AxisLaw,
    pub y: AxisLaw,
    pub rope: AxisLaw,
}

impl AxisLaws {
    pub fn modal(mode: ModeVector) -> Self {
        AxisLaws {
            x: AxisLaw::from_mode(mode.x),
            y: AxisLaw::from_mode(mode.y),
            rope: AxisLaw::from_mode(mode.rope),
        }
    }

    /// Smooth `tanh(k v)` friction on every axis not listed in `locked`.
    pub fn smooth(k: f64, locked: &[Axis]) -> Self {
        let law = |a: Axis| {
            if locked.contains(&a) {
                AxisLaw::Held
            } else {
                AxisLaw::Smooth { k }
            }
        };
        AxisLaws {
            x: law(Axis::X),
            y: law(Axis::Y),
            rope: law(Axis::Rope),
        }
    }

    pub fn get(&self, axis: Axis) -> AxisLaw {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Rope => self.rope,
        }
    }

    pub fn set(&mut self, axis: Axis, law: AxisLaw) {
        match axis {
            Axis::X => self.x = law,
            Axis::Y => self.y = law,
            Axis::Rope => self.rope = law,
        }
    }
}

/// Result of one vector-field evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub derivative: CraneState,
    /// Force the hoist exerts on the payload along the rope, positive when
    /// it pays the rope out. Negative of the rope tension.
    pub rope_force: f64,
    /// Net force on each axis (indexed by [`Axis::index`]) excluding the
    /// friction that holds a held axis. For a held axis this is the force
    /// static friction must balance; for a moving one it equals inertia
    /// times acceleration.
    pub net_force: [f64; 3],
    /// `|sin(alpha)|` fell below [`SINGULAR_SIN_ALPHA`].
    pub singular: bool,
}

impl Evaluation {
    pub fn net(&self, axis: Axis) -> f64 {
        self.net_force[axis.index()]
    }
}

/// Evaluate the dynamics under arbitrary per-axis laws.
pub fn evaluate(
    state: &CraneState,
    input: &InputVector,
    laws: &AxisLaws,
    params: &CraneParams,
) -> Result<Evaluation> {
    state.check()?;
    if state.l < 0.5 * params.rope.limits.min {
        return Err(CoreError::InvalidState(format!(
            "rope length {} is below half the minimum length {}",
            state.l, params.rope.limits.min
        )));
    }

    let mp = params.payload_mass;
    let g = params.gravity;
    let has_payload = mp > 0.0;
    let (sa, ca) = state.alpha.sin_cos();
    let (sb, cb) = state.beta.sin_cos();
    let l = state.l;
    let ld = if laws.rope.is_held() { 0.0 } else { state.dl };
    let ad = state.dalpha;
    let bd = state.dbeta;

    let drive_x = params.x.gain * input.u_x
        - axis_friction(params, Axis::X, state.x_t, state.dx_t, laws.x);
    let drive_y = params.y.gain * input.u_y
        - axis_friction(params, Axis::Y, state.y_t, state.dy_t, laws.y);
    let mx = params.axis_inertia(Axis::X);
    let my = params.axis_inertia(Axis::Y);
    let x_free = !laws.x.is_held();
    let y_free = !laws.y.is_held();

    // Rope-direction components of the payload acceleration that do not
    // depend on the trolley accelerations.
    let s0 = if has_payload {
        mp * (l * ad * ad + l * bd * bd * sa * sa + g * cb * sa)
    } else {
        0.0
    };
    // Direction cosines of the rope seen from the trolley.
    let ex = sa * sb;
    let ey = ca;

    let (xdd, ydd, ldd, rope_force, net_rope) = if laws.rope.is_held() {
        // Rope length is constant: the rope force is the constraint reaction
        // f = -s0 + mp (ey ydd + ex xdd), solved with the trolley equations.
        let (xdd, ydd) = if !has_payload {
            (
                if x_free { drive_x / mx } else { 0.0 },
                if y_free { drive_y / my } else { 0.0 },
            )
        } else {
            let a11 = mx + mp * ex * ex;
            let a22 = my + mp * ey * ey;
            let a12 = mp * ex * ey;
            let b1 = drive_x + s0 * ex;
            let b2 = drive_y + s0 * ey;
            match (x_free, y_free) {
                (true, true) => {
                    let det = a11 * a22 - a12 * a12;
                    ((b1 * a22 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det)
                }
                (true, false) => (b1 / a11, 0.0),
                (false, true) => (0.0, b2 / a22),
                (false, false) => (0.0, 0.0),
            }
        };
        let f = if has_payload {
            -s0 + mp * (ey * ydd + ex * xdd)
        } else {
            0.0
        };
        let t_rope = params.rope.gain * input.u_l - f;
        (xdd, ydd, 0.0, f, t_rope)
    } else {
        let f = params.rope.gain * input.u_l
            - axis_friction(params, Axis::Rope, state.l, state.dl, laws.rope);
        let coupling = if has_payload { f } else { 0.0 };
        let xdd = if x_free { (drive_x - coupling * ex) / mx } else { 0.0 };
        let ydd = if y_free { (drive_y - coupling * ey) / my } else { 0.0 };
        let inertia = params.axis_inertia(Axis::Rope);
        if inertia <= 0.0 {
            return Err(CoreError::MasslessAxis { axis: Axis::Rope });
        }
        let s = if has_payload {
            s0 - mp * (ey * ydd + ex * xdd)
        } else {
            0.0
        };
        let t_rope = f + s;
        (xdd, ydd, t_rope / inertia, f, t_rope)
    };

    let coupling = if has_payload { rope_force } else { 0.0 };
    let net_x = params.x.gain * input.u_x
        - axis_friction(params, Axis::X, state.x_t, state.dx_t, laws.x)
        - coupling * ex;
    let net_y = params.y.gain * input.u_y
        - axis_friction(params, Axis::Y, state.y_t, state.dy_t, laws.y)
        - coupling * ey;

    let mut singular = false;
    let (a_rate, add, b_rate, bdd) = if has_payload {
        let damp = 1.0 / (mp * l * l);
        let add = (sa * ydd - ca * sb * xdd + g * ca * cb + ca * sa * l * bd * bd - 2.0 * ld * ad) / l
            - params.damping_alpha * ad * damp;
        let bdd = if sa.abs() < SINGULAR_SIN_ALPHA {
            singular = true;
            -params.damping_beta * bd * damp
        } else {
            (-g * sb - cb * xdd - 2.0 * sa * ld * bd - 2.0 * ca * l * ad * bd) / (sa * l)
                - params.damping_beta * bd * damp
        };
        (ad, add, bd, bdd)
    } else {
        (0.0, 0.0, 0.0, 0.0)
    };

    let derivative = CraneState {
        x_t: if x_free { state.dx_t } else { 0.0 },
        dx_t: xdd,
        y_t: if y_free { state.dy_t } else { 0.0 },
        dy_t: ydd,
        l: ld,
        dl: ldd,
        alpha: a_rate,
        dalpha: add,
        beta: b_rate,
        dbeta: bdd,
    };
    if !derivative.is_finite() {
        return Err(CoreError::InvalidState(format!(
            "non-finite derivative {:?} at state {:?}",
            derivative.to_array(),
            state.to_array()
        )));
    }
    Ok(Evaluation {
        derivative,
        rope_force,
        net_force: [net_x, net_y, net_rope],
        singular,
    })
}

/// Time derivative of the state in a given hybrid mode. The mode, not the
/// sign of the velocities, selects the friction branch.
pub fn vector_field(
    state: &CraneState,
    input: &InputVector,
    mode: ModeVector,
    params: &CraneParams,
) -> Result<CraneState> {
    evaluate(state, input, &AxisLaws::modal(mode), params).map(|e| e.derivative)
}

/// Net force on `axis` while it is held at rest, with the other axes in
/// `mode`. For the rope this is the hoist breakaway quantity `t_rope`.
pub fn net_axis_force(
    axis: Axis,
    state: &CraneState,
    input: &InputVector,
    mode: ModeVector,
    params: &CraneParams,
) -> Result<f64> {
    let held = mode.with(axis, AxisMode::Rest);
    evaluate(state, input, &AxisLaws::modal(held), params).map(|e| e.net(axis))
}

/// Position of the payload `(x_p, y_p, z_p)`.
pub fn payload_position(state: &CraneState) -> (f64, f64, f64) {
    let (sa, ca) = state.alpha.sin_cos();
    let (sb, cb) = state.beta.sin_cos();
    (
        state.x_t + state.l * sb * sa,
        state.y_t + state.l * ca,
        -state.l * sa * cb,
    )
}

/// Velocity of the payload.
pub fn payload_velocity(state: &CraneState) -> (f64, f64, f64) {
    let (sa, ca) = state.alpha.sin_cos();
    let (sb, cb) = state.beta.sin_cos();
    let (l, ld, ad, bd) = (state.l, state.dl, state.dalpha, state.dbeta);
    (
        state.dx_t + ld * sb * sa + l * (cb * bd * sa + sb * ca * ad),
        state.dy_t + ld * ca - l * sa * ad,
        -ld * sa * cb - l * (ca * ad * cb - sa * sb * bd),
    )
}

/// Kinetic plus gravitational energy of rail, trolley, payload and the
/// reflected motor inertias. The zero of potential energy is the trolley
/// plane.
pub fn mechanical_energy(state: &CraneState, params: &CraneParams) -> f64 {
    let mx = params.axis_inertia(Axis::X);
    let my = params.axis_inertia(Axis::Y);
    let (vx, vy, vz) = payload_velocity(state);
    let (_, _, zp) = payload_position(state);
    let mp = params.payload_mass;
    0.5 * mx * state.dx_t * state.dx_t
        + 0.5 * my * state.dy_t * state.dy_t
        + 0.5 * params.rope.inertia * state.dl * state.dl
        + 0.5 * mp * (vx * vx + vy * vy + vz * vz)
        + mp * params.gravity * zp
}
