//! Guards and transitions of the 27-mode automaton.

use crane_core::{
    coulomb_magnitude, evaluate, Axis, AxisLaws, AxisMode, CraneParams, CraneState, InputVector,
    ModeVector,
};
use serde::{Deserialize, Serialize};

use crane_core::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    VelocityZero,
    BreakawayPos,
    BreakawayNeg,
    LimitMin,
    LimitMax,
}

impl EventKind {
    pub fn target_mode(self) -> AxisMode {
        match self {
            EventKind::BreakawayPos => AxisMode::Pos,
            EventKind::BreakawayNeg => AxisMode::Neg,
            _ => AxisMode::Rest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardEvent {
    pub time: f64,
    pub axis: Axis,
    pub kind: EventKind,
    pub pre_mode: ModeVector,
    pub post_mode: ModeVector,
}

/// When a guard is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GuardPoint {
    /// Inside or at the end of a step: a moving axis whose velocity has
    /// reached zero stops.
    Step,
    /// At an instant where transitions were just applied: only a velocity
    /// of the wrong sign stops an axis, so a fresh breakaway is not undone.
    Instant,
}

/// Guard status of every axis. `locked` axes never fire.
pub fn guard_check(
    state: &CraneState,
    input: &InputVector,
    mode: ModeVector,
    params: &CraneParams,
    locked: &[Axis],
) -> Result<[Option<EventKind>; 3]> {
    guards(state, input, mode, params, locked, GuardPoint::Step)
}

pub(crate) fn guards(
    state: &CraneState,
    input: &InputVector,
    mode: ModeVector,
    params: &CraneParams,
    locked: &[Axis],
    point: GuardPoint,
) -> Result<[Option<EventKind>; 3]> {
    guards_with(state, input, mode, params, locked, point, NetForce::Evaluate)
}

/// Where breakaway guards get their net forces from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum NetForce {
    Evaluate,
    Known([f64; 3]),
    /// Skip breakaway guards; only velocity and limit guards are checked.
    Skip,
}

/// As [`guards`], reusing net forces already evaluated at this state.
pub(crate) fn guards_with(
    state: &CraneState,
    input: &InputVector,
    mode: ModeVector,
    params: &CraneParams,
    locked: &[Axis],
    point: GuardPoint,
    net_force: NetForce,
) -> Result<[Option<EventKind>; 3]> {
    let mut out = [None; 3];
    let any_rest = Axis::ALL
        .iter()
        .any(|&a| mode[a] == AxisMode::Rest && !locked.contains(&a));
    let net = match net_force {
        NetForce::Known(n) => Some(n),
        NetForce::Evaluate if any_rest => {
            Some(evaluate(state, input, &AxisLaws::modal(mode), params)?.net_force)
        }
        _ => None,
    };
    for axis in Axis::ALL {
        if locked.contains(&axis) {
            continue;
        }
        let lim = params.limits(axis);
        let p = state.position(axis);
        let v = state.velocity(axis);
        out[axis.index()] = match mode[axis] {
            AxisMode::Rest => {
                let Some(net) = net else { continue };
                let f = net[axis.index()];
                let up = coulomb_magnitude(params, axis, p, 1.0);
                let down = coulomb_magnitude(params, axis, p, -1.0);
                if f > up && p < lim.max {
                    Some(EventKind::BreakawayPos)
                } else if f < -down && p > lim.min {
                    Some(EventKind::BreakawayNeg)
                } else {
                    None
                }
            }
            AxisMode::Pos => {
                if p >= lim.max {
                    Some(EventKind::LimitMax)
                } else if v < 0.0 || (v == 0.0 && point == GuardPoint::Step) {
                    Some(EventKind::VelocityZero)
                } else {
                    None
                }
            }
            AxisMode::Neg => {
                if p <= lim.min {
                    Some(EventKind::LimitMin)
                } else if v > 0.0 || (v == 0.0 && point == GuardPoint::Step) {
                    Some(EventKind::VelocityZero)
                } else {
                    None
                }
            }
        };
    }
    Ok(out)
}

/// Apply one event to `(state, mode)`.
pub fn apply_transition(
    kind: EventKind,
    axis: Axis,
    state: &mut CraneState,
    mode: &mut ModeVector,
    params: &CraneParams,
) {
    match kind {
        EventKind::VelocityZero => state.set_velocity(axis, 0.0),
        EventKind::LimitMin => {
            state.set_position(axis, params.limits(axis).min);
            state.set_velocity(axis, 0.0);
        }
        EventKind::LimitMax => {
            state.set_position(axis, params.limits(axis).max);
            state.set_velocity(axis, 0.0);
        }
        EventKind::BreakawayPos | EventKind::BreakawayNeg => {}
    }
    mode[axis] = kind.target_mode();
}
