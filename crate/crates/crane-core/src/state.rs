//! Continuous state, inputs and the discrete per-axis motion mode.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Number of continuous state components.
pub const STATE_DIM: usize = 10;

/// Continuous crane state: trolley position along X and Y, rope length and
/// the two swing angles, each with its rate.
///
/// `alpha` is measured from the Y axis and `beta` from the vertical plane
/// containing the rail, so the hanging equilibrium is `alpha = pi/2, beta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CraneState {
    pub x_t: f64,
    pub dx_t: f64,
    pub y_t: f64,
    pub dy_t: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "dL")]
    pub dl: f64,
    pub alpha: f64,
    pub dalpha: f64,
    pub beta: f64,
    pub dbeta: f64,
}

impl CraneState {
    /// Payload hanging straight down below a trolley at rest.
    pub fn hanging(x_t: f64, y_t: f64, l: f64) -> Self {
        CraneState {
            x_t,
            y_t,
            l,
            alpha: std::f64::consts::FRAC_PI_2,
            ..Default::default()
        }
    }

    pub fn to_array(&self) -> [f64; STATE_DIM] {
        [
            self.x_t, self.dx_t, self.y_t, self.dy_t, self.l, self.dl, self.alpha, self.dalpha,
            self.beta, self.dbeta,
        ]
    }

    pub fn from_array(a: &[f64; STATE_DIM]) -> Self {
        CraneState {
            x_t: a[0],
            dx_t: a[1],
            y_t: a[2],
            dy_t: a[3],
            l: a[4],
            dl: a[5],
            alpha: a[6],
            dalpha: a[7],
            beta: a[8],
            dbeta: a[9],
        }
    }

    pub fn position(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x_t,
            Axis::Y => self.y_t,
            Axis::Rope => self.l,
        }
    }

    pub fn velocity(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx_t,
            Axis::Y => self.dy_t,
            Axis::Rope => self.dl,
        }
    }

    pub fn set_position(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::X => self.x_t = value,
            Axis::Y => self.y_t = value,
            Axis::Rope => self.l = value,
        }
    }

    pub fn set_velocity(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::X => self.dx_t = value,
            Axis::Y => self.dy_t = value,
            Axis::Rope => self.dl = value,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn check(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(CoreError::InvalidState(format!(
                "non-finite component in {:?}",
                self.to_array()
            )));
        }
        if self.l <= 0.0 {
            return Err(CoreError::InvalidState(format!(
                "rope length must be positive, got {}",
                self.l
            )));
        }
        Ok(())
    }
}

/// Motor voltages (or direct forces when the axis gain is one).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputVector {
    pub u_x: f64,
    pub u_y: f64,
    pub u_l: f64,
}

impl InputVector {
    pub fn new(u_x: f64, u_y: f64, u_l: f64) -> Self {
        InputVector { u_x, u_y, u_l }
    }

    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.u_x,
            Axis::Y => self.u_y,
            Axis::Rope => self.u_l,
        }
    }

    /// Clamp each component to `[-limit, limit]`.
    pub fn saturate(self, limit: f64) -> Self {
        InputVector {
            u_x: self.u_x.clamp(-limit, limit),
            u_y: self.u_y.clamp(-limit, limit),
            u_l: self.u_l.clamp(-limit, limit),
        }
    }
}

/// The three actuated axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Rope,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Rope];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Rope => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Rope => "rope",
        })
    }
}

/// Per-axis discrete motion state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisMode {
    Neg,
    #[default]
    Rest,
    Pos,
}

impl AxisMode {
    /// Mode numbering used in output files: 1 = negative motion, 2 = rest,
    /// 3 = positive motion.
    pub fn code(self) -> u8 {
        match self {
            AxisMode::Neg => 1,
            AxisMode::Rest => 2,
            AxisMode::Pos => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(AxisMode::Neg),
            2 => Some(AxisMode::Rest),
            3 => Some(AxisMode::Pos),
            _ => None,
        }
    }

    /// -1, 0 or +1.
    pub fn direction(self) -> f64 {
        match self {
            AxisMode::Neg => -1.0,
            AxisMode::Rest => 0.0,
            AxisMode::Pos => 1.0,
        }
    }

    /// Mode implied by the sign of a velocity.
    pub fn from_velocity(v: f64) -> Self {
        if v > 0.0 {
            AxisMode::Pos
        } else if v < 0.0 {
            AxisMode::Neg
        } else {
            AxisMode::Rest
        }
    }
}

/// Discrete mode of the hybrid automaton: one [`AxisMode`] per axis, 27
/// combinations in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ModeVector {
    pub x: AxisMode,
    pub y: AxisMode,
    pub rope: AxisMode,
}

impl ModeVector {
    pub const REST: ModeVector = ModeVector {
        x: AxisMode::Rest,
        y: AxisMode::Rest,
        rope: AxisMode::Rest,
    };

    pub fn new(x: AxisMode, y: AxisMode, rope: AxisMode) -> Self {
        ModeVector { x, y, rope }
    }

    /// Modes implied by the velocity signs of `state`.
    pub fn from_state(state: &CraneState) -> Self {
        ModeVector {
            x: AxisMode::from_velocity(state.dx_t),
            y: AxisMode::from_velocity(state.dy_t),
            rope: AxisMode::from_velocity(state.dl),
        }
    }

    pub fn with(mut self, axis: Axis, mode: AxisMode) -> Self {
        self[axis] = mode;
        self
    }

    /// Flat index in `0..27`.
    pub fn index(&self) -> usize {
        let c = |m: AxisMode| (m.code() - 1) as usize;
        c(self.x) * 9 + c(self.y) * 3 + c(self.rope)
    }

    /// Axes whose mode differs between `self` and `other`.
    pub fn diff(&self, other: &ModeVector) -> Vec<Axis> {
        Axis::ALL
            .into_iter()
            .filter(|&a| self[a] != other[a])
            .collect()
    }
}

impl Index<Axis> for ModeVector {
    type Output = AxisMode;

    fn index(&self, axis: Axis) -> &AxisMode {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Rope => &self.rope,
        }
    }
}

impl IndexMut<Axis> for ModeVector {
    fn index_mut(&mut self, axis: Axis) -> &mut AxisMode {
        match axis {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
            Axis::Rope => &mut self.rope,
        }
    }
}

impl fmt::Display for ModeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.x.code(),
            self.y.code(),
            self.rope.code()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_seven_distinct_modes() {
        let modes = [AxisMode::Neg, AxisMode::Rest, AxisMode::Pos];
        let mut seen = std::collections::HashSet::new();
        for x in modes {
            for y in modes {
                for r in modes {
                    let m = ModeVector::new(x, y, r);
                    assert!(m.index() < 27);
                    seen.insert(m.index());
                }
            }
        }
        assert_eq!(seen.len(), 27);
    }

    #[test]
    fn mode_codes_round_trip() {
        for code in 1..=3 {
            assert_eq!(AxisMode::from_code(code).unwrap().code(), code);
        }
        assert_eq!(AxisMode::from_code(0), None);
        assert_eq!(AxisMode::from_code(4), None);
    }

    #[test]
    fn state_array_layout_matches_field_order() {
        let s = CraneState::from_array(&[0., 1., 2., 3., 4., 5., 6., 7., 8., 9.]);
        assert_eq!(s.dl, 5.0);
        assert_eq!(s.beta, 8.0);
        assert_eq!(s.to_array()[9], 9.0);
    }

    #[test]
    fn non_positive_rope_is_invalid() {
        let mut s = CraneState::hanging(0.1, 0.1, 0.3);
        assert!(s.check().is_ok());
        s.l = 0.0;
        assert!(s.check().is_err());
        s.l = f64::NAN;
        assert!(s.check().is_err());
    }
}
