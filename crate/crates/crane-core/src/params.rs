//! Physical and effective crane parameters.
//!
//! The simulator works with *effective* quantities: motor inertia, back-EMF
//! damping and internal motor friction reflected through the gearbox and
//! pulley onto the linear axes. [`effective_axis`] and [`effective_rope`]
//! build them from raw motor data when that is known.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::state::{Axis, InputVector};

/// Quartic polynomial `c0 + c1 p + c2 p^2 + c3 p^3 + c4 p^4`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial4 {
    pub coeffs: [f64; 5],
}

impl Polynomial4 {
    pub const fn new(coeffs: [f64; 5]) -> Self {
        Polynomial4 { coeffs }
    }

    pub const fn constant(c: f64) -> Self {
        Polynomial4 {
            coeffs: [c, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * p + c)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Polynomial4 {
            coeffs: self.coeffs.map(|c| c * k),
        }
    }

    pub fn shifted(&self, offset: f64) -> Self {
        let mut coeffs = self.coeffs;
        coeffs[0] += offset;
        Polynomial4 { coeffs }
    }

    /// Smallest value on a uniform grid over `[lo, hi]`.
    pub fn min_on(&self, lo: f64, hi: f64, points: usize) -> f64 {
        let n = points.max(2);
        (0..n)
            .map(|i| self.eval(lo + (hi - lo) * i as f64 / (n - 1) as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Travel range of an axis, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub min: f64,
    pub max: f64,
}

impl Limits {
    pub const fn new(min: f64, max: f64) -> Self {
        Limits { min, max }
    }

    pub fn clamp(&self, p: f64) -> f64 {
        p.clamp(self.min, self.max)
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.min && p <= self.max
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.min + self.max)
    }
}

/// Unit convention of the stored Coulomb maps of the X and Y axes.
///
/// Maps identified from breakaway voltages are naturally in volts (force
/// divided by the axis gain); the dynamics need newtons. Both are accepted
/// and converted on evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoulombUnits {
    #[default]
    Newtons,
    Volts,
}

/// Effective parameters of the X or Y axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearAxis {
    /// Reflected motor inertia `J̄` [kg].
    pub inertia: f64,
    /// Voltage-to-force gain `K` [N/V].
    pub gain: f64,
    /// Effective viscous coefficient for positive velocity [N s/m].
    pub viscous_pos: f64,
    /// Effective viscous coefficient for negative velocity [N s/m].
    pub viscous_neg: f64,
    /// Coulomb magnitude map for positive motion, over position.
    pub coulomb_pos: Polynomial4,
    /// Coulomb magnitude map for negative motion, over position.
    pub coulomb_neg: Polynomial4,
    pub limits: Limits,
}

/// Effective parameters of the hoist. No mechanical friction is modelled on
/// the rope; only the reflected motor terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RopeAxis {
    pub inertia: f64,
    pub gain: f64,
    pub viscous: f64,
    /// Direction-independent Coulomb level [N].
    pub coulomb: f64,
    pub limits: Limits,
}

/// Complete parameter set of the crane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CraneParams {
    pub rail_mass: f64,
    pub trolley_mass: f64,
    pub payload_mass: f64,
    #[serde(default = "default_gravity")]
    pub gravity: f64,
    pub radius_x: f64,
    pub radius_y: f64,
    pub radius_rope: f64,
    pub x: LinearAxis,
    pub y: LinearAxis,
    pub rope: RopeAxis,
    /// Swing damping about `alpha` [N m s].
    pub damping_alpha: f64,
    /// Swing damping about `beta` [N m s].
    pub damping_beta: f64,
    #[serde(default)]
    pub coulomb_units: CoulombUnits,
    /// Symmetric input saturation; `None` disables it.
    #[serde(default = "default_input_limit")]
    pub input_limit: Option<f64>,
}

fn default_gravity() -> f64 {
    9.81
}

fn default_input_limit() -> Option<f64> {
    Some(12.0)
}

impl CraneParams {
    pub fn validate(&self) -> Result<()> {
        positive("rail_mass", self.rail_mass)?;
        positive("trolley_mass", self.trolley_mass)?;
        non_negative("payload_mass", self.payload_mass)?;
        positive("gravity", self.gravity)?;
        positive("radius_x", self.radius_x)?;
        positive("radius_y", self.radius_y)?;
        positive("radius_rope", self.radius_rope)?;
        non_negative("damping_alpha", self.damping_alpha)?;
        non_negative("damping_beta", self.damping_beta)?;
        for (name, axis) in [("x", &self.x), ("y", &self.y)] {
            positive("gain", axis.gain)?;
            non_negative("inertia", axis.inertia)?;
            non_negative("viscous_pos", axis.viscous_pos)?;
            non_negative("viscous_neg", axis.viscous_neg)?;
            check_limits(name, axis.limits)?;
            let lo = axis.limits.min;
            let hi = axis.limits.max;
            for (dir, poly) in [("coulomb_pos", &axis.coulomb_pos), ("coulomb_neg", &axis.coulomb_neg)] {
                if poly.coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(CoreError::param("coulomb", format!("{name}.{dir} is not finite")));
                }
                let m = poly.min_on(lo, hi, 201);
                if m < 0.0 {
                    return Err(CoreError::param(
                        "coulomb",
                        format!("{name}.{dir} map goes negative ({m}) inside the axis range"),
                    ));
                }
            }
        }
        positive("rope.gain", self.rope.gain)?;
        non_negative("rope.inertia", self.rope.inertia)?;
        non_negative("rope.viscous", self.rope.viscous)?;
        non_negative("rope.coulomb", self.rope.coulomb)?;
        check_limits("rope", self.rope.limits)?;
        if self.rope.limits.min <= 0.0 {
            return Err(CoreError::param("rope.limits", "minimum rope length must be positive"));
        }
        if let Some(u) = self.input_limit {
            positive("input_limit", u)?;
        }
        Ok(())
    }

    pub fn gain(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x.gain,
            Axis::Y => self.y.gain,
            Axis::Rope => self.rope.gain,
        }
    }

    pub fn limits(&self, axis: Axis) -> Limits {
        match axis {
            Axis::X => self.x.limits,
            Axis::Y => self.y.limits,
            Axis::Rope => self.rope.limits,
        }
    }

    pub fn linear(&self, axis: Axis) -> Option<&LinearAxis> {
        match axis {
            Axis::X => Some(&self.x),
            Axis::Y => Some(&self.y),
            Axis::Rope => None,
        }
    }

    /// Total inertia accelerated by the axis actuator, payload excluded for
    /// the trolley axes (it couples through the rope force instead).
    pub fn axis_inertia(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x.inertia + self.trolley_mass + self.rail_mass,
            Axis::Y => self.y.inertia + self.trolley_mass,
            Axis::Rope => self.rope.inertia + self.payload_mass,
        }
    }

    pub fn saturate(&self, u: InputVector) -> InputVector {
        match self.input_limit {
            Some(lim) => u.saturate(lim),
            None => u,
        }
    }

    /// Copy with the Coulomb maps converted to newtons.
    pub fn to_newtons(&self) -> CraneParams {
        let mut p = self.clone();
        if p.coulomb_units == CoulombUnits::Volts {
            for axis in [&mut p.x, &mut p.y] {
                axis.coulomb_pos = axis.coulomb_pos.scaled(axis.gain);
                axis.coulomb_neg = axis.coulomb_neg.scaled(axis.gain);
            }
            p.coulomb_units = CoulombUnits::Newtons;
        }
        p
    }

    /// Copy with the Coulomb maps expressed in volts (divided by the gain).
    pub fn to_volts(&self) -> CraneParams {
        let mut p = self.to_newtons();
        for axis in [&mut p.x, &mut p.y] {
            axis.coulomb_pos = axis.coulomb_pos.scaled(1.0 / axis.gain);
            axis.coulomb_neg = axis.coulomb_neg.scaled(1.0 / axis.gain);
        }
        p.coulomb_units = CoulombUnits::Volts;
        p
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CoreError::param(name, format!("must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CoreError::param(name, format!("must be non-negative and finite, got {v}")))
    }
}

fn check_limits(name: &str, l: Limits) -> Result<()> {
    if l.min.is_finite() && l.max.is_finite() && l.min < l.max {
        Ok(())
    } else {
        Err(CoreError::param("limits", format!("{name}: need min < max, got [{}, {}]", l.min, l.max)))
    }
}

/// DC motor constants. Every axis is driven by one of these through a
/// gearbox of ratio `gear_ratio` and a pulley.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorParams {
    /// Winding resistance [Ohm].
    pub resistance: f64,
    /// Back-EMF constant [V s/rad].
    pub back_emf: f64,
    /// Torque constant [N m/A].
    pub torque_constant: f64,
    /// Rotor inertia [kg m^2].
    pub rotor_inertia: f64,
    /// Internal viscous friction [N m s/rad].
    pub viscous: f64,
    /// Internal Coulomb torque [N m].
    pub coulomb: f64,
    pub gear_ratio: f64,
}

impl MotorParams {
    fn validate(&self) -> Result<()> {
        positive("resistance", self.resistance)?;
        positive("torque_constant", self.torque_constant)?;
        positive("gear_ratio", self.gear_ratio)?;
        non_negative("rotor_inertia", self.rotor_inertia)?;
        non_negative("viscous", self.viscous)?;
        non_negative("coulomb", self.coulomb)?;
        if !self.back_emf.is_finite() {
            return Err(CoreError::param("back_emf", "must be finite"));
        }
        Ok(())
    }

    /// Reflected inertia `r_g^2 / R_a^2 * J`.
    pub fn reflected_inertia(&self, radius: f64) -> f64 {
        let k = self.gear_ratio / radius;
        k * k * self.rotor_inertia
    }

    /// Voltage-to-force gain `r_g K_p / (R R_a)`.
    pub fn gain(&self, radius: f64) -> f64 {
        self.gear_ratio * self.torque_constant / (self.resistance * radius)
    }

    /// Back-EMF and internal viscous friction reflected onto the axis.
    pub fn reflected_viscous(&self, radius: f64) -> f64 {
        let k = self.gear_ratio / radius;
        self.torque_constant * self.back_emf * k * k / self.resistance + k * k * self.viscous
    }

    /// Internal Coulomb torque reflected onto the axis [N].
    pub fn reflected_coulomb(&self, radius: f64) -> f64 {
        self.gear_ratio / radius * self.coulomb
    }
}

/// Mechanical (rail or trolley) friction before the motor terms are added.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAxisFriction {
    pub viscous_pos: f64,
    pub viscous_neg: f64,
    pub coulomb_pos: Polynomial4,
    pub coulomb_neg: Polynomial4,
}

/// Effective X/Y axis parameters from motor constants, pulley radius and raw
/// mechanical friction. Coulomb maps are magnitudes; the reflected motor
/// Coulomb torque adds to both directions.
pub fn effective_axis(
    motor: &MotorParams,
    radius: f64,
    raw: &RawAxisFriction,
    limits: Limits,
) -> Result<LinearAxis> {
    motor.validate()?;
    positive("radius", radius)?;
    let dv = motor.reflected_viscous(radius);
    let dc = motor.reflected_coulomb(radius);
    Ok(LinearAxis {
        inertia: motor.reflected_inertia(radius),
        gain: motor.gain(radius),
        viscous_pos: dv + raw.viscous_pos,
        viscous_neg: dv + raw.viscous_neg,
        coulomb_pos: raw.coulomb_pos.shifted(dc),
        coulomb_neg: raw.coulomb_neg.shifted(dc),
        limits,
    })
}

/// Effective hoist parameters. Mechanical friction on the rope is neglected,
/// so only the reflected motor terms remain.
pub fn effective_rope(motor: &MotorParams, radius: f64, limits: Limits) -> Result<RopeAxis> {
    motor.validate()?;
    positive("radius", radius)?;
    Ok(RopeAxis {
        inertia: motor.reflected_inertia(radius),
        gain: motor.gain(radius),
        viscous: motor.reflected_viscous(radius),
        coulomb: motor.reflected_coulomb(radius),
        limits,
    })
}
