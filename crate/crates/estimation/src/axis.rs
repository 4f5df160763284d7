//! Trolley and rail axes: `u = c a + P7+ v+ + P7- v- + P5(x, sign v)`.
//!
//! `c` lumps the reflected motor inertia and the moved mass,
//! `c = J/K + P6 (m_t + m_r)`; the two acceleration columns are identical
//! in a no-load record, so only `c` is estimated from data.

use crane_core::{Axis, Polynomial4};
use serde::{Deserialize, Serialize};

use crate::error::{EstError, Result};
use crate::ls::{ls_solve, LsResult, RegressionProblem};
use crate::preprocess::{differentiate, PreprocessConfig};
use crate::record::MeasurementRecord;

/// Breakaway-voltage maps of one axis, as magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisMaps {
    pub pos: Polynomial4,
    pub neg: Polynomial4,
}

impl AxisMaps {
    pub fn signed(&self, x: f64, v: f64) -> f64 {
        if v > 0.0 {
            self.pos.eval(x)
        } else if v < 0.0 {
            -self.neg.eval(x)
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisEstimate {
    pub axis: Axis,
    /// Combined acceleration coefficient `J/K + P6 m` [V s^2/m].
    pub inertia_coeff: f64,
    pub p7_pos: f64,
    pub p7_neg: f64,
    pub ls: LsResult,
}

impl AxisEstimate {
    /// Split the combined coefficient given `P6 = 1/K` and the moved mass.
    /// Returns `J/K`.
    pub fn motor_inertia_ratio(&self, p6: f64, moved_mass: f64) -> f64 {
        self.inertia_coeff - p6 * moved_mass
    }
}

/// `P6 = 1/K` of an axis under the identical-motor assumption:
/// `K R` is the same on every axis, so `1/K_x = P4 R_x / R_l`.
pub fn p6_from_rope(p4: f64, radius_axis: f64, radius_rope: f64) -> f64 {
    p4 * radius_axis / radius_rope
}

pub fn estimate_axis(
    record: &MeasurementRecord,
    axis: Axis,
    maps: &AxisMaps,
    cfg: &PreprocessConfig,
) -> Result<AxisEstimate> {
    if axis == Axis::Rope {
        return Err(EstError::Precondition("estimate_axis handles the X and Y axes only".into()));
    }
    record.check()?;
    if record.payload_mass != 0.0 {
        return Err(EstError::Precondition(format!(
            "axis records must be taken without payload (got {} kg)",
            record.payload_mass
        )));
    }
    let d = differentiate(record.t0, record.dt, record.position(axis), cfg)?;
    let u = record.input(axis);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for k in 0..record.len() {
        let v = d.velocity[k];
        if !d.mask[k] || v == 0.0 {
            continue;
        }
        let (vp, vn) = if v > 0.0 { (v, 0.0) } else { (0.0, v) };
        rows.push(vec![d.acceleration[k], vp, vn]);
        y.push(u[k] - maps.signed(d.position[k], v));
    }
    if rows.is_empty() {
        return Err(EstError::NoMotion(format!("{axis} axis never moved in the record")));
    }
    let ls = ls_solve(&RegressionProblem::from_rows(&["inertia", "P7+", "P7-"], &rows, &y)?)?;
    Ok(AxisEstimate {
        axis,
        inertia_coeff: ls.theta[0],
        p7_pos: ls.theta[1],
        p7_neg: ls.theta[2],
        ls,
    })
}
