//! Swing damping from free oscillations with the trolley and hoist held.

use serde::{Deserialize, Serialize};
use sigproc::FilterSpec;

use crate::error::{EstError, Result};
use crate::ls::{ls_solve, LsResult, RegressionProblem};
use crate::preprocess::differentiate_unmasked;
use crate::record::MeasurementRecord;

/// Translational rates below this count as stationary [m/s].
pub const STATIONARY_RATE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwingEstimate {
    pub damping_alpha: f64,
    /// `None` when the records never swing about `beta`.
    pub damping_beta: Option<f64>,
    pub alpha: LsResult,
    pub beta: Option<LsResult>,
}

/// `beta` regressor norm, relative to the `alpha` one, below which the
/// `beta` equation carries no information.
const MIN_BETA_EXCITATION: f64 = 1e-6;

/// Rows below this `|sin(alpha)|` are skipped for the `beta` equation.
const MIN_SIN_ALPHA: f64 = 0.1;

pub fn estimate_swing_damping(
    records: &[MeasurementRecord],
    gravity: f64,
    filter: &FilterSpec,
    edge: f64,
) -> Result<SwingEstimate> {
    if records.is_empty() {
        return Err(EstError::Precondition("no free-swing records".into()));
    }
    let (mut ra, mut ya, mut rb, mut yb) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for rec in records {
        rec.check()?;
        let mp = rec.payload_mass;
        if !(mp > 0.0) {
            return Err(EstError::Precondition("free-swing record without payload".into()));
        }
        let d = |v: &[f64]| differentiate_unmasked(rec.t0, rec.dt, v, filter, edge);
        let (x, y, l, a, b) = (d(&rec.x_t)?, d(&rec.y_t)?, d(&rec.l)?, d(&rec.alpha)?, d(&rec.beta)?);
        for k in 0..rec.len() {
            if !a.mask[k] {
                continue;
            }
            let still = [x.velocity[k], y.velocity[k], l.velocity[k]]
                .iter()
                .all(|v| v.abs() < STATIONARY_RATE);
            if !still {
                continue;
            }
            let (sa, ca) = a.position[k].sin_cos();
            let (sb, cb) = b.position[k].sin_cos();
            let len = l.position[k];
            let (ad, bd) = (a.velocity[k], b.velocity[k]);
            let inertia = mp * len * len;
            ra.push(vec![-ad / inertia]);
            ya.push(a.acceleration[k] - (gravity * ca * cb / len + ca * sa * bd * bd));
            if sa.abs() >= MIN_SIN_ALPHA {
                rb.push(vec![-bd / inertia]);
                yb.push(b.acceleration[k] - (-gravity * sb - 2.0 * ca * len * ad * bd) / (sa * len));
            }
        }
    }
    if ra.is_empty() {
        return Err(EstError::Precondition(format!(
            "no stationary segment (all translational rates below {STATIONARY_RATE} m/s) in the free-swing records"
        )));
    }
    let alpha = ls_solve(&RegressionProblem::from_rows(&["D_alpha"], &ra, &ya)?)?;
    let norm = |rows: &[Vec<f64>]| rows.iter().map(|r| r[0] * r[0]).sum::<f64>().sqrt();
    let excited = norm(&rb) > MIN_BETA_EXCITATION * norm(&ra);
    let beta = if excited {
        Some(ls_solve(&RegressionProblem::from_rows(&["D_beta"], &rb, &yb)?)?)
    } else {
        log::warn!("free-swing records do not excite beta; its damping is not estimated");
        None
    };
    Ok(SwingEstimate {
        damping_alpha: alpha.theta[0],
        damping_beta: beta.as_ref().map(|b| b.theta[0]),
        alpha,
        beta,
    })
}
