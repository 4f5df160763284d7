//! Hoist parameters: `u_l = P1 L'' + P2 L' + P3 sign(L') + P4 m_p (L'' - g)`.

use crane_core::Axis;
use serde::{Deserialize, Serialize};

use crate::breakaway::mean_breakaway;
use crate::error::{EstError, Result};
use crate::ls::{ls_solve, LsResult, RegressionProblem};
use crate::preprocess::{differentiate, PreprocessConfig};
use crate::record::MeasurementRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RopeEstimate {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    /// Fit of (P1, P2) on the no-load record with P3 fixed.
    pub dynamics: LsResult,
    /// Fit of P4 on the loaded records with P1..P3 fixed.
    pub load: LsResult,
}

impl RopeEstimate {
    /// Correlation between the P1 and P4 estimates. The stages use disjoint
    /// records, so their estimation errors are independent.
    pub fn corr_p1_p4(&self) -> f64 {
        0.0
    }

    pub fn corr_p1_p2(&self) -> f64 {
        self.dynamics.correlation[0][1]
    }
}

/// P3 as the mean breakaway magnitude of the rope ramp records.
pub fn estimate_p3(ramps: &[MeasurementRecord]) -> Result<f64> {
    mean_breakaway(ramps, Axis::Rope)
}

struct Rows {
    acc: Vec<f64>,
    vel: Vec<f64>,
    input: Vec<f64>,
}

fn masked_rows(record: &MeasurementRecord, cfg: &PreprocessConfig) -> Result<Rows> {
    record.check()?;
    let d = differentiate(record.t0, record.dt, &record.l, cfg)?;
    let mut rows = Rows {
        acc: Vec::new(),
        vel: Vec::new(),
        input: Vec::new(),
    };
    for k in 0..record.len() {
        if d.mask[k] && d.velocity[k] != 0.0 {
            rows.acc.push(d.acceleration[k]);
            rows.vel.push(d.velocity[k]);
            rows.input.push(record.u_l[k]);
        }
    }
    if rows.acc.is_empty() {
        return Err(EstError::NoMotion(format!("no usable rope samples in a {:?} record", record.kind)));
    }
    Ok(rows)
}

/// Staged estimation: P3 given, then (P1, P2) on the no-load record, then P4
/// on the loaded records.
pub fn estimate_rope(
    p3: f64,
    no_load: &MeasurementRecord,
    loaded: &[MeasurementRecord],
    gravity: f64,
    cfg: &PreprocessConfig,
) -> Result<RopeEstimate> {
    if no_load.payload_mass != 0.0 {
        return Err(EstError::Precondition(format!(
            "the no-load rope record carries a {} kg payload",
            no_load.payload_mass
        )));
    }
    if loaded.is_empty() {
        return Err(EstError::Precondition("no loaded rope records".into()));
    }
    let r = masked_rows(no_load, cfg)?;
    let rows: Vec<Vec<f64>> = r.acc.iter().zip(&r.vel).map(|(&a, &v)| vec![a, v]).collect();
    let y: Vec<f64> = r.input.iter().zip(&r.vel).map(|(u, v)| u - p3 * v.signum()).collect();
    let dynamics = ls_solve(&RegressionProblem::from_rows(&["P1", "P2"], &rows, &y)?)?;
    let (p1, p2) = (dynamics.theta[0], dynamics.theta[1]);

    let mut rows = Vec::new();
    let mut y = Vec::new();
    for rec in loaded {
        if !(rec.payload_mass > 0.0) {
            return Err(EstError::Precondition("a loaded rope record has no payload".into()));
        }
        let r = masked_rows(rec, cfg)?;
        for k in 0..r.acc.len() {
            rows.push(vec![rec.payload_mass * (r.acc[k] - gravity)]);
            y.push(r.input[k] - p1 * r.acc[k] - p2 * r.vel[k] - p3 * r.vel[k].signum());
        }
    }
    let load = ls_solve(&RegressionProblem::from_rows(&["P4"], &rows, &y)?)?;
    Ok(RopeEstimate {
        p1,
        p2,
        p3,
        p4: load.theta[0],
        dynamics,
        load,
    })
}

/// All four parameters in one regression over every record. Kept for
/// comparison with the staged fit; here P3 has to be separated from P2 by
/// the dynamic data alone.
pub fn estimate_rope_joint(
    no_load: &MeasurementRecord,
    loaded: &[MeasurementRecord],
    gravity: f64,
    cfg: &PreprocessConfig,
) -> Result<LsResult> {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for rec in std::iter::once(no_load).chain(loaded) {
        let r = masked_rows(rec, cfg)?;
        for k in 0..r.acc.len() {
            rows.push(vec![
                r.acc[k],
                r.vel[k],
                r.vel[k].signum(),
                rec.payload_mass * (r.acc[k] - gravity),
            ]);
            y.push(r.input[k]);
        }
    }
    ls_solve(&RegressionProblem::from_rows(&["P1", "P2", "P3", "P4"], &rows, &y)?)
}
