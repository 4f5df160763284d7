//! Breakaway voltage from slow ramp tests.

use crane_core::Axis;
use serde::{Deserialize, Serialize};

use crate::error::{EstError, Result};
use crate::record::MeasurementRecord;

/// Breakaway voltage measured at one position in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakawaySample {
    pub axis: Axis,
    pub position: f64,
    /// +1 or -1.
    pub direction: i8,
    /// Magnitude of the voltage at which motion began [V].
    pub voltage: f64,
}

/// Encoder quanta the position must move before motion is declared.
pub const DETECTION_QUANTA: f64 = 2.0;
/// Detection threshold used for unquantised records [m].
pub const EXACT_DETECTION: f64 = 1e-12;

/// Index of the first sample whose position differs from the starting
/// reading by more than the detection threshold.
pub fn first_motion(record: &MeasurementRecord, axis: Axis) -> Result<usize> {
    record.check()?;
    let pos = record.position(axis);
    if pos.is_empty() {
        return Err(EstError::Precondition("empty ramp record".into()));
    }
    let q = record.quanta.axis(axis);
    let threshold = if q > 0.0 { DETECTION_QUANTA * q } else { EXACT_DETECTION };
    let p0 = pos[0];
    pos.iter().position(|p| (p - p0).abs() > threshold).ok_or_else(|| {
        let peak = record.input(axis).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        EstError::NoMotion(format!("{axis} did not move during the ramp (peak input {peak:.3} V)"))
    })
}

/// Ramp voltage at the first detected motion.
pub fn estimate_breakaway(record: &MeasurementRecord, axis: Axis) -> Result<BreakawaySample> {
    let k = first_motion(record, axis)?;
    let pos = record.position(axis);
    let direction = if pos[k] > pos[0] { 1 } else { -1 };
    Ok(BreakawaySample {
        axis,
        position: pos[0],
        direction,
        voltage: record.input(axis)[k].abs(),
    })
}

/// Average breakaway magnitude over repeated ramp trials.
pub fn mean_breakaway(records: &[MeasurementRecord], axis: Axis) -> Result<f64> {
    if records.is_empty() {
        return Err(EstError::Precondition("no ramp records".into()));
    }
    let mut sum = 0.0;
    for r in records {
        sum += estimate_breakaway(r, axis)?.voltage;
    }
    Ok(sum / records.len() as f64)
}
