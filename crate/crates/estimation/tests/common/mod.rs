#![allow(dead_code)]

use estimation::{MeasurementRecord, Quanta, RecordKind};

pub const DT: f64 = 0.002;

/// Record with every channel zero except those set afterwards.
pub fn blank(kind: RecordKind, n: usize) -> MeasurementRecord {
    MeasurementRecord {
        kind,
        axis: None,
        direction: None,
        payload_mass: 0.0,
        t0: 0.0,
        dt: DT,
        x_t: vec![0.25; n],
        y_t: vec![0.25; n],
        l: vec![0.4; n],
        alpha: vec![std::f64::consts::FRAC_PI_2; n],
        beta: vec![0.0; n],
        u_x: vec![0.0; n],
        u_y: vec![0.0; n],
        u_l: vec![0.0; n],
        quanta: Quanta::default(),
    }
}

pub fn times(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * DT).collect()
}
