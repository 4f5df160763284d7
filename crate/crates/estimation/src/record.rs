use crane_core::Axis;
use serde::{Deserialize, Serialize};
use sigproc::SampledSignal;

use crate::error::{EstError, Result};

/// What an experiment record was taken for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RecordKind {
    QuasistaticRamp,
    RichMotion,
    LoadedRope,
    FreeSwing,
    BreakawayAt,
}

/// Encoder resolution of each position channel; zero means unquantised.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Quanta {
    pub x: f64,
    pub y: f64,
    pub rope: f64,
    pub angle: f64,
}

impl Quanta {
    pub fn axis(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Rope => self.rope,
        }
    }
}

/// One uniformly sampled experiment: encoder positions and applied inputs.
/// Velocities are not part of a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub kind: RecordKind,
    /// Axis driven by a ramp, if the record is a ramp test.
    #[serde(default)]
    pub axis: Option<Axis>,
    /// Ramp direction for ramp tests: +1 or -1.
    #[serde(default)]
    pub direction: Option<i8>,
    pub payload_mass: f64,
    pub t0: f64,
    pub dt: f64,
    pub x_t: Vec<f64>,
    pub y_t: Vec<f64>,
    #[serde(rename = "L")]
    pub l: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub u_x: Vec<f64>,
    pub u_y: Vec<f64>,
    pub u_l: Vec<f64>,
    #[serde(default)]
    pub quanta: Quanta,
}

impl MeasurementRecord {
    pub fn len(&self) -> usize {
        self.x_t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_t.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn position(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.x_t,
            Axis::Y => &self.y_t,
            Axis::Rope => &self.l,
        }
    }

    pub fn input(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.u_x,
            Axis::Y => &self.u_y,
            Axis::Rope => &self.u_l,
        }
    }

    pub fn signal(&self, values: &[f64]) -> Result<SampledSignal> {
        Ok(SampledSignal::new(self.t0, self.dt, values.to_vec())?)
    }

    /// Samples `range` of every channel.
    pub fn slice(&self, range: std::ops::Range<usize>) -> MeasurementRecord {
        let cut = |v: &Vec<f64>| v[range.clone()].to_vec();
        MeasurementRecord {
            t0: self.time(range.start),
            x_t: cut(&self.x_t),
            y_t: cut(&self.y_t),
            l: cut(&self.l),
            alpha: cut(&self.alpha),
            beta: cut(&self.beta),
            u_x: cut(&self.u_x),
            u_y: cut(&self.u_y),
            u_l: cut(&self.u_l),
            ..self.clone()
        }
    }

    /// Every channel has the same length and the sample period is positive.
    pub fn check(&self) -> Result<()> {
        let n = self.len();
        let lens = [
            self.y_t.len(),
            self.l.len(),
            self.alpha.len(),
            self.beta.len(),
            self.u_x.len(),
            self.u_y.len(),
            self.u_l.len(),
        ];
        if lens.iter().any(|&m| m != n) {
            return Err(EstError::Precondition(format!(
                "record channels have different lengths ({n} and {lens:?})"
            )));
        }
        if !(self.dt > 0.0) {
            return Err(EstError::Precondition(format!("sample period {} is not positive", self.dt)));
        }
        Ok(())
    }
}
