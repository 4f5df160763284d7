use serde::{Deserialize, Serialize};

use crate::{Result, SigError};

/// Uniformly sampled series. Non-finite values mark invalid samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SigError::InvalidArgument(format!("sample period must be positive, got {dt}")));
        }
        Ok(SampledSignal { t0, dt, values })
    }

    /// Sample `f` at `n` points starting at `t0`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(t0, dt, (0..n).map(|k| f(t0 + k as f64 * dt)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    pub fn is_valid(&self, k: usize) -> bool {
        self.values[k].is_finite()
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        SampledSignal {
            t0: self.t0,
            dt: self.dt,
            values,
        }
    }
}
