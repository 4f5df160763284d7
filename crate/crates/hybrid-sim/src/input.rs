//! Time-varying input signals.

use crane_core::{Axis, InputVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Waveform driving one axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Waveform {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    /// `offset + amplitude * sin(2 pi frequency t + phase)`
    Sine {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `offset + rate * max(0, t - start)`
    Ramp {
        #[serde(default)]
        offset: f64,
        rate: f64,
        #[serde(default)]
        start: f64,
    },
    /// Odd-harmonic "rounded square" `amplitude * (sin θ + sin 3θ / 3) / PEAK`
    /// with `θ = 2 pi t / period + phase`, normalised to peak `amplitude`.
    Square {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Zero-order hold of uniformly sampled values. Holds the last value
    /// after the table ends and the first before it starts.
    Samples {
        #[serde(default)]
        t0: f64,
        dt: f64,
        values: Vec<f64>,
    },
}

/// Peak of `sin θ + sin 3θ / 3`, reached at `θ = pi/4`.
pub const SQUARE_PEAK: f64 = 0.942_809_041_582_063_4;

impl Waveform {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Waveform::Zero => 0.0,
            Waveform::Constant { value } => *value,
            Waveform::Sine {
                offset,
                amplitude,
                frequency,
                phase,
            } => offset + amplitude * (std::f64::consts::TAU * frequency * t + phase).sin(),
            Waveform::Ramp {
                offset,
                rate,
                start,
            } => offset + rate * (t - start).max(0.0),
            Waveform::Square {
                offset,
                amplitude,
                period,
                phase,
            } => {
                let th = std::f64::consts::TAU * t / period + phase;
                offset + amplitude * (th.sin() + (3.0 * th).sin() / 3.0) / SQUARE_PEAK
            }
            Waveform::Samples { t0, dt, values } => {
                if values.is_empty() {
                    return 0.0;
                }
                let k = ((t - t0) / dt).floor();
                let k = if k < 0.0 { 0 } else { (k as usize).min(values.len() - 1) };
                values[k]
            }
        }
    }

    /// First discontinuity of the waveform (or its derivative) strictly
    /// after `t`, if any.
    pub fn next_breakpoint(&self, t: f64) -> Option<f64> {
        match self {
            Waveform::Ramp { start, .. } if *start > t => Some(*start),
            Waveform::Samples { t0, dt, values } => {
                let end = t0 + dt * values.len().saturating_sub(1) as f64;
                if t < *t0 {
                    return Some(*t0);
                }
                if t >= end {
                    return None;
                }
                let mut k = ((t - t0) / dt).floor() + 1.0;
                // guard against round-off placing t exactly on a sample
                while t0 + k * dt <= t {
                    k += 1.0;
                }
                Some(t0 + k * dt)
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SimError::Config(m.to_string()));
        match self {
            Waveform::Sine { frequency, .. } if !(*frequency >= 0.0) => bad("sine frequency must be >= 0"),
            Waveform::Square { period, .. } if !(*period > 0.0) => bad("square period must be > 0"),
            Waveform::Samples { dt, .. } if !(*dt > 0.0) => bad("sample period must be > 0"),
            _ => Ok(()),
        }
    }
}

/// Input signal for all three axes. Values are saturated to the parameter
/// set's input limit by the simulator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSignal {
    #[serde(default)]
    pub x: Waveform,
    #[serde(default)]
    pub y: Waveform,
    #[serde(default)]
    pub rope: Waveform,
}

impl InputSignal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn on(axis: Axis, w: Waveform) -> Self {
        let mut s = Self::default();
        *s.get_mut(axis) = w;
        s
    }

    pub fn get(&self, axis: Axis) -> &Waveform {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Rope => &self.rope,
        }
    }

    pub fn get_mut(&mut self, axis: Axis) -> &mut Waveform {
        match axis {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
            Axis::Rope => &mut self.rope,
        }
    }

    pub fn at(&self, t: f64) -> InputVector {
        InputVector::new(self.x.eval(t), self.y.eval(t), self.rope.eval(t))
    }

    pub fn next_breakpoint(&self, t: f64) -> Option<f64> {
        Axis::ALL
            .iter()
            .filter_map(|&a| self.get(a).next_breakpoint(t))
            .reduce(f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        Axis::ALL.iter().try_for_each(|&a| self.get(a).validate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_peak_is_normalised() {
        let w = Waveform::Square {
            offset: 0.0,
            amplitude: 2.0,
            period: 4.0,
            phase: 0.0,
        };
        let peak = (0..4000)
            .map(|i| w.eval(i as f64 * 1e-3))
            .fold(0.0f64, |a, b| a.max(b.abs()));
        assert!((peak - 2.0).abs() < 1e-5);
    }

    #[test]
    fn samples_hold_and_breakpoints() {
        let w = Waveform::Samples {
            t0: 0.0,
            dt: 0.5,
            values: vec![1.0, 2.0, 3.0],
        };
        assert_eq!(w.eval(-1.0), 1.0);
        assert_eq!(w.eval(0.49), 1.0);
        assert_eq!(w.eval(0.5), 2.0);
        assert_eq!(w.eval(10.0), 3.0);
        assert_eq!(w.next_breakpoint(0.0), Some(0.5));
        assert_eq!(w.next_breakpoint(0.5), Some(1.0));
        assert_eq!(w.next_breakpoint(1.0), None);
    }

    #[test]
    fn ramp_starts_late() {
        let w = Waveform::Ramp {
            offset: 0.0,
            rate: 0.1,
            start: 1.0,
        };
        assert_eq!(w.eval(0.5), 0.0);
        assert!((w.eval(3.0) - 0.2).abs() < 1e-15);
        assert_eq!(w.next_breakpoint(0.0), Some(1.0));
        assert_eq!(w.next_breakpoint(1.0), None);
    }
}
