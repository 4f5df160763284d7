use crane_core::{Axis, CraneState, InputVector, ModeVector};
use serde::{Deserialize, Serialize};

use crate::config::Model;
use crate::events::GuardEvent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: CraneState,
    /// Automaton mode after any transitions at `t`. For the tanh model this
    /// is the mode implied by the velocity signs.
    pub mode: ModeVector,
    /// Saturated input applied at `t`.
    pub input: InputVector,
    /// Sample lies on the uniform output grid.
    pub on_grid: bool,
    /// At least one transition happened at `t`.
    pub event: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
    /// Vector-field evaluations that hit the `sin(alpha) = 0` singularity.
    pub singular_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub model: Model,
    pub samples: Vec<Sample>,
    pub events: Vec<GuardEvent>,
    pub stats: SimStats,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn grid(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.on_grid)
    }

    /// Velocity of `axis` on the output grid.
    pub fn grid_velocity(&self, axis: Axis) -> Vec<f64> {
        self.grid().map(|s| s.state.velocity(axis)).collect()
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory is never empty")
    }

    /// Maximal runs of consecutive samples in which `axis` has exactly zero
    /// velocity and a bit-identical position. Returned as `(start, end)`.
    pub fn plateaus(&self, axis: Axis) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start: Option<(f64, f64)> = None;
        let mut last_t = 0.0;
        for s in &self.samples {
            let (p, v) = (s.state.position(axis), s.state.velocity(axis));
            match start {
                Some((_, p0)) if v == 0.0 && p.to_bits() == p0.to_bits() => {}
                _ => {
                    if let Some((t0, _)) = start.take() {
                        if last_t > t0 {
                            out.push((t0, last_t));
                        }
                    }
                    if v == 0.0 {
                        start = Some((s.t, p));
                    }
                }
            }
            last_t = s.t;
        }
        if let Some((t0, _)) = start {
            if last_t > t0 {
                out.push((t0, last_t));
            }
        }
        out
    }

    /// Longest interval over which `|v| < threshold` holds at every sample.
    pub fn longest_slow_interval(&self, axis: Axis, threshold: f64) -> f64 {
        let mut best = 0.0f64;
        let mut start: Option<f64> = None;
        for s in &self.samples {
            if s.state.velocity(axis).abs() < threshold {
                let t0 = *start.get_or_insert(s.t);
                best = best.max(s.t - t0);
            } else {
                start = None;
            }
        }
        best
    }
}

/// Root-mean-square difference of two equally long series.
pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "series lengths differ");
    if a.is_empty() {
        return 0.0;
    }
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (s / a.len() as f64).sqrt()
}
