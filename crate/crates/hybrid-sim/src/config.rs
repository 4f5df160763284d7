use crane_core::Axis;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Friction model used for the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Model {
    /// Exact stick-slip through the 27-mode automaton.
    #[default]
    Hybrid,
    /// Smooth friction with `sign(v)` replaced by `tanh(k v)`.
    Tanh { k: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Width of the bracket at which event bisection stops [s].
    pub event_time_tol: f64,
    pub max_step: f64,
    pub t_end: f64,
    pub output_dt: f64,
    pub model: Model,
    /// Axes held for the whole run regardless of the forces on them.
    pub locked_axes: Vec<Axis>,
    /// Transitions allowed per axis at one instant before declaring chatter.
    pub chatter_limit: usize,
    /// Velocity and limit guard samples per accepted step, including its end.
    pub guard_samples: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            event_time_tol: 1e-9,
            max_step: 0.01,
            t_end: 10.0,
            output_dt: 0.001,
            model: Model::Hybrid,
            locked_axes: Vec::new(),
            chatter_limit: 3,
            guard_samples: 4,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SimError::Config(m));
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("event_time_tol", self.event_time_tol),
            ("max_step", self.max_step),
            ("t_end", self.t_end),
            ("output_dt", self.output_dt),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if let Model::Tanh { k } = self.model {
            if !(k > 0.0) || !k.is_finite() {
                return bad(format!("tanh gain k must be positive, got {k}"));
            }
        }
        if self.chatter_limit == 0 {
            return bad("chatter_limit must be at least 1".into());
        }
        if self.guard_samples == 0 {
            return bad("guard_samples must be at least 1".into());
        }
        Ok(())
    }

    pub fn is_locked(&self, axis: Axis) -> bool {
        self.locked_axes.contains(&axis)
    }
}
