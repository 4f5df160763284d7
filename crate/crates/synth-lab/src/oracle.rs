//! Breakaway measurements on the simulated crane.

use crane_core::{Axis, CraneParams};
use estimation::{first_motion, BreakawayOracle, EstError, FrictionComponents, MeasurementRecord};
use hybrid_sim::EventKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::lab::{run_experiment, simulate, Experiment, ExperimentSpec, LabConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Read the ramp voltage at the simulator's breakaway event.
    Event,
    /// Detect motion in the encoder record of a coarse ramp followed by a
    /// slow one started just below the coarse estimate.
    Encoder,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub mode: OracleMode,
    /// Std of Gaussian noise added to each returned voltage [V].
    pub noise_std: f64,
    /// Ramp rate of event-mode measurements [V/s].
    pub event_rate: f64,
    pub coarse_rate: f64,
    pub fine_rate: f64,
    /// The slow ramp starts this far below the coarse estimate [V].
    pub fine_backoff: f64,
    /// Commanded positions are kept this far inside the limits [m].
    pub margin: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mode: OracleMode::Event,
            noise_std: 0.0,
            event_rate: 1.0,
            coarse_rate: 0.5,
            fine_rate: 0.002,
            fine_backoff: 0.2,
            margin: 1e-3,
            seed: 0,
        }
    }
}

fn max_input(params: &CraneParams) -> f64 {
    params.input_limit.unwrap_or(12.0)
}

fn ramp_spec(x: f64, y: f64, axis: Axis, direction: i8, rate: f64, offset: f64, duration: f64) -> ExperimentSpec {
    let experiment = if axis == Axis::Rope {
        Experiment::QuasistaticRamp { axis, direction, rate, offset }
    } else {
        Experiment::BreakawayAt { x, y, axis, direction, rate, offset }
    };
    ExperimentSpec {
        experiment,
        payload_mass: 0.0,
        duration,
        seed: 0,
    }
}

/// Breakaway magnitude read at the simulator's event: the exact ramp value
/// at which the resting axis starts to move.
pub fn breakaway_event(
    params: &CraneParams,
    lab: &LabConfig,
    x: f64,
    y: f64,
    axis: Axis,
    direction: i8,
    rate: f64,
) -> Result<f64> {
    let spec = ramp_spec(x, y, axis, direction, rate, 0.0, max_input(params) / rate);
    let mut sim_lab = lab.clone();
    // only the events are needed
    sim_lab.dt = sim_lab.dt.max(0.05);
    let traj = simulate(&spec, params, &sim_lab)?;
    let want = if direction > 0 { EventKind::BreakawayPos } else { EventKind::BreakawayNeg };
    traj.events
        .iter()
        .find(|e| e.axis == axis && e.kind == want)
        .map(|e| rate * e.time)
        .ok_or_else(|| {
            LabError::Estimation(EstError::NoMotion(format!(
                "{axis} did not break away in direction {direction} at ({x:.4}, {y:.4})"
            )))
        })
}

/// Coarse-then-fine ramp measured through the encoders. Returns the
/// breakaway magnitude and the slow-ramp record trimmed to the samples
/// around the detected motion.
pub fn breakaway_ramp(
    params: &CraneParams,
    lab: &LabConfig,
    cfg: &OracleConfig,
    x: f64,
    y: f64,
    axis: Axis,
    direction: i8,
) -> Result<(f64, MeasurementRecord)> {
    let coarse_spec = ramp_spec(x, y, axis, direction, cfg.coarse_rate, 0.0, max_input(params) / cfg.coarse_rate);
    let coarse = run_experiment(&coarse_spec, params, lab)?;
    let kc = first_motion(&coarse, axis)?;
    let uc = coarse.input(axis)[kc].abs();
    let offset = (uc - cfg.fine_backoff).max(0.0);
    let duration = (uc + 0.05 - offset) / cfg.fine_rate + 3.0;
    let fine_spec = ramp_spec(x, y, axis, direction, cfg.fine_rate, offset, duration);
    let fine = run_experiment(&fine_spec, params, lab)?;
    let k = first_motion(&fine, axis)?;
    if (k as f64) * fine.dt < 0.5 {
        return Err(LabError::Estimation(EstError::Oracle(format!(
            "slow ramp on {axis} started above the breakaway level ({offset:.3} V)"
        ))));
    }
    let u = fine.input(axis)[k].abs();
    let back = (3.0 / fine.dt) as usize;
    let ahead = (0.5 / fine.dt) as usize;
    let trimmed = fine.slice(k.saturating_sub(back)..(k + ahead).min(fine.len()));
    Ok((u, trimmed))
}

/// The measurement oracle of the active sampling loop.
pub struct SimOracle {
    pub params: CraneParams,
    pub lab: LabConfig,
    pub cfg: OracleConfig,
    rng: ChaCha8Rng,
    /// Encoder-mode slow-ramp records, when kept.
    pub records: Vec<MeasurementRecord>,
    pub keep_records: bool,
    pub calls: usize,
}

impl SimOracle {
    pub fn new(params: &CraneParams, lab: &LabConfig, cfg: OracleConfig) -> Self {
        SimOracle {
            params: params.clone(),
            lab: lab.clone(),
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            records: Vec::new(),
            keep_records: false,
            calls: 0,
        }
    }

    pub fn keeping_records(mut self) -> Self {
        self.keep_records = true;
        self
    }

    fn one(&mut self, x: f64, y: f64, axis: Axis, direction: i8) -> Result<f64> {
        let v = match self.cfg.mode {
            OracleMode::Event => breakaway_event(&self.params, &self.lab, x, y, axis, direction, self.cfg.event_rate)?,
            OracleMode::Encoder => {
                let (v, rec) = breakaway_ramp(&self.params, &self.lab, &self.cfg, x, y, axis, direction)?;
                if self.keep_records {
                    self.records.push(rec);
                }
                v
            }
        };
        let noise = if self.cfg.noise_std > 0.0 {
            Normal::new(0.0, self.cfg.noise_std).expect("positive std").sample(&mut self.rng)
        } else {
            0.0
        };
        Ok(v + noise)
    }

    /// Measure the four components at a commanded position.
    pub fn measure_all(&mut self, x: f64, y: f64) -> Result<FrictionComponents> {
        self.calls += 1;
        let m = self.cfg.margin;
        let x = self.params.x.limits.clamp(x).clamp(self.params.x.limits.min + m, self.params.x.limits.max - m);
        let y = self.params.y.limits.clamp(y).clamp(self.params.y.limits.min + m, self.params.y.limits.max - m);
        Ok(FrictionComponents {
            x_pos: self.one(x, y, Axis::X, 1)?,
            x_neg: self.one(x, y, Axis::X, -1)?,
            y_pos: self.one(x, y, Axis::Y, 1)?,
            y_neg: self.one(x, y, Axis::Y, -1)?,
        })
    }
}

impl BreakawayOracle for SimOracle {
    fn measure(&mut self, x: f64, y: f64) -> estimation::Result<FrictionComponents> {
        self.measure_all(x, y).map_err(|e| match e {
            LabError::Estimation(e) => e,
            other => EstError::Oracle(other.to_string()),
        })
    }
}

/// Four breakaway magnitudes at `(x, y)` with optional noise.
pub fn breakaway_oracle(x: f64, y: f64, params: &CraneParams, lab: &LabConfig, cfg: &OracleConfig) -> Result<FrictionComponents> {
    SimOracle::new(params, lab, *cfg).measure_all(x, y)
}
