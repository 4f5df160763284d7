//! Running one experiment on the simulated crane.

use crane_core::{Axis, CraneParams, CraneState};
use estimation::{MeasurementRecord, Quanta, RecordKind};
use hybrid_sim::{integrate, InputSignal, SimConfig, Trajectory, Waveform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sigproc::{encoder_quantum, quantize};

use crate::error::{LabError, Result};

/// Data acquisition and simulation settings shared by all experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LabConfig {
    /// Sample period [s].
    pub dt: f64,
    /// Encoder pulses per revolution.
    pub pulses: u32,
    /// Quantise positions to encoder resolution.
    pub quantize: bool,
    /// Std of Gaussian noise added to the logged inputs [V].
    pub input_noise: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            dt: sigproc::DEFAULT_DT,
            pulses: 4096,
            quantize: true,
            input_noise: 0.0,
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            max_step: 0.01,
        }
    }
}

impl LabConfig {
    /// Encoder resolution per channel; zero when quantisation is off.
    pub fn quanta(&self, params: &CraneParams) -> Quanta {
        if !self.quantize {
            return Quanta::default();
        }
        Quanta {
            x: encoder_quantum(self.pulses, params.radius_x),
            y: encoder_quantum(self.pulses, params.radius_y),
            rope: encoder_quantum(self.pulses, params.radius_rope),
            angle: encoder_quantum(self.pulses, 1.0),
        }
    }

    pub fn sim_config(&self, t_end: f64, locked: Vec<Axis>) -> SimConfig {
        SimConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            t_end,
            output_dt: self.dt,
            locked_axes: locked,
            ..SimConfig::default()
        }
    }
}

/// What to do on the crane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE", deny_unknown_fields)]
pub enum Experiment {
    /// Slow voltage ramp on one axis, the others held, starting at the
    /// centre of the travel range.
    QuasistaticRamp {
        axis: Axis,
        direction: i8,
        rate: f64,
        #[serde(default)]
        offset: f64,
    },
    /// Periodic excitation of the listed axes, the others held.
    RichMotion {
        axes: Vec<Axis>,
        /// Per listed axis [V].
        amplitudes: Vec<f64>,
        period: f64,
    },
    /// Hoist excitation with the trolleys held; the input is offset by the
    /// voltage that balances the payload weight.
    LoadedRope { amplitude: f64, period: f64 },
    /// Payload released from rest with everything else held.
    FreeSwing {
        alpha0: f64,
        beta0: f64,
        length: f64,
    },
    /// Ramp on one trolley axis at a given position.
    BreakawayAt {
        x: f64,
        y: f64,
        axis: Axis,
        direction: i8,
        rate: f64,
        #[serde(default)]
        offset: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub payload_mass: f64,
    pub duration: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) {
            return Err(LabError::Invalid(format!("duration must be positive, got {}", self.duration)));
        }
        if !(self.payload_mass >= 0.0) {
            return Err(LabError::Invalid(format!("payload mass must be >= 0, got {}", self.payload_mass)));
        }
        match &self.experiment {
            Experiment::QuasistaticRamp { direction, rate, .. } | Experiment::BreakawayAt { direction, rate, .. } => {
                if direction.abs() != 1 || !(*rate > 0.0) {
                    return Err(LabError::Invalid("ramp needs direction +-1 and a positive rate".into()));
                }
            }
            Experiment::RichMotion { axes, amplitudes, period } => {
                if axes.is_empty() || axes.len() != amplitudes.len() || !(*period > 0.0) {
                    return Err(LabError::Invalid("rich motion needs one amplitude per axis and a positive period".into()));
                }
            }
            Experiment::LoadedRope { period, .. } => {
                if !(self.payload_mass > 0.0) || !(*period > 0.0) {
                    return Err(LabError::Invalid("loaded rope needs a payload and a positive period".into()));
                }
            }
            Experiment::FreeSwing { length, .. } => {
                if !(self.payload_mass > 0.0) || !(*length > 0.0) {
                    return Err(LabError::Invalid("free swing needs a payload and a rope length".into()));
                }
            }
        }
        Ok(())
    }
}

fn centre(params: &CraneParams, axis: Axis) -> f64 {
    params.limits(axis).center()
}

fn others(axes: &[Axis]) -> Vec<Axis> {
    Axis::ALL.into_iter().filter(|a| !axes.contains(a)).collect()
}

/// Initial state, input and held axes of an experiment.
pub fn setup(spec: &ExperimentSpec, params: &CraneParams) -> (CraneState, InputSignal, Vec<Axis>) {
    let mid = |a| centre(params, a);
    let home = CraneState::hanging(mid(Axis::X), mid(Axis::Y), mid(Axis::Rope));
    match &spec.experiment {
        Experiment::QuasistaticRamp { axis, direction, rate, offset } => {
            let d = *direction as f64;
            let w = Waveform::Ramp { offset: d * offset, rate: d * rate, start: 0.0 };
            (home, InputSignal::on(*axis, w), others(&[*axis]))
        }
        Experiment::RichMotion { axes, amplitudes, period } => {
            let mut input = InputSignal::zero();
            for (&a, &amp) in axes.iter().zip(amplitudes) {
                *input.get_mut(a) = Waveform::Square { offset: 0.0, amplitude: amp, period: *period, phase: 0.0 };
            }
            (home, input, others(axes))
        }
        Experiment::LoadedRope { amplitude, period } => {
            let offset = -spec.payload_mass * params.gravity / params.rope.gain;
            let w = Waveform::Square { offset, amplitude: *amplitude, period: *period, phase: 0.0 };
            (home, InputSignal::on(Axis::Rope, w), vec![Axis::X, Axis::Y])
        }
        Experiment::FreeSwing { alpha0, beta0, length } => {
            let mut s = CraneState::hanging(mid(Axis::X), mid(Axis::Y), *length);
            s.alpha = *alpha0;
            s.beta = *beta0;
            (s, InputSignal::zero(), Axis::ALL.to_vec())
        }
        Experiment::BreakawayAt { x, y, axis, direction, rate, offset } => {
            let d = *direction as f64;
            let w = Waveform::Ramp { offset: d * offset, rate: d * rate, start: 0.0 };
            let s = CraneState::hanging(*x, *y, mid(Axis::Rope));
            (s, InputSignal::on(*axis, w), others(&[*axis]))
        }
    }
}

/// Simulate an experiment without turning it into a record.
pub fn simulate(spec: &ExperimentSpec, params: &CraneParams, lab: &LabConfig) -> Result<Trajectory> {
    spec.validate()?;
    let mut p = params.clone();
    p.payload_mass = spec.payload_mass;
    let (initial, input, locked) = setup(spec, &p);
    Ok(integrate(&initial, &input, &p, &lab.sim_config(spec.duration, locked))?)
}

fn kind_of(e: &Experiment) -> (RecordKind, Option<Axis>, Option<i8>) {
    match e {
        Experiment::QuasistaticRamp { axis, direction, .. } => (RecordKind::QuasistaticRamp, Some(*axis), Some(*direction)),
        Experiment::RichMotion { axes, .. } => {
            let axis = if axes.len() == 1 { Some(axes[0]) } else { None };
            (RecordKind::RichMotion, axis, None)
        }
        Experiment::LoadedRope { .. } => (RecordKind::LoadedRope, Some(Axis::Rope), None),
        Experiment::FreeSwing { .. } => (RecordKind::FreeSwing, None, None),
        Experiment::BreakawayAt { axis, direction, .. } => (RecordKind::BreakawayAt, Some(*axis), Some(*direction)),
    }
}

/// Turn a trajectory into an encoder-grade record: grid samples only,
/// quantised positions, logged inputs, no velocities.
pub fn to_record(
    spec: &ExperimentSpec,
    traj: &Trajectory,
    params: &CraneParams,
    lab: &LabConfig,
) -> MeasurementRecord {
    let quanta = lab.quanta(params);
    let q = |v: f64, step: f64| if step > 0.0 { quantize(v, step) } else { v };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = (lab.input_noise > 0.0).then(|| Normal::new(0.0, lab.input_noise).expect("positive std"));
    let mut u = |v: f64| v + noise.as_ref().map_or(0.0, |n| n.sample(&mut rng));
    let (kind, axis, direction) = kind_of(&spec.experiment);
    let mut r = MeasurementRecord {
        kind,
        axis,
        direction,
        payload_mass: spec.payload_mass,
        t0: 0.0,
        dt: lab.dt,
        x_t: Vec::new(),
        y_t: Vec::new(),
        l: Vec::new(),
        alpha: Vec::new(),
        beta: Vec::new(),
        u_x: Vec::new(),
        u_y: Vec::new(),
        u_l: Vec::new(),
        quanta,
    };
    for s in traj.grid() {
        let st = &s.state;
        r.x_t.push(q(st.x_t, quanta.x));
        r.y_t.push(q(st.y_t, quanta.y));
        r.l.push(q(st.l, quanta.rope));
        r.alpha.push(q(st.alpha, quanta.angle));
        r.beta.push(q(st.beta, quanta.angle));
        r.u_x.push(u(s.input.u_x));
        r.u_y.push(u(s.input.u_y));
        r.u_l.push(u(s.input.u_l));
    }
    r
}

pub fn run_experiment(spec: &ExperimentSpec, params: &CraneParams, lab: &LabConfig) -> Result<MeasurementRecord> {
    let traj = simulate(spec, params, lab)?;
    Ok(to_record(spec, &traj, params, lab))
}

/// Largest distance of `axis` from the centre of its range over a run.
pub fn peak_excursion(traj: &Trajectory, axis: Axis, params: &CraneParams) -> f64 {
    let c = centre(params, axis);
    traj.samples
        .iter()
        .map(|s| (s.state.position(axis) - c).abs())
        .fold(0.0, f64::max)
}
