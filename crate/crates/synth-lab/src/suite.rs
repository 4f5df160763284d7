//! The complete set of experiments needed by the identification pipeline.

use crane_core::{Axis, CraneParams};
use estimation::{active_sampling, ActiveConfig, MeasurementRecord, StopReason};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::lab::{peak_excursion, run_experiment, simulate, Experiment, ExperimentSpec, LabConfig};
use crate::oracle::{breakaway_ramp, OracleConfig, OracleMode, SimOracle};

/// Largest amplitude (bisection over `[lo, hi]`) whose run keeps `axis`
/// within `fraction` of its half range around the centre.
pub fn tune_amplitude(
    make: impl Fn(f64) -> ExperimentSpec,
    axis: Axis,
    params: &CraneParams,
    lab: &LabConfig,
    (lo, hi): (f64, f64),
    fraction: f64,
) -> Result<f64> {
    let target = fraction * 0.5 * params.limits(axis).span();
    let fits = |a: f64| -> Result<bool> {
        let spec = make(a);
        let mut p = params.clone();
        p.payload_mass = spec.payload_mass;
        let traj = simulate(&spec, params, lab)?;
        Ok(peak_excursion(&traj, axis, &p) <= target)
    };
    if fits(hi)? {
        return Ok(hi);
    }
    if !fits(lo)? {
        return Err(LabError::Invalid(format!(
            "even {lo:.3} V drives {axis} beyond {target:.3} m from the centre"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..14 {
        let m = 0.5 * (a + b);
        if fits(m)? {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteSpec {
    pub lab: LabConfig,
    pub oracle: OracleConfig,
    pub active: ActiveConfig,
    /// Payloads of the loaded hoist runs [kg].
    pub rope_masses: Vec<f64>,
    /// Period of the periodic excitation [s].
    pub period: f64,
    pub motion_duration: f64,
    /// Allowed peak excursion as a fraction of the half range.
    pub excursion: f64,
    /// `(alpha0 - pi/2, beta0)` of each free-swing run [rad].
    pub swings: Vec<(f64, f64)>,
    pub swing_length: f64,
    pub swing_mass: f64,
    pub swing_duration: f64,
    pub seed: u64,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            lab: LabConfig::default(),
            oracle: OracleConfig {
                mode: OracleMode::Encoder,
                ..OracleConfig::default()
            },
            active: ActiveConfig {
                std_threshold: 0.002,
                ..ActiveConfig::default()
            },
            rope_masses: vec![0.173, 0.325, 0.457, 0.550],
            period: 8.0,
            motion_duration: 32.0,
            excursion: 0.8,
            swings: vec![(0.3, 0.2), (0.25, -0.25), (0.2, 0.3)],
            swing_length: 0.45,
            swing_mass: 0.457,
            swing_duration: 60.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedRecord {
    pub name: String,
    pub spec: Option<ExperimentSpec>,
    pub record: MeasurementRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub records: Vec<NamedRecord>,
    pub active_stop: StopReason,
    pub active_points: usize,
}

fn motion_spec(axes: Vec<Axis>, amplitudes: Vec<f64>, period: f64, duration: f64, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        experiment: Experiment::RichMotion { axes, amplitudes, period },
        payload_mass: 0.0,
        duration,
        seed,
    }
}

fn loaded_spec(mass: f64, amplitude: f64, period: f64, duration: f64, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        experiment: Experiment::LoadedRope { amplitude, period },
        payload_mass: mass,
        duration,
        seed,
    }
}

/// Run every experiment of the identification procedure.
pub fn generate_suite(spec: &SuiteSpec, params: &CraneParams) -> Result<Suite> {
    params.validate().map_err(hybrid_sim::SimError::from)?;
    let lab = &spec.lab;
    let seed = spec.seed;
    let u_max = 0.95 * params.input_limit.unwrap_or(12.0);
    let mut out = Vec::new();
    let mut push = |name: String, spec: Option<ExperimentSpec>, record: MeasurementRecord| {
        log::info!("recorded {name} ({} samples)", record.len());
        out.push(NamedRecord { name, spec, record });
    };

    // hoist breakaway, both directions
    let oracle_cfg = OracleConfig { seed, ..spec.oracle };
    for (dir, tag) in [(1i8, "pos"), (-1, "neg")] {
        let (_, rec) = breakaway_ramp(params, lab, &oracle_cfg, 0.0, 0.0, Axis::Rope, dir)?;
        push(format!("rope_ramp_{tag}"), None, rec);
    }

    // hoist without payload
    let nl = params.to_newtons();
    let rope_floor = 1.2 * nl.rope.coulomb / nl.rope.gain;
    let period = spec.period;
    let dur = spec.motion_duration;
    let a = tune_amplitude(
        |a| motion_spec(vec![Axis::Rope], vec![a], period, dur, seed),
        Axis::Rope,
        params,
        lab,
        (rope_floor, u_max),
        spec.excursion,
    )?;
    let s = motion_spec(vec![Axis::Rope], vec![a], period, dur, seed);
    push("rope_no_load".into(), Some(s.clone()), run_experiment(&s, params, lab)?);

    // hoist with payloads
    for (i, &m) in spec.rope_masses.iter().enumerate() {
        let s_seed = seed.wrapping_add(1 + i as u64);
        let offset = m * params.gravity / params.rope.gain;
        let a = tune_amplitude(
            |a| loaded_spec(m, a, period, dur, s_seed),
            Axis::Rope,
            params,
            lab,
            (rope_floor, u_max - offset),
            spec.excursion,
        )?;
        let s = loaded_spec(m, a, period, dur, s_seed);
        push(format!("rope_loaded_{m:.3}"), Some(s.clone()), run_experiment(&s, params, lab)?);
    }

    // trolley axes without payload; they are independent, so each is tuned
    // on its own
    let mut amps = Vec::new();
    for axis in [Axis::X, Axis::Y] {
        let lin = nl.linear(axis).expect("trolley axis");
        let lim = lin.limits;
        let top = [lin.coulomb_pos, lin.coulomb_neg]
            .iter()
            .map(|p| -p.scaled(-1.0).min_on(lim.min, lim.max, 201))
            .fold(0.0, f64::max);
        let floor = 1.2 * top / lin.gain;
        amps.push(tune_amplitude(
            |a| motion_spec(vec![axis], vec![a], period, dur, seed),
            axis,
            params,
            lab,
            (floor, u_max),
            spec.excursion,
        )?);
    }
    let s = motion_spec(vec![Axis::X, Axis::Y], amps, period, dur, seed.wrapping_add(10));
    push("axes_motion".into(), Some(s.clone()), run_experiment(&s, params, lab)?);

    for (i, &(da, b)) in spec.swings.iter().enumerate() {
        let s = ExperimentSpec {
            experiment: Experiment::FreeSwing {
                alpha0: std::f64::consts::FRAC_PI_2 + da,
                beta0: b,
                length: spec.swing_length,
            },
            payload_mass: spec.swing_mass,
            duration: spec.swing_duration,
            seed: seed.wrapping_add(20 + i as u64),
        };
        push(format!("free_swing_{}", i + 1), Some(s.clone()), run_experiment(&s, params, lab)?);
    }

    // friction maps by active sampling; the slow-ramp records are kept
    let active = ActiveConfig { seed, ..spec.active };
    let mut oracle = SimOracle::new(params, lab, OracleConfig { mode: OracleMode::Encoder, ..oracle_cfg }).keeping_records();
    let res = active_sampling(&mut oracle, &active)?;
    for (i, rec) in oracle.records.drain(..).enumerate() {
        let axis = rec.axis.expect("breakaway records name their axis");
        let dir = if rec.direction == Some(1) { "pos" } else { "neg" };
        push(format!("breakaway_{:03}_{}_{dir}", i / 4, axis), None, rec);
    }
    Ok(Suite {
        records: out,
        active_stop: res.stop,
        active_points: res.samples.len(),
    })
}
