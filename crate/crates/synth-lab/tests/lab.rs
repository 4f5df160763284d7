use crane_core::{presets, Axis};
use estimation::{differentiate_unmasked, estimate_breakaway, MeasurementRecord, PreprocessConfig};
use synth_lab::{
    breakaway_event, breakaway_oracle, breakaway_ramp, run_experiment, simulate, Experiment, ExperimentSpec,
    LabConfig, OracleConfig, OracleMode,
};

fn rich(amplitude: f64, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        experiment: Experiment::RichMotion {
            axes: vec![Axis::X, Axis::Y],
            amplitudes: vec![amplitude, amplitude],
            period: 8.0,
        },
        payload_mass: 0.0,
        duration: 16.0,
        seed,
    }
}

fn rope_ramp(direction: i8) -> ExperimentSpec {
    ExperimentSpec {
        experiment: Experiment::QuasistaticRamp {
            axis: Axis::Rope,
            direction,
            rate: 0.5,
            offset: 0.0,
        },
        payload_mass: 0.0,
        duration: 4.0,
        seed: 0,
    }
}

#[test]
fn experiments_are_deterministic() {
    let params = presets::table3();
    let lab = LabConfig {
        input_noise: 0.01,
        ..Default::default()
    };
    let a = run_experiment(&rich(4.0, 3), &params, &lab).unwrap();
    let b = run_experiment(&rich(4.0, 3), &params, &lab).unwrap();
    assert_eq!(a, b);
    let c = run_experiment(&rich(4.0, 4), &params, &lab).unwrap();
    assert_eq!(a.x_t, c.x_t);
    assert_ne!(a.u_x, c.u_x);
}

#[test]
fn rope_ramp_breaks_away_at_the_hoist_friction_level() {
    let params = presets::table3();
    let want = params.rope.coulomb / params.rope.gain;
    assert!((want - 1.077).abs() < 1e-3);
    let lab = LabConfig {
        quantize: false,
        ..Default::default()
    };
    let step = 0.5 * lab.dt;
    for dir in [1, -1] {
        let rec = run_experiment(&rope_ramp(dir), &params, &lab).unwrap();
        let b = estimate_breakaway(&rec, Axis::Rope).unwrap();
        assert_eq!(b.direction, dir);
        assert!((b.voltage - want).abs() <= step, "{} vs {want}", b.voltage);
        let e = breakaway_event(&params, &lab, 0.0, 0.0, Axis::Rope, dir, 0.5).unwrap();
        assert!((e - want).abs() < 1e-6, "{e}");
    }
    // through the encoders the hoist must first move two counts, which
    // takes about 0.1 s of a 0.5 V/s ramp
    let rec = run_experiment(&rope_ramp(1), &params, &LabConfig::default()).unwrap();
    let b = estimate_breakaway(&rec, Axis::Rope).unwrap();
    assert!(b.voltage > want && b.voltage < want + 0.1, "{}", b.voltage);
}

#[test]
fn oracle_at_the_rail_end_reads_the_map_offsets() {
    let params = presets::table3();
    let lab = LabConfig::default();
    let c = breakaway_oracle(0.0, 0.0, &params, &lab, &OracleConfig::default()).unwrap();
    // the oracle keeps 1 mm clear of the limits
    let at = |p: &crane_core::Polynomial4| p.eval(1e-3);
    assert!((c.x_pos - at(&params.x.coulomb_pos)).abs() < 1e-5, "{c:?}");
    assert!((c.x_pos - 2.63).abs() < 1e-3);
    assert!((c.x_neg - at(&params.x.coulomb_neg)).abs() < 1e-5);
    assert!((c.y_pos - at(&params.y.coulomb_pos)).abs() < 1e-5);
    assert!((c.y_neg - at(&params.y.coulomb_neg)).abs() < 1e-5);
}

#[test]
fn encoder_oracle_agrees_with_event_oracle() {
    let params = presets::table3();
    let lab = LabConfig::default();
    let cfg = OracleConfig {
        mode: OracleMode::Encoder,
        ..Default::default()
    };
    for (axis, dir) in [(Axis::X, 1), (Axis::Y, -1)] {
        let exact = breakaway_event(&params, &lab, 0.2, 0.3, axis, dir, 1.0).unwrap();
        let (u, rec) = breakaway_ramp(&params, &lab, &cfg, 0.2, 0.3, axis, dir).unwrap();
        assert!(u >= exact && u - exact < 0.01, "{axis}: {u} vs {exact}");
        assert!(rec.len() <= 1750);
        assert_eq!(rec.direction, Some(dir));
    }
}

#[test]
fn positions_stay_within_limits() {
    let params = presets::table3();
    let lab = LabConfig::default();
    let traj = simulate(&rich(11.0, 0), &params, &lab).unwrap();
    for s in &traj.samples {
        for axis in Axis::ALL {
            let lim = params.limits(axis);
            let p = s.state.position(axis);
            assert!(p >= lim.min - 1e-12 && p <= lim.max + 1e-12, "{axis} at {p}");
        }
    }
}

#[test]
fn velocity_reconstruction_from_encoders() {
    let params = presets::table3();
    let lab = LabConfig::default();
    let spec = rich(5.0, 0);
    let traj = simulate(&spec, &params, &lab).unwrap();
    let rec = synth_lab::to_record(&spec, &traj, &params, &lab);
    let truth: Vec<_> = traj.grid().map(|s| s.state).collect();
    assert_eq!(truth.len(), rec.len());
    let cfg = PreprocessConfig::default();
    for (axis, pos) in [(Axis::X, &rec.x_t), (Axis::Y, &rec.y_t)] {
        let d = differentiate_unmasked(rec.t0, rec.dt, pos, &cfg.filter, cfg.edge).unwrap();
        let (mut sum, mut n) = (0.0, 0);
        for (k, s) in truth.iter().enumerate() {
            if d.mask[k] {
                sum += (d.velocity[k] - s.velocity(axis)).powi(2);
                n += 1;
            }
        }
        let rms = (sum / n as f64).sqrt();
        assert!(rms < 5e-3, "{axis}: {rms}");
    }
}

#[test]
fn specs_and_records_round_trip_through_json() {
    let spec = rich(3.0, 9);
    let text = serde_json::to_string(&spec).unwrap();
    assert!(text.contains("\"RICH_MOTION\""));
    assert_eq!(serde_json::from_str::<ExperimentSpec>(&text).unwrap(), spec);
    let rec = run_experiment(&rope_ramp(1), &presets::table3(), &LabConfig::default()).unwrap();
    let text = serde_json::to_string(&rec).unwrap();
    assert!(text.contains("\"L\""));
    assert_eq!(serde_json::from_str::<MeasurementRecord>(&text).unwrap(), rec);
}

#[test]
fn invalid_specs_are_rejected() {
    let params = presets::table3();
    let lab = LabConfig::default();
    let mut s = rope_ramp(1);
    s.duration = 0.0;
    assert!(run_experiment(&s, &params, &lab).is_err());
    let s = ExperimentSpec {
        experiment: Experiment::LoadedRope {
            amplitude: 1.0,
            period: 8.0,
        },
        payload_mass: 0.0,
        duration: 1.0,
        seed: 0,
    };
    assert!(run_experiment(&s, &params, &lab).is_err());
    let s = ExperimentSpec {
        experiment: Experiment::RichMotion {
            axes: vec![Axis::X],
            amplitudes: vec![],
            period: 8.0,
        },
        payload_mass: 0.0,
        duration: 1.0,
        seed: 0,
    };
    assert!(run_experiment(&s, &params, &lab).is_err());
}
