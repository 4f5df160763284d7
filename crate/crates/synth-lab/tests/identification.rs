use std::f64::consts::FRAC_PI_2;

use crane_core::{presets, Axis, CraneParams};
use estimation::{estimate_swing_damping, run_pipeline, PipelineConfig, Step, SWING_FILTER};
use synth_lab::{generate_suite, run_experiment, simulate, Experiment, ExperimentSpec, LabConfig, SuiteSpec};

const MASS: f64 = 0.457;
const LENGTH: f64 = 0.45;

fn swing(alpha: f64, beta: f64) -> ExperimentSpec {
    ExperimentSpec {
        experiment: Experiment::FreeSwing {
            alpha0: FRAC_PI_2 + alpha,
            beta0: beta,
            length: LENGTH,
        },
        payload_mass: MASS,
        duration: 60.0,
        seed: 0,
    }
}

/// Damping from the decay of successive swing peaks: a lightly damped
/// pendulum decays as `exp(-D t / (2 m L^2))`.
fn log_decrement(spec: &ExperimentSpec, params: &CraneParams, lab: &LabConfig) -> f64 {
    let traj = simulate(spec, params, lab).unwrap();
    let a: Vec<(f64, f64)> = traj.grid().map(|s| (s.t, s.state.alpha - FRAC_PI_2)).collect();
    let peaks: Vec<(f64, f64)> = a
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1 && w[1].1 > 0.0)
        .map(|w| (w[1].0, w[1].1.ln()))
        .collect();
    assert!(peaks.len() > 20);
    // least-squares slope of ln(peak) over time
    let n = peaks.len() as f64;
    let (mt, my) = peaks.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
    let num: f64 = peaks.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let den: f64 = peaks.iter().map(|p| (p.0 - mt).powi(2)).sum();
    -2.0 * MASS * LENGTH * LENGTH * num / den
}

#[test]
fn swing_damping_matches_log_decrement() {
    let params = presets::table3();
    let lab = LabConfig {
        quantize: false,
        ..Default::default()
    };
    let spec = swing(0.1, 0.0);
    let oracle = log_decrement(&spec, &params, &lab);
    assert!((oracle / params.damping_alpha - 1.0).abs() < 0.05, "{oracle}");
    let rec = run_experiment(&spec, &params, &lab).unwrap();
    let est = estimate_swing_damping(&[rec], params.gravity, &SWING_FILTER, 0.5).unwrap();
    assert!((est.damping_alpha / oracle - 1.0).abs() < 0.1, "{} vs {oracle}", est.damping_alpha);
    assert_eq!(est.damping_beta, None);
}

#[test]
fn undamped_swing_estimates_zero() {
    let mut params = presets::table3();
    params.damping_alpha = 0.0;
    params.damping_beta = 0.0;
    let lab = LabConfig {
        quantize: false,
        ..Default::default()
    };
    let recs: Vec<_> = [(0.3, 0.2), (0.2, -0.3)]
        .iter()
        .map(|&(a, b)| run_experiment(&swing(a, b), &params, &lab).unwrap())
        .collect();
    let est = estimate_swing_damping(&recs, params.gravity, &SWING_FILTER, 0.5).unwrap();
    assert!(est.damping_alpha.abs() < 1e-5, "{}", est.damping_alpha);
    assert!(est.damping_beta.unwrap().abs() < 1e-4, "{:?}", est.damping_beta);
}

#[test]
fn swing_needs_a_held_trolley() {
    let params = presets::table3();
    let lab = LabConfig::default();
    let spec = ExperimentSpec {
        experiment: Experiment::RichMotion {
            axes: vec![Axis::X],
            amplitudes: vec![6.0],
            period: 4.0,
        },
        payload_mass: MASS,
        duration: 8.0,
        seed: 0,
    };
    let mut rec = run_experiment(&spec, &params, &lab).unwrap();
    rec.kind = estimation::RecordKind::FreeSwing;
    assert!(estimate_swing_damping(&[rec], params.gravity, &SWING_FILTER, 0.5).is_err());
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn quantised_suite_identifies_the_crane() {
    let truth = presets::table3();
    let suite = generate_suite(&SuiteSpec::default(), &truth).unwrap();
    let records: Vec<_> = suite.records.iter().map(|r| r.record.clone()).collect();
    let est = run_pipeline(&records, &truth, &Step::ALL, &PipelineConfig::default()).unwrap();
    assert!(est.complete());
    let rope = est.rope.as_ref().unwrap();
    let k = truth.rope.gain;
    let want = [truth.rope.inertia / k, truth.rope.viscous / k, truth.rope.coulomb / k, 1.0 / k];
    for (got, want) in [rope.p1, rope.p2, rope.p3, rope.p4].into_iter().zip(want) {
        assert!(rel(got, want) < 0.05, "{got} vs {want}");
    }
    for axis in [Axis::X, Axis::Y] {
        let lin = truth.linear(axis).unwrap();
        let e = if axis == Axis::X { est.x.as_ref() } else { est.y.as_ref() }.unwrap();
        assert!(rel(e.inertia_coeff, truth.axis_inertia(axis) / lin.gain) < 0.05);
        assert!(rel(e.p7_pos, lin.viscous_pos / lin.gain) < 0.05);
        assert!(rel(e.p7_neg, lin.viscous_neg / lin.gain) < 0.05);
        let maps = est.maps.as_ref().unwrap().axis(axis);
        let xs = estimation::grid(lin.limits.min, lin.limits.max, 101);
        for (got, want) in [(maps.pos, lin.coulomb_pos), (maps.neg, lin.coulomb_neg)] {
            let vals: Vec<f64> = xs.iter().map(|&x| want.eval(x)).collect();
            let range = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
            let worst = xs.iter().zip(&vals).map(|(&x, v)| (got.eval(x) - v).abs()).fold(0.0, f64::max);
            assert!(worst < 0.05 * range, "{axis}: {worst} over range {range}");
        }
    }
    let fitted = est.apply(&truth);
    assert_eq!(fitted.coulomb_units, crane_core::CoulombUnits::Volts);
    assert!(rel(fitted.damping_alpha, truth.damping_alpha) < 0.1);
    assert!(rel(fitted.damping_beta, truth.damping_beta) < 0.1);
}
