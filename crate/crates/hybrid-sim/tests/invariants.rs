use crane_core::{
    evaluate, mechanical_energy, presets, Axis, AxisLaws, AxisMode, CraneState, Polynomial4,
};
use hybrid_sim::{
    case1, case2, integrate, EventKind, InputSignal, Model, SimConfig, SimError, Trajectory,
    Waveform,
};
use proptest::prelude::*;

fn check_structure(tr: &Trajectory) {
    for w in tr.samples.windows(2) {
        assert!(w[1].t > w[0].t, "times not increasing at {}", w[0].t);
    }
    for w in tr.events.windows(2) {
        assert!(w[1].time >= w[0].time);
    }
    for e in &tr.events {
        assert_eq!(e.pre_mode.diff(&e.post_mode), vec![e.axis]);
    }
    // mode only changes at event samples; resting axes are bit-frozen
    for w in tr.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if !b.event {
            assert_eq!(a.mode, b.mode, "mode changed without an event at {}", b.t);
            for axis in Axis::ALL {
                if a.mode[axis] == AxisMode::Rest {
                    assert_eq!(a.state.position(axis).to_bits(), b.state.position(axis).to_bits());
                    assert_eq!(b.state.velocity(axis), 0.0);
                }
            }
        }
    }
    for s in &tr.samples {
        for axis in Axis::ALL {
            let v = s.state.velocity(axis);
            match s.mode[axis] {
                AxisMode::Pos => assert!(v > 0.0 || (v == 0.0 && s.event), "t={} v={v}", s.t),
                AxisMode::Neg => assert!(v < 0.0 || (v == 0.0 && s.event), "t={} v={v}", s.t),
                AxisMode::Rest => assert_eq!(v, 0.0),
            }
        }
    }
}

#[test]
fn case1_has_exact_plateaus_and_consistent_modes() {
    let sc = case1();
    let tr = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    check_structure(&tr);
    let longest = tr
        .plateaus(Axis::Y)
        .iter()
        .map(|(a, b)| b - a)
        .fold(0.0, f64::max);
    assert!(longest > 0.05, "longest plateau {longest}");
    // the rope is locked and nothing drives X
    assert!(tr.samples.iter().all(|s| s.state.x_t == 0.25 && s.state.l == 0.5));
}

#[test]
fn tanh_never_stops() {
    let mut sc = case1();
    sc.config.model = Model::Tanh { k: 1000.0 };
    let tr = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    assert!(tr.plateaus(Axis::Y).is_empty());
    assert!(tr.longest_slow_interval(Axis::Y, 1e-6) < 0.01);
    assert!(tr.events.is_empty());
}

#[test]
fn determinism() {
    let sc = case2();
    let a = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    let b = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rope_moves_only_above_threshold() {
    let sc = case2();
    let tr = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    check_structure(&tr);
    let c = sc.params.rope.coulomb;
    let mut breakaways = 0;
    for e in &tr.events {
        if matches!(e.kind, EventKind::BreakawayPos | EventKind::BreakawayNeg) {
            breakaways += 1;
            let s = tr.samples.iter().find(|s| s.t == e.time).unwrap();
            let t_rope = evaluate(&s.state, &s.input, &AxisLaws::modal(e.pre_mode), &sc.params)
                .unwrap()
                .net(Axis::Rope);
            assert!(t_rope.abs() > c, "breakaway at |t_rope| = {}", t_rope.abs());
            assert!(t_rope.abs() < c + 1e-6, "late breakaway at |t_rope| = {}", t_rope.abs());
        }
    }
    assert!(breakaways >= 10);
    let (lo, hi) = tr
        .samples
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), s| (a.min(s.state.l), b.max(s.state.l)));
    assert!(lo >= 0.13 && hi <= 0.57, "rope range [{lo}, {hi}]");
}

#[test]
fn frictionless_swing_conserves_energy() {
    let mut p = presets::case1();
    for ax in [&mut p.x, &mut p.y] {
        ax.coulomb_pos = Polynomial4::constant(0.0);
        ax.coulomb_neg = Polynomial4::constant(0.0);
    }
    let mut s0 = CraneState::hanging(0.25, 0.25, 0.4);
    s0.alpha = std::f64::consts::FRAC_PI_2 + 0.3;
    s0.beta = 0.2;
    let cfg = SimConfig {
        rel_tol: 1e-9,
        abs_tol: 1e-12,
        t_end: 10.0,
        output_dt: 0.01,
        locked_axes: vec![Axis::Rope],
        ..SimConfig::default()
    };
    let tr = integrate(&s0, &InputSignal::zero(), &p, &cfg).unwrap();
    let e0 = mechanical_energy(&tr.samples[0].state, &p);
    let drift = tr
        .samples
        .iter()
        .map(|s| ((mechanical_energy(&s.state, &p) - e0) / e0).abs())
        .fold(0.0, f64::max);
    assert!(drift < 1e-6, "relative drift {drift}");
}

#[test]
fn friction_dissipates_between_events() {
    let sc = case1();
    let tr = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    let tol = 10.0 * sc.config.rel_tol;
    let mut prev = mechanical_energy(&tr.samples[0].state, &sc.params);
    for s in &tr.samples[1..] {
        let e = mechanical_energy(&s.state, &sc.params);
        assert!(e <= prev + tol * prev.abs().max(1.0), "energy rose at t={}", s.t);
        prev = e;
    }
}

#[test]
fn slip_through_exceeds_tight_chatter_budget() {
    let mut sc = case1();
    sc.config.chatter_limit = 1;
    let err = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap_err();
    assert!(matches!(err, SimError::Chattering { axis: Axis::Y, .. }), "{err}");
}

#[test]
fn nan_input_is_an_invalid_state() {
    let mut sc = case2();
    sc.input = InputSignal::on(Axis::Rope, Waveform::Constant { value: f64::NAN });
    sc.params.input_limit = None;
    let err = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap_err();
    assert!(matches!(err, SimError::InvalidState { .. }), "{err}");
}

#[test]
fn trolley_stops_at_its_limit() {
    let p = presets::case1();
    let mut s0 = CraneState::hanging(0.25, 0.45, 0.4);
    s0.dy_t = 0.5;
    let cfg = SimConfig {
        t_end: 1.0,
        locked_axes: vec![Axis::Rope],
        ..SimConfig::default()
    };
    let tr = integrate(&s0, &InputSignal::zero(), &p, &cfg).unwrap();
    let hit = tr.events.iter().find(|e| e.kind == EventKind::LimitMax).expect("limit event");
    assert_eq!(hit.axis, Axis::Y);
    let after = tr.samples.iter().find(|s| s.t == hit.time).unwrap();
    assert_eq!(after.state.y_t, 0.505);
    assert!(tr.samples.iter().all(|s| s.state.y_t <= 0.505));
}

#[test]
fn invalid_config_is_rejected() {
    let sc = case1();
    let mut cfg = sc.config.clone();
    cfg.model = Model::Tanh { k: 0.0 };
    assert!(matches!(
        integrate(&sc.initial, &sc.input, &sc.params, &cfg),
        Err(SimError::Config(_))
    ));
    let mut s = sc.initial;
    s.y_t = 0.7;
    assert!(matches!(
        integrate(&s, &sc.input, &sc.params, &sc.config),
        Err(SimError::Config(_))
    ));
}

#[test]
fn zero_order_hold_input_steps_are_breakpoints() {
    let sc = case2();
    let weight = sc.params.payload_mass * sc.params.gravity;
    // net rope force alternates between +12 and -12 N every 0.25 s
    let values: Vec<f64> = (0..8).map(|i| -weight + if i % 2 == 0 { 12.0 } else { -12.0 }).collect();
    let input = InputSignal::on(Axis::Rope, Waveform::Samples { t0: 0.0, dt: 0.25, values });
    let cfg = SimConfig {
        t_end: 2.0,
        ..sc.config.clone()
    };
    let tr = integrate(&sc.initial, &input, &sc.params, &cfg).unwrap();
    check_structure(&tr);
    let first = tr.events.first().unwrap();
    assert_eq!(first.time, 0.0);
    assert_eq!(first.kind, EventKind::BreakawayPos);
    // slides for 0.25 s at 2.19 m/s^2 then decelerates at 21.81 m/s^2
    let stop = tr
        .events
        .iter()
        .find(|e| e.kind == EventKind::VelocityZero)
        .unwrap();
    let expected = 0.25 + 0.25 * 2.19 / 21.81;
    assert!((stop.time - expected).abs() < 1e-8, "{} vs {expected}", stop.time);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_swings_keep_the_invariants(
        da in -0.8f64..0.8,
        b in -0.4f64..0.4,
        ux in -3.0f64..3.0,
        uy in -3.0f64..3.0,
        ul in -6.0f64..6.0,
    ) {
        let p = presets::case1();
        let mut s0 = CraneState::hanging(0.2, 0.3, 0.35);
        s0.alpha += da;
        s0.beta = b;
        let input = InputSignal {
            x: Waveform::Sine { offset: 0.0, amplitude: ux, frequency: 0.7, phase: 0.0 },
            y: Waveform::Constant { value: uy },
            rope: Waveform::Sine { offset: 0.0, amplitude: ul, frequency: 1.3, phase: 0.5 },
        };
        let cfg = SimConfig { t_end: 1.5, ..SimConfig::default() };
        let tr = integrate(&s0, &input, &p, &cfg).unwrap();
        check_structure(&tr);
    }
}
