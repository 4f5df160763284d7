use sigproc::{central_diff_accel, central_diff_velocity, SampledSignal};
use std::f64::consts::TAU;

const DT: f64 = 0.002;

#[test]
fn ends_are_invalid() {
    let x = SampledSignal::from_fn(0.0, DT, 10, |t| t).unwrap();
    let v = central_diff_velocity(&x);
    let a = central_diff_accel(&x);
    for s in [&v, &a] {
        assert!(!s.is_valid(0) && !s.is_valid(9));
        assert!((1..9).all(|k| s.is_valid(k)));
    }
}

#[test]
fn ramp_gives_constant_slope() {
    let x = SampledSignal::from_fn(0.0, DT, 100, |t| 2.0 * t + 0.3).unwrap();
    let v = central_diff_velocity(&x);
    for k in 1..99 {
        assert!((v.values[k] - 2.0).abs() < 1e-10);
    }
}

#[test]
fn quadratics_are_exact() {
    let x = SampledSignal::from_fn(0.0, DT, 1000, |t| t * t).unwrap();
    let v = central_diff_velocity(&x);
    let a = central_diff_accel(&x);
    for k in 1..999 {
        let t = x.time(k);
        // limited only by round-off in the samples
        assert!((v.values[k] - 2.0 * t).abs() <= 4.0 * f64::EPSILON * t.max(1.0) * t / DT + 1e-15);
        assert!((a.values[k] - 2.0).abs() < 1e-6);
    }
    let c = SampledSignal::new(0.0, DT, vec![3.5; 50]).unwrap();
    assert!(central_diff_accel(&c).values[1..49].iter().all(|&v| v == 0.0));
}

#[test]
fn sine_within_taylor_bound() {
    let x = SampledSignal::from_fn(0.0, DT, 2000, |t| (TAU * t).sin()).unwrap();
    let v = central_diff_velocity(&x);
    let a = central_diff_accel(&x);
    let bound_v = TAU * (TAU * DT).powi(2) / 6.0;
    let bound_a = TAU * TAU * (TAU * DT).powi(2) / 12.0;
    for k in 1..1999 {
        let t = x.time(k);
        assert!((v.values[k] - TAU * (TAU * t).cos()).abs() <= bound_v * 1.0001);
        assert!((v.values[k] - TAU * (TAU * t).cos()).abs() < 1e-4 * TAU);
        assert!((a.values[k] + TAU * TAU * (TAU * t).sin()).abs() <= bound_a * 1.0001 + 1e-8);
    }
}

#[test]
fn differences_are_linear() {
    let x = SampledSignal::from_fn(0.0, DT, 300, |t| (3.0 * t).sin()).unwrap();
    let y = SampledSignal::from_fn(0.0, DT, 300, |t| t.powi(3)).unwrap();
    let (a, b) = (1.7, -0.4);
    let z = SampledSignal::new(0.0, DT, x.values.iter().zip(&y.values).map(|(p, q)| a * p + b * q).collect())
        .unwrap();
    let (dx, dy, dz) = (central_diff_velocity(&x), central_diff_velocity(&y), central_diff_velocity(&z));
    for k in 1..299 {
        let lin = a * dx.values[k] + b * dy.values[k];
        assert!((dz.values[k] - lin).abs() < 1e-10 * (1.0 + lin.abs()));
    }
}
