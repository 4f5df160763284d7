use proptest::prelude::*;
use sigproc::{encoder_quantum, mask_zero_crossings, quantize, quantize_encoder, SampledSignal};
use std::f64::consts::TAU;

const DT: f64 = 0.002;

#[test]
fn positive_velocity_is_fully_usable() {
    let v = SampledSignal::from_fn(0.0, DT, 500, |t| 0.1 + t).unwrap();
    assert!(mask_zero_crossings(&v, 0.15).iter().all(|&m| m));
}

#[test]
fn single_crossing_masks_the_window() {
    let v = SampledSignal::from_fn(0.0, 0.01, 201, |t| t - 1.0).unwrap();
    let m = mask_zero_crossings(&v, 0.1);
    for (k, &ok) in m.iter().enumerate() {
        let t = v.time(k);
        let inside = (t - 1.0).abs() <= 0.1 + 1e-9;
        // sample times carry round-off, so skip the two boundary samples
        if ((t - 1.0).abs() - 0.1).abs() > 1e-9 {
            assert_eq!(ok, !inside, "t = {t}");
        }
    }
    assert_eq!(m.iter().filter(|&&ok| !ok).count(), 21);
}

#[test]
fn half_hertz_sine_is_thirty_percent_masked() {
    // crossings at 0.5, 1.5, ... avoid the ends so every window is complete
    let v = SampledSignal::from_fn(0.0, DT, 5000, |t| (TAU * 0.5 * t + TAU / 4.0).sin()).unwrap();
    let m = mask_zero_crossings(&v, 0.15);
    let masked = m.iter().filter(|&&ok| !ok).count();
    // ten crossings, each masking 0.3 s inclusive of both ends
    assert_eq!(masked, 10 * 151);
    assert!((masked as f64 / m.len() as f64 - 0.30).abs() < 0.003);
}

#[test]
fn invalid_samples_are_masked() {
    let mut v = SampledSignal::from_fn(0.0, DT, 100, |_| 1.0).unwrap();
    v.values[0] = f64::NAN;
    v.values[99] = f64::NAN;
    let m = mask_zero_crossings(&v, 0.0);
    assert!(!m[0] && !m[99] && m[1..99].iter().all(|&ok| ok));
}

#[test]
fn ramp_becomes_a_staircase() {
    let q = encoder_quantum(4096, 0.04);
    let x = SampledSignal::from_fn(0.0, DT, 2000, |t| 0.01 * t).unwrap();
    let y = quantize_encoder(&x, 4096, 0.04);
    let steps: Vec<f64> = y.values.windows(2).map(|w| w[1] - w[0]).filter(|d| *d != 0.0).collect();
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|d| (d - q).abs() < 1e-15));
}

#[test]
fn grid_values_are_unchanged() {
    let q = encoder_quantum(4096, 1.0);
    for k in [-7i32, 0, 1, 1000, 4095] {
        let x = k as f64 * q;
        assert_eq!(quantize(x, q), x);
    }
}

proptest! {
    #[test]
    fn quantisation_is_bounded_and_idempotent(x in -10.0f64..10.0, scale in 0.001f64..1.0) {
        let q = encoder_quantum(4096, scale);
        let y = quantize(x, q);
        prop_assert!(y <= x && x - y < q);
        prop_assert_eq!(quantize(y, q), y);
    }

    #[test]
    fn mask_is_idempotent_and_monotone(
        f in 0.1f64..3.0, ph in 0.0f64..6.0, w1 in 0.0f64..0.3, dw in 0.0f64..0.3,
    ) {
        let v = SampledSignal::from_fn(0.0, DT, 1500, |t| (TAU * f * t + ph).sin()).unwrap();
        let m1 = mask_zero_crossings(&v, w1);
        prop_assert_eq!(&m1, &mask_zero_crossings(&v, w1));
        let m2 = mask_zero_crossings(&v, w1 + dw);
        for (a, b) in m1.iter().zip(&m2) {
            prop_assert!(!b || *a);
        }
    }
}
