use crate::signal::SampledSignal;

/// Position step of an encoder with `pulses_per_rev` counts per revolution
/// on a shaft whose rotation maps to position through `scale` (pulley
/// radius for linear axes, 1 for angles).
pub fn encoder_quantum(pulses_per_rev: u32, scale: f64) -> f64 {
    scale * std::f64::consts::TAU / pulses_per_rev as f64
}

/// Largest multiple of `q` not above `x`. Idempotent in floating point.
pub fn quantize(x: f64, q: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let mut k = (x / q).floor();
    if (k + 1.0) * q <= x {
        k += 1.0;
    }
    if k * q > x {
        k -= 1.0;
    }
    k * q
}

/// Floor-quantise a position record to encoder resolution.
pub fn quantize_encoder(signal: &SampledSignal, pulses_per_rev: u32, scale: f64) -> SampledSignal {
    assert!(pulses_per_rev > 0, "pulses_per_rev must be positive");
    let q = encoder_quantum(pulses_per_rev, scale);
    signal.with_values(signal.values.iter().map(|&x| quantize(x, q)).collect())
}
