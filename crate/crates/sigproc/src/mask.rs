use crate::signal::SampledSignal;

/// Default half-width of the excluded region around a velocity reversal [s].
pub const DEFAULT_MASK_WINDOW: f64 = 0.15;

/// `true` where a sample is usable: finite and farther than `window_s` from
/// every velocity sign change. Sign changes between samples are located by
/// linear interpolation; samples that are exactly zero count as crossings.
pub fn mask_zero_crossings(velocity: &SampledSignal, window_s: f64) -> Vec<bool> {
    let v = &velocity.values;
    let mut crossings = Vec::new();
    for k in 0..v.len() {
        if v[k] == 0.0 {
            crossings.push(velocity.time(k));
        } else if k + 1 < v.len() && v[k] * v[k + 1] < 0.0 {
            let frac = v[k] / (v[k] - v[k + 1]);
            crossings.push(velocity.time(k) + frac * velocity.dt);
        }
    }
    // inclusive window, robust to round-off in the sample times
    let window = window_s + 1e-9 * velocity.dt;
    // crossings are sorted, so a moving pointer finds the nearest ones
    let mut j = 0;
    (0..v.len())
        .map(|k| {
            if !v[k].is_finite() {
                return false;
            }
            let t = velocity.time(k);
            while j + 1 < crossings.len() && crossings[j + 1] <= t {
                j += 1;
            }
            let near = |c: &f64| (t - c).abs() <= window;
            !(crossings.get(j).is_some_and(near) || crossings.get(j + 1).is_some_and(near))
        })
        .collect()
}

/// `true` where the sample is finite.
pub fn mask_invalid(signal: &SampledSignal) -> Vec<bool> {
    signal.values.iter().map(|v| v.is_finite()).collect()
}
