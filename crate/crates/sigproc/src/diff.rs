use crate::signal::SampledSignal;

/// `(x[k+1] - x[k-1]) / (2 dt)`; the end samples are NaN (invalid).
pub fn central_diff_velocity(signal: &SampledSignal) -> SampledSignal {
    let x = &signal.values;
    let n = x.len();
    let h2 = 2.0 * signal.dt;
    let values = (0..n)
        .map(|k| {
            if k == 0 || k + 1 >= n {
                f64::NAN
            } else {
                (x[k + 1] - x[k - 1]) / h2
            }
        })
        .collect();
    signal.with_values(values)
}

/// `(x[k+1] - 2 x[k] + x[k-1]) / dt^2`; the end samples are NaN (invalid).
pub fn central_diff_accel(signal: &SampledSignal) -> SampledSignal {
    let x = &signal.values;
    let n = x.len();
    let hh = signal.dt * signal.dt;
    let values = (0..n)
        .map(|k| {
            if k == 0 || k + 1 >= n {
                f64::NAN
            } else {
                (x[k + 1] - 2.0 * x[k] + x[k - 1]) / hh
            }
        })
        .collect();
    signal.with_values(values)
}
