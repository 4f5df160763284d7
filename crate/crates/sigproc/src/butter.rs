//! Butterworth low-pass design as second-order sections and forward-backward
//! filtering with odd-reflection padding.

use serde::{Deserialize, Serialize};

use crate::signal::SampledSignal;
use crate::{Result, SigError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSpec {
    pub order: usize,
    pub cutoff_hz: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            order: 4,
            cutoff_hz: 3.0,
        }
    }
}

impl FilterSpec {
    /// Edge padding used by [`butter_filtfilt`].
    pub fn padlen(&self) -> usize {
        3 * (self.order + 1)
    }
}

/// Digital Butterworth low-pass filter, one section per pole pair, each
/// section normalised to unit DC gain. Sections are `[b0, b1, b2, a0, a1, a2]`
/// with `a0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Butterworth {
    pub sections: Vec<[f64; 6]>,
}

impl Butterworth {
    /// Bilinear transform of the analog prototype with the cutoff pre-warped.
    pub fn design(spec: &FilterSpec, dt: f64) -> Result<Self> {
        let fs = 1.0 / dt;
        if spec.order == 0 {
            return Err(SigError::InvalidSpec("order must be at least 1".into()));
        }
        if !(spec.cutoff_hz > 0.0) || spec.cutoff_hz >= 0.5 * fs {
            return Err(SigError::InvalidSpec(format!(
                "cutoff {} Hz must lie in (0, {}) for dt = {dt}",
                spec.cutoff_hz,
                0.5 * fs
            )));
        }
        let n = spec.order;
        let k2 = 2.0 * fs;
        let wc = k2 * (std::f64::consts::PI * spec.cutoff_hz / fs).tan();
        let mut sections = Vec::with_capacity(n.div_ceil(2));
        // upper-half-plane poles; the real pole of an odd order comes last
        for k in 0..n / 2 {
            let th = std::f64::consts::PI * (2 * k + n + 1) as f64 / (2 * n) as f64;
            let (re, im) = (wc * th.cos(), wc * th.sin());
            // z = (k2 + s) / (k2 - s)
            let (zr, zi) = cdiv((k2 + re, im), (k2 - re, -im));
            let a1 = -2.0 * zr;
            let a2 = zr * zr + zi * zi;
            let g = (1.0 + a1 + a2) / 4.0;
            sections.push([g, 2.0 * g, g, 1.0, a1, a2]);
        }
        if n % 2 == 1 {
            let p = (k2 - wc) / (k2 + wc);
            let g = (1.0 - p) / 2.0;
            sections.push([g, g, 0.0, 1.0, -p, 0.0]);
        }
        // poles closest to the unit circle last, as is conventional
        sections.sort_by(|a, b| a[5].abs().total_cmp(&b[5].abs()).then(b[4].total_cmp(&a[4])));
        Ok(Butterworth { sections })
    }

    /// Single-pass magnitude and phase [rad] at `freq_hz`.
    pub fn response(&self, freq_hz: f64, dt: f64) -> (f64, f64) {
        let w = std::f64::consts::TAU * freq_hz * dt;
        let z1 = (w.cos(), -w.sin());
        let z2 = cmul(z1, z1);
        let mut h = (1.0, 0.0);
        for s in &self.sections {
            let num = (s[0] + s[1] * z1.0 + s[2] * z2.0, s[1] * z1.1 + s[2] * z2.1);
            let den = (s[3] + s[4] * z1.0 + s[5] * z2.0, s[4] * z1.1 + s[5] * z2.1);
            h = cmul(h, cdiv(num, den));
        }
        (h.0.hypot(h.1), h.1.atan2(h.0))
    }

    /// Steady-state section states for a unit step input.
    fn step_states(&self) -> Vec<[f64; 2]> {
        self.sections
            .iter()
            .map(|s| {
                let g = (s[0] + s[1] + s[2]) / (s[3] + s[4] + s[5]);
                let z1 = s[2] - s[5] * g;
                [s[1] - s[4] * g + z1, z1]
            })
            .collect()
    }

    /// Causal filtering in transposed direct form II from initial states.
    fn run(&self, x: &mut [f64], mut zi: Vec<[f64; 2]>) {
        for v in x.iter_mut() {
            let mut u = *v;
            for (s, z) in self.sections.iter().zip(zi.iter_mut()) {
                let y = s[0] * u + z[0];
                z[0] = s[1] * u - s[4] * y + z[1];
                z[1] = s[2] * u - s[5] * y;
                u = y;
            }
            *v = u;
        }
    }

    /// Zero-phase filtering with odd-reflection padding of `padlen` samples
    /// and steady-state initial conditions at both ends.
    pub fn filtfilt(&self, x: &[f64], padlen: usize) -> Result<Vec<f64>> {
        let n = x.len();
        if n <= padlen {
            return Err(SigError::TooShort { len: n, need: padlen });
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            return Err(SigError::InvalidArgument(format!("non-finite sample at index {k}")));
        }
        let mut ext = Vec::with_capacity(n + 2 * padlen);
        ext.extend((1..=padlen).rev().map(|k| 2.0 * x[0] - x[k]));
        ext.extend_from_slice(x);
        ext.extend((1..=padlen).map(|k| 2.0 * x[n - 1] - x[n - 1 - k]));
        let zi = self.step_states();
        let scaled = |c: f64| zi.iter().map(|z| [z[0] * c, z[1] * c]).collect::<Vec<_>>();
        let x0 = ext[0];
        self.run(&mut ext, scaled(x0));
        ext.reverse();
        let y0 = ext[0];
        self.run(&mut ext, scaled(y0));
        ext.reverse();
        Ok(ext[padlen..padlen + n].to_vec())
    }
}

/// Zero-phase Butterworth low-pass filtering of `signal`.
pub fn butter_filtfilt(signal: &SampledSignal, spec: &FilterSpec) -> Result<SampledSignal> {
    let filter = Butterworth::design(spec, signal.dt)?;
    Ok(signal.with_values(filter.filtfilt(&signal.values, spec.padlen())?))
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}
