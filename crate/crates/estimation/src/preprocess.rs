//! Filtering, differentiation and masking of one position channel.

use serde::{Deserialize, Serialize};
use sigproc::{
    butter_filtfilt, central_diff_accel, central_diff_velocity, mask_zero_crossings, FilterSpec,
    SampledSignal, DEFAULT_MASK_WINDOW,
};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PreprocessConfig {
    pub filter: FilterSpec,
    /// Half-width of the exclusion window around velocity reversals [s].
    pub mask_window: f64,
    /// Samples slower than this are excluded, together with everything
    /// within `stick_window` of them [m/s].
    pub min_speed: f64,
    /// Half-width of the exclusion window around slow samples [s]. Covers
    /// the filter's smearing of the acceleration jump at a stop.
    pub stick_window: f64,
    /// Samples this close to either end of a record are excluded [s].
    pub edge: f64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            filter: FilterSpec::default(),
            mask_window: DEFAULT_MASK_WINDOW,
            min_speed: 2e-2,
            stick_window: 0.4,
            edge: 0.5,
        }
    }
}

/// Filtered position with its central-difference derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub acceleration: Vec<f64>,
    /// `true` where the sample may enter a regression.
    pub mask: Vec<bool>,
}

pub fn differentiate(t0: f64, dt: f64, values: &[f64], cfg: &PreprocessConfig) -> Result<Derivatives> {
    let raw = SampledSignal::new(t0, dt, values.to_vec())?;
    let filt = butter_filtfilt(&raw, &cfg.filter)?;
    let vel = central_diff_velocity(&filt);
    let acc = central_diff_accel(&filt);
    let mut mask = mask_zero_crossings(&vel, cfg.mask_window);
    let reach = (cfg.stick_window / dt).round() as usize;
    let n = mask.len();
    // stick phases: drop slow samples and a window around each of them
    let mut last_slow: Option<usize> = None;
    for k in 0..n {
        if vel.values[k].abs() < cfg.min_speed {
            last_slow = Some(k);
        }
        if last_slow.is_some_and(|j| k - j <= reach) {
            mask[k] = false;
        }
    }
    let mut next_slow: Option<usize> = None;
    for k in (0..n).rev() {
        if vel.values[k].abs() < cfg.min_speed {
            next_slow = Some(k);
        }
        if next_slow.is_some_and(|j| j - k <= reach) {
            mask[k] = false;
        }
    }
    trim_edges(&mut mask, dt, cfg.edge);
    for (m, a) in mask.iter_mut().zip(&acc.values) {
        if !a.is_finite() {
            *m = false;
        }
    }
    Ok(Derivatives {
        position: filt.values,
        velocity: vel.values,
        acceleration: acc.values,
        mask,
    })
}

/// Derivatives without any masking, for channels such as swing angles whose
/// reversals are part of the signal of interest.
pub fn differentiate_unmasked(t0: f64, dt: f64, values: &[f64], filter: &FilterSpec, edge: f64) -> Result<Derivatives> {
    let raw = SampledSignal::new(t0, dt, values.to_vec())?;
    let filt = butter_filtfilt(&raw, filter)?;
    let vel = central_diff_velocity(&filt);
    let acc = central_diff_accel(&filt);
    let mut mask: Vec<bool> = acc.values.iter().map(|a| a.is_finite()).collect();
    trim_edges(&mut mask, dt, edge);
    Ok(Derivatives {
        position: filt.values,
        velocity: vel.values,
        acceleration: acc.values,
        mask,
    })
}

/// Clear the mask within `edge` seconds of either end, where the filter's
/// start-up transient lives.
fn trim_edges(mask: &mut [bool], dt: f64, edge: f64) {
    let n = mask.len();
    let k = ((edge / dt).round() as usize).min(n);
    mask[..k].iter_mut().for_each(|m| *m = false);
    mask[n - k..].iter_mut().for_each(|m| *m = false);
}
