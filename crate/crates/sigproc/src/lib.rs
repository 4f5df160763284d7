//! Offline signal conditioning for encoder measurements: zero-phase
//! Butterworth low-pass filtering, central differences, masking around
//! velocity reversals and encoder quantisation.

mod butter;
mod diff;
mod mask;
mod quantize;
mod signal;

pub use butter::{butter_filtfilt, Butterworth, FilterSpec};
pub use diff::{central_diff_accel, central_diff_velocity};
pub use mask::{mask_invalid, mask_zero_crossings, DEFAULT_MASK_WINDOW};
pub use quantize::{encoder_quantum, quantize, quantize_encoder};
pub use signal::SampledSignal;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SigError {
    #[error("invalid filter specification: {0}")]
    InvalidSpec(String),
    #[error("signal too short: {len} samples, need more than {need}")]
    TooShort { len: usize, need: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SigError>;

/// Sample period of the laboratory data acquisition [s].
pub const DEFAULT_DT: f64 = 0.002;
