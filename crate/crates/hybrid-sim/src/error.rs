use crane_core::{Axis, CoreError, CraneState, ModeVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("step size underflow at t = {t:.9} s (h = {h:e}); stiff component `{component}`")]
    StepUnderflow { t: f64, h: f64, component: &'static str },

    #[error("invalid state at t = {t:.9} s: {source}")]
    InvalidState { t: f64, source: CoreError },

    #[error("chattering on axis {axis} at t = {t:.9} s: more than {limit} transitions in one instant (mode {mode}, state {state:?})")]
    Chattering {
        axis: Axis,
        t: f64,
        limit: usize,
        mode: ModeVector,
        state: CraneState,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;
