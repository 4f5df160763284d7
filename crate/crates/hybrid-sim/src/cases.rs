//! The two reference scenarios: a swinging payload dragging a trolley with
//! dry friction, and a hoist driven against a weight-level dry friction.

use crane_core::{presets, Axis, CraneParams, CraneState};
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::input::{InputSignal, Waveform};

/// Everything needed to run one scenario under any friction model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub params: CraneParams,
    pub initial: CraneState,
    #[serde(default)]
    pub input: InputSignal,
    #[serde(default)]
    pub config: SimConfig,
    /// Axis whose velocity is compared between models.
    pub compare_axis: Axis,
}

/// Tolerances used for benchmark reference runs.
pub fn reference_config(t_end: f64, locked: Vec<Axis>) -> SimConfig {
    SimConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        max_step: 0.01,
        t_end,
        output_dt: 0.001,
        locked_axes: locked,
        ..SimConfig::default()
    }
}

/// Payload released at 0.6 rad off vertical in the Y-Z plane with the hoist
/// locked; 1 N dry friction on every axis, no input.
pub fn case1() -> Scenario {
    let mut initial = CraneState::hanging(0.25, 0.25, 0.5);
    initial.alpha = std::f64::consts::FRAC_PI_2 + 0.6;
    Scenario {
        name: "case1".into(),
        params: presets::case1(),
        initial,
        input: InputSignal::zero(),
        config: reference_config(10.0, vec![Axis::Rope]),
        compare_axis: Axis::Y,
    }
}

/// Amplitude of the hoist force sinusoid in case 2 [N].
pub const CASE2_AMPLITUDE: f64 = 15.0;
/// Frequency of the hoist force sinusoid in case 2 [Hz].
pub const CASE2_FREQUENCY: f64 = 1.0;

/// 1 kg payload on a hoist whose dry friction equals its weight, driven by
/// `-m g + A sin(2 pi f t)` with both trolleys locked, so the net rope force
/// is the sinusoid itself.
pub fn case2() -> Scenario {
    let params = presets::case2();
    let weight = params.payload_mass * params.gravity;
    Scenario {
        name: "case2".into(),
        initial: CraneState::hanging(0.25, 0.25, 0.30),
        input: InputSignal::on(
            Axis::Rope,
            Waveform::Sine {
                offset: -weight,
                amplitude: CASE2_AMPLITUDE,
                frequency: CASE2_FREQUENCY,
                phase: 0.0,
            },
        ),
        params,
        config: reference_config(10.0, vec![Axis::X, Axis::Y]),
        compare_axis: Axis::Rope,
    }
}
