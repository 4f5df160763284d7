//! JSON documents read and written by the commands.

use std::path::Path;

use crane_core::{Axis, CraneParams, CraneState};
use estimation::Step;
use hybrid_sim::{InputSignal, Scenario, SimConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{read_text, to_json};

/// A simulation run: parameters, initial state, input and solver settings.
/// Unknown keys are rejected and every default is written back out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: String,
    pub params: CraneParams,
    pub initial_state: CraneState,
    #[serde(default)]
    pub input: InputSignal,
    #[serde(default)]
    pub sim: SimConfig,
    /// Axis compared between models by the benchmark.
    #[serde(default = "default_compare_axis")]
    pub compare_axis: Axis,
}

fn default_compare_axis() -> Axis {
    Axis::X
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let sc: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario: {e}")))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| CliError::Input(format!("params: {e}")))?;
        self.sim.validate().map_err(|e| CliError::Input(format!("sim: {e}")))?;
        self.input.validate().map_err(|e| CliError::Input(format!("input: {e}")))?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn into_scenario(self) -> Scenario {
        Scenario {
            name: self.name,
            params: self.params,
            initial: self.initial_state,
            input: self.input,
            config: self.sim,
            compare_axis: self.compare_axis,
        }
    }
}

impl From<Scenario> for ScenarioFile {
    fn from(s: Scenario) -> Self {
        ScenarioFile {
            name: s.name,
            params: s.params,
            initial_state: s.initial,
            input: s.input,
            sim: s.config,
            compare_axis: s.compare_axis,
        }
    }
}

/// Parameters written by `estimate`. Steps that were not run keep the base
/// values, in which case `complete` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatedParams {
    pub complete: bool,
    pub estimated_steps: Vec<Step>,
    pub params: CraneParams,
}

/// Read either a plain parameter set or the output of `estimate`.
pub fn parse_params(text: &str) -> Result<CraneParams> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("params: {e}")))?;
    let params = if value.get("params").is_some() {
        serde_json::from_value::<EstimatedParams>(value).map(|e| e.params)
    } else {
        serde_json::from_value::<CraneParams>(value)
    }
    .map_err(|e| CliError::Input(format!("params: {e}")))?;
    params.validate().map_err(|e| CliError::Input(format!("params: {e}")))?;
    Ok(params)
}

pub fn load_params(path: &Path) -> Result<CraneParams> {
    parse_params(&read_text(path)?).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Bundled fixtures.
pub mod fixtures {
    pub const CASE1: &str = include_str!("../fixtures/case1.json");
    pub const CASE2: &str = include_str!("../fixtures/case2.json");
    pub const TABLE3_PARAMS: &str = include_str!("../fixtures/table3_params.json");

    pub fn table3() -> crane_core::CraneParams {
        super::parse_params(TABLE3_PARAMS).expect("bundled parameters are valid")
    }
}
