//! The full identification procedure: hoist first, then the trolley axes,
//! then the swing damping.

use std::collections::BTreeSet;

use crane_core::{Axis, CraneParams};
use serde::{Deserialize, Serialize};
use sigproc::FilterSpec;

use crate::active::MapId;
use crate::axis::{estimate_axis, p6_from_rope, AxisEstimate, AxisMaps};
use crate::breakaway::estimate_breakaway;
use crate::error::{EstError, Result};
use crate::gpr::{gpr_fit, GprModel, GprSummary};
use crate::ls::LsResult;
use crate::poly::{fit_poly4, PolyFit};
use crate::preprocess::PreprocessConfig;
use crate::record::{MeasurementRecord, RecordKind};
use crate::rope::{estimate_p3, estimate_rope, estimate_rope_joint, RopeEstimate};
use crate::swing::{estimate_swing_damping, SwingEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Rope,
    Axes,
    Swing,
}

impl Step {
    pub const ALL: [Step; 3] = [Step::Rope, Step::Axes, Step::Swing];
}

/// The swing equations are nonlinear, so the angles carry harmonics of the
/// pendulum frequency that a 3 Hz cutoff would already attenuate.
pub const SWING_FILTER: FilterSpec = FilterSpec {
    order: 4,
    cutoff_hz: 6.0,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub preprocess: PreprocessConfig,
    /// Low-pass filter of the swing-angle channels.
    pub swing_filter: FilterSpec,
    /// Axis ranges used for the friction maps; defaults to the axis limits.
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    /// Also run the joint four-parameter rope regression for comparison.
    pub joint_rope: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            preprocess: PreprocessConfig::default(),
            swing_filter: SWING_FILTER,
            x_range: None,
            y_range: None,
            joint_rope: true,
        }
    }
}

/// Quartic maps reduced from the GPR models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapsEstimate {
    pub x: AxisMaps,
    pub y: AxisMaps,
    /// In [`MapId::ALL`] order.
    pub fits: Vec<PolyFit>,
    pub gpr: Vec<GprSummary>,
}

impl MapsEstimate {
    pub fn from_models(models: &[GprModel; 4], x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self> {
        let mut fits = Vec::with_capacity(4);
        for (m, id) in models.iter().zip(MapId::ALL) {
            let range = if id.axis() == Axis::X { x_range } else { y_range };
            fits.push(fit_poly4(m, range)?);
        }
        Ok(MapsEstimate {
            x: AxisMaps {
                pos: fits[0].poly,
                neg: fits[1].poly,
            },
            y: AxisMaps {
                pos: fits[2].poly,
                neg: fits[3].poly,
            },
            gpr: models.iter().map(GprModel::summary).collect(),
            fits,
        })
    }

    pub fn axis(&self, axis: Axis) -> &AxisMaps {
        if axis == Axis::X {
            &self.x
        } else {
            &self.y
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub rope: Option<RopeEstimate>,
    pub rope_joint: Option<LsResult>,
    pub maps: Option<MapsEstimate>,
    pub x: Option<AxisEstimate>,
    pub y: Option<AxisEstimate>,
    /// `1/K` of the X and Y axes used to split the inertia coefficients.
    pub p6: Option<(f64, f64)>,
    /// Whether `p6` came from the rope gain (identical motors) or from the
    /// base parameter file.
    pub p6_from_rope: bool,
    pub swing: Option<SwingEstimate>,
    pub steps: Vec<Step>,
}

impl Estimates {
    pub fn complete(&self) -> bool {
        self.rope.is_some() && self.maps.is_some() && self.x.is_some() && self.y.is_some() && self.swing.is_some()
    }

    /// Parameter set with every estimated quantity replaced. Friction maps
    /// are stored in volts.
    pub fn apply(&self, base: &CraneParams) -> CraneParams {
        let mut p = base.to_volts();
        if let Some(r) = &self.rope {
            let k = 1.0 / r.p4;
            p.rope.gain = k;
            p.rope.inertia = r.p1 * k;
            p.rope.viscous = r.p2 * k;
            p.rope.coulomb = r.p3 * k;
        }
        if let Some(m) = &self.maps {
            p.x.coulomb_pos = m.x.pos;
            p.x.coulomb_neg = m.x.neg;
            p.y.coulomb_pos = m.y.pos;
            p.y.coulomb_neg = m.y.neg;
        }
        if let Some((p6x, p6y)) = self.p6 {
            for (est, p6, axis) in [(&self.x, p6x, Axis::X), (&self.y, p6y, Axis::Y)] {
                let Some(e) = est else { continue };
                let moved = moved_mass(base, axis);
                let lin = if axis == Axis::X { &mut p.x } else { &mut p.y };
                let k = 1.0 / p6;
                lin.gain = k;
                lin.inertia = e.motor_inertia_ratio(p6, moved) * k;
                lin.viscous_pos = e.p7_pos * k;
                lin.viscous_neg = e.p7_neg * k;
            }
        }
        if let Some(s) = &self.swing {
            p.damping_alpha = s.damping_alpha;
            if let Some(d) = s.damping_beta {
                p.damping_beta = d;
            }
        }
        p
    }
}

/// Mass moved by an axis besides the reflected motor inertia.
pub fn moved_mass(base: &CraneParams, axis: Axis) -> f64 {
    match axis {
        Axis::X => base.trolley_mass + base.rail_mass,
        Axis::Y => base.trolley_mass,
        Axis::Rope => 0.0,
    }
}

fn is_rope_ramp(r: &MeasurementRecord) -> bool {
    r.kind == RecordKind::QuasistaticRamp && r.axis == Some(Axis::Rope)
}

fn is_rope_no_load(r: &MeasurementRecord) -> bool {
    r.kind == RecordKind::RichMotion && r.axis == Some(Axis::Rope) && r.payload_mass == 0.0
}

fn is_axes_motion(r: &MeasurementRecord) -> bool {
    r.kind == RecordKind::RichMotion && r.axis.is_none()
}

/// Record kinds a step needs that the dataset lacks, described for humans.
pub fn missing_records(records: &[MeasurementRecord], steps: &[Step]) -> Vec<String> {
    let mut missing = BTreeSet::new();
    let has = |f: &dyn Fn(&MeasurementRecord) -> bool| records.iter().any(f);
    for step in steps {
        match step {
            Step::Rope => {
                if !has(&is_rope_ramp) {
                    missing.insert("QUASISTATIC_RAMP on the rope".to_string());
                }
                if !has(&is_rope_no_load) {
                    missing.insert("RICH_MOTION of the rope without payload".to_string());
                }
                if !has(&|r| r.kind == RecordKind::LoadedRope) {
                    missing.insert("LOADED_ROPE".to_string());
                }
            }
            Step::Axes => {
                for id in MapId::ALL {
                    let n = records
                        .iter()
                        .filter(|r| {
                            r.kind == RecordKind::BreakawayAt
                                && r.axis == Some(id.axis())
                                && r.direction == Some(id.direction())
                        })
                        .count();
                    if n < 3 {
                        missing.insert(format!("BREAKAWAY_AT {:?} (need 3, found {n})", id));
                    }
                }
                if !has(&is_axes_motion) {
                    missing.insert("RICH_MOTION of the X and Y axes".to_string());
                }
            }
            Step::Swing => {
                if !has(&|r| r.kind == RecordKind::FreeSwing) {
                    missing.insert("FREE_SWING".to_string());
                }
            }
        }
    }
    missing.into_iter().collect()
}

/// GPR friction maps from breakaway ramp records.
pub fn maps_from_records(
    records: &[MeasurementRecord],
    x_range: (f64, f64),
    y_range: (f64, f64),
) -> Result<MapsEstimate> {
    let mut fit = Vec::with_capacity(4);
    for id in MapId::ALL {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in records.iter().filter(|r| {
            r.kind == RecordKind::BreakawayAt && r.axis == Some(id.axis()) && r.direction == Some(id.direction())
        }) {
            let s = estimate_breakaway(r, id.axis())?;
            if s.direction != id.direction() {
                log::warn!("{:?} ramp moved the wrong way at {}", id, s.position);
                continue;
            }
            xs.push(s.position);
            ys.push(s.voltage);
        }
        let range = if id.axis() == Axis::X { x_range } else { y_range };
        fit.push(gpr_fit(&xs, &ys, range)?);
    }
    let models: [GprModel; 4] = fit.try_into().expect("four maps");
    MapsEstimate::from_models(&models, x_range, y_range)
}

pub fn run_pipeline(
    records: &[MeasurementRecord],
    base: &CraneParams,
    steps: &[Step],
    cfg: &PipelineConfig,
) -> Result<Estimates> {
    let missing = missing_records(records, steps);
    if !missing.is_empty() {
        return Err(EstError::Missing(missing.join(", ")));
    }
    let g = base.gravity;
    let mut est = Estimates {
        steps: steps.to_vec(),
        ..Default::default()
    };
    if steps.contains(&Step::Rope) {
        let ramps: Vec<MeasurementRecord> = records.iter().filter(|r| is_rope_ramp(r)).cloned().collect();
        let p3 = estimate_p3(&ramps)?;
        let no_load = records.iter().find(|r| is_rope_no_load(r)).expect("checked above");
        let loaded: Vec<MeasurementRecord> =
            records.iter().filter(|r| r.kind == RecordKind::LoadedRope).cloned().collect();
        est.rope = Some(estimate_rope(p3, no_load, &loaded, g, &cfg.preprocess)?);
        if cfg.joint_rope {
            match estimate_rope_joint(no_load, &loaded, g, &cfg.preprocess) {
                Ok(j) => est.rope_joint = Some(j),
                Err(e) => log::warn!("joint rope regression failed: {e}"),
            }
        }
    }
    if steps.contains(&Step::Axes) {
        let xr = cfg.x_range.unwrap_or((base.x.limits.min, base.x.limits.max));
        let yr = cfg.y_range.unwrap_or((base.y.limits.min, base.y.limits.max));
        let maps = maps_from_records(records, xr, yr)?;
        let motion = records.iter().find(|r| is_axes_motion(r)).expect("checked above");
        est.x = Some(estimate_axis(motion, Axis::X, &maps.x, &cfg.preprocess)?);
        est.y = Some(estimate_axis(motion, Axis::Y, &maps.y, &cfg.preprocess)?);
        est.maps = Some(maps);
        est.p6 = Some(match &est.rope {
            Some(r) => {
                est.p6_from_rope = true;
                (
                    p6_from_rope(r.p4, base.radius_x, base.radius_rope),
                    p6_from_rope(r.p4, base.radius_y, base.radius_rope),
                )
            }
            None => (1.0 / base.x.gain, 1.0 / base.y.gain),
        });
    }
    if steps.contains(&Step::Swing) {
        let swings: Vec<MeasurementRecord> =
            records.iter().filter(|r| r.kind == RecordKind::FreeSwing).cloned().collect();
        est.swing = Some(estimate_swing_damping(&swings, g, &cfg.swing_filter, cfg.preprocess.edge)?);
    }
    Ok(est)
}

