//! Active sampling of the four Coulomb maps (maximum-variance design).

use std::time::{Duration, Instant};

use crane_core::Axis;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EstError, Result};
use crate::gpr::{gpr_fit, grid, GprModel};

/// Breakaway voltage magnitudes measured at one trolley position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionComponents {
    pub x_pos: f64,
    pub x_neg: f64,
    pub y_pos: f64,
    pub y_neg: f64,
}

impl FrictionComponents {
    pub fn get(&self, map: MapId) -> f64 {
        match map {
            MapId::XPos => self.x_pos,
            MapId::XNeg => self.x_neg,
            MapId::YPos => self.y_pos,
            MapId::YNeg => self.y_neg,
        }
    }
}

/// One of the four friction maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapId {
    XPos,
    XNeg,
    YPos,
    YNeg,
}

impl MapId {
    pub const ALL: [MapId; 4] = [MapId::XPos, MapId::XNeg, MapId::YPos, MapId::YNeg];

    pub fn axis(self) -> Axis {
        match self {
            MapId::XPos | MapId::XNeg => Axis::X,
            MapId::YPos | MapId::YNeg => Axis::Y,
        }
    }

    pub fn direction(self) -> i8 {
        match self {
            MapId::XPos | MapId::YPos => 1,
            MapId::XNeg | MapId::YNeg => -1,
        }
    }

    pub fn from_parts(axis: Axis, direction: i8) -> Option<MapId> {
        match (axis, direction > 0) {
            (Axis::X, true) => Some(MapId::XPos),
            (Axis::X, false) => Some(MapId::XNeg),
            (Axis::Y, true) => Some(MapId::YPos),
            (Axis::Y, false) => Some(MapId::YNeg),
            (Axis::Rope, _) => None,
        }
    }
}

/// Source of breakaway measurements at a commanded trolley position.
pub trait BreakawayOracle {
    fn measure(&mut self, x: f64, y: f64) -> Result<FrictionComponents>;
}

impl<F: FnMut(f64, f64) -> Result<FrictionComponents>> BreakawayOracle for F {
    fn measure(&mut self, x: f64, y: f64) -> Result<FrictionComponents> {
        self(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActiveConfig {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Initial positions per axis.
    pub initial: usize,
    /// Candidate grid size per axis.
    pub candidates: usize,
    /// Stop when every latent posterior std is below this [V].
    pub std_threshold: f64,
    /// Total number of measured positions, initial ones included.
    pub max_points: usize,
    /// Wall-clock budget in seconds.
    pub time_budget: Option<f64>,
    pub seed: u64,
}

impl Default for ActiveConfig {
    fn default() -> Self {
        ActiveConfig {
            x_range: (0.0, 0.505),
            y_range: (0.0, 0.505),
            initial: 5,
            candidates: 101,
            std_threshold: 0.05,
            max_points: 25,
            time_budget: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    PointBudget,
    TimeBudget,
}

#[derive(Debug, Clone)]
pub struct ActiveResult {
    /// Models in [`MapId::ALL`] order.
    pub models: [GprModel; 4],
    /// Measured positions and their four components, in query order.
    pub samples: Vec<(f64, f64, FrictionComponents)>,
    pub stop: StopReason,
    /// Largest latent posterior std over the candidate grids at the end.
    pub max_std: f64,
}

impl ActiveResult {
    pub fn model(&self, map: MapId) -> &GprModel {
        &self.models[MapId::ALL.iter().position(|&m| m == map).expect("listed")]
    }
}

/// Fit the four maps from a set of measured positions.
pub fn fit_maps(samples: &[(f64, f64, FrictionComponents)], cfg: &ActiveConfig) -> Result<[GprModel; 4]> {
    let fit = |map: MapId| {
        let (range, pick): ((f64, f64), fn(&(f64, f64, FrictionComponents)) -> f64) = match map.axis() {
            Axis::X => (cfg.x_range, |s| s.0),
            _ => (cfg.y_range, |s| s.1),
        };
        let xs: Vec<f64> = samples.iter().map(pick).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.2.get(map)).collect();
        gpr_fit(&xs, &ys, range)
    };
    Ok([fit(MapId::XPos)?, fit(MapId::XNeg)?, fit(MapId::YPos)?, fit(MapId::YNeg)?])
}

/// Largest-variance candidate over both maps of one axis.
fn most_uncertain(a: &GprModel, b: &GprModel, cands: &[f64]) -> (f64, f64) {
    let mut best = (cands[0], -1.0);
    for &c in cands {
        let v = a.predict_latent(c).1.max(b.predict_latent(c).1);
        if v > best.1 {
            best = (c, v);
        }
    }
    (best.0, best.1.sqrt())
}

/// Run the sampling loop: measure an initial set of positions, then
/// repeatedly fit all four maps and measure where the posterior is least
/// certain, until the maps are certain enough or a budget is exhausted.
/// A failed measurement is logged and skipped; it still counts against the
/// point budget so the loop always terminates.
pub fn active_sampling<O: BreakawayOracle + ?Sized>(oracle: &mut O, cfg: &ActiveConfig) -> Result<ActiveResult> {
    if cfg.initial < 3 || cfg.candidates < 2 || cfg.max_points < cfg.initial {
        return Err(EstError::Precondition(format!(
            "need initial >= 3, candidates >= 2 and max_points >= initial (got {}, {}, {})",
            cfg.initial, cfg.candidates, cfg.max_points
        )));
    }
    for (lo, hi) in [cfg.x_range, cfg.y_range] {
        if !(lo < hi) {
            return Err(EstError::Precondition(format!("empty axis range [{lo}, {hi}]")));
        }
    }
    let start = Instant::now();
    let budget = cfg.time_budget.map(Duration::from_secs_f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs0 = grid(cfg.x_range.0, cfg.x_range.1, cfg.initial);
    let mut ys0 = grid(cfg.y_range.0, cfg.y_range.1, cfg.initial);
    ys0.shuffle(&mut rng);

    let mut samples = Vec::new();
    let mut attempts = 0usize;
    let mut query = |x: f64, y: f64, samples: &mut Vec<(f64, f64, FrictionComponents)>, attempts: &mut usize| {
        *attempts += 1;
        match oracle.measure(x, y) {
            Ok(c) => samples.push((x, y, c)),
            Err(e) => log::warn!("measurement at ({x:.4}, {y:.4}) failed, skipped: {e}"),
        }
    };
    for (&x, &y) in xs0.iter().zip(&ys0) {
        query(x, y, &mut samples, &mut attempts);
    }
    let cx = grid(cfg.x_range.0, cfg.x_range.1, cfg.candidates);
    let cy = grid(cfg.y_range.0, cfg.y_range.1, cfg.candidates);
    loop {
        if samples.len() < 3 {
            return Err(EstError::Oracle(format!(
                "only {} of {attempts} measurements succeeded",
                samples.len()
            )));
        }
        let models = fit_maps(&samples, cfg)?;
        let (x_new, sx) = most_uncertain(&models[0], &models[1], &cx);
        let (y_new, sy) = most_uncertain(&models[2], &models[3], &cy);
        let max_std = sx.max(sy);
        let stop = if max_std < cfg.std_threshold {
            Some(StopReason::Converged)
        } else if attempts >= cfg.max_points {
            Some(StopReason::PointBudget)
        } else if budget.is_some_and(|b| start.elapsed() >= b) {
            Some(StopReason::TimeBudget)
        } else {
            None
        };
        if let Some(stop) = stop {
            log::info!("active sampling stopped ({stop:?}) after {} points, max std {max_std:.4}", samples.len());
            return Ok(ActiveResult {
                models,
                samples,
                stop,
                max_std,
            });
        }
        log::debug!("next position ({x_new:.4}, {y_new:.4}), std {max_std:.4}");
        query(x_new, y_new, &mut samples, &mut attempts);
    }
}
