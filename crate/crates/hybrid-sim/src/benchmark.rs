//! Speed and accuracy of the tanh baseline against the hybrid reference.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cases::Scenario;
use crate::config::Model;
use crate::integrate::integrate;
use crate::trajectory::{rmse, Trajectory};

pub const DEFAULT_KS: [f64; 5] = [1.0, 10.0, 100.0, 1000.0, 10000.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub model: Model,
    /// Median wall time over the timed repeats [s].
    pub wall_time: Option<f64>,
    /// RMSE of the compared velocity against the hybrid run [m/s].
    pub rmse: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub case: String,
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn hybrid(&self) -> &BenchRow {
        &self.rows[0]
    }

    pub fn tanh_rows(&self) -> &[BenchRow] {
        &self.rows[1..]
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// One warm-up run, then `repeats` timed runs. Returns the last trajectory
/// and the median time.
fn timed(sc: &Scenario, model: Model, repeats: usize) -> Result<(Trajectory, f64), String> {
    let mut cfg = sc.config.clone();
    cfg.model = model;
    let run = || integrate(&sc.initial, &sc.input, &sc.params, &cfg).map_err(|e| e.to_string());
    let mut traj = run()?;
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        traj = run()?;
        times.push(start.elapsed().as_secs_f64());
    }
    Ok((traj, median(times)))
}

/// Run the hybrid reference and the tanh model for every `k`. Failed runs
/// are reported in their row; the table is always produced.
pub fn benchmark(sc: &Scenario, ks: &[f64], repeats: usize) -> BenchTable {
    let repeats = repeats.max(1);
    let axis = sc.compare_axis;
    let mut rows = Vec::with_capacity(ks.len() + 1);
    let reference = match timed(sc, Model::Hybrid, repeats) {
        Ok((traj, t)) => {
            rows.push(BenchRow {
                model: Model::Hybrid,
                wall_time: Some(t),
                rmse: Some(0.0),
                error: None,
            });
            Some(traj.grid_velocity(axis))
        }
        Err(e) => {
            rows.push(BenchRow {
                model: Model::Hybrid,
                wall_time: None,
                rmse: None,
                error: Some(e),
            });
            None
        }
    };
    for &k in ks {
        let model = Model::Tanh { k };
        rows.push(match timed(sc, model, repeats) {
            Ok((traj, t)) => {
                let v = traj.grid_velocity(axis);
                BenchRow {
                    model,
                    wall_time: Some(t),
                    rmse: reference.as_ref().map(|r| rmse(r, &v)),
                    error: None,
                }
            }
            Err(e) => BenchRow {
                model,
                wall_time: None,
                rmse: None,
                error: Some(e),
            },
        });
    }
    BenchTable {
        case: sc.name.clone(),
        repeats,
        rows,
    }
}
