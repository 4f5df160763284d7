//! CSV time series: simulated trajectories and measurement records.

use std::path::Path;

use crane_core::{AxisMode, CraneState, InputVector, ModeVector};
use estimation::{MeasurementRecord, Quanta, RecordKind};
use hybrid_sim::Trajectory;

use crate::error::{CliError, Result};
use crate::io::{fmt_f64, parse_f64, write_atomic};

pub const TRAJECTORY_HEADER: [&str; 17] = [
    "t", "x_t", "dx_t", "y_t", "dy_t", "L", "dL", "alpha", "dalpha", "beta", "dbeta", "q_x", "q_y", "q_l", "u_x",
    "u_y", "u_l",
];

pub const RECORD_HEADER: [&str; 9] = ["t", "x_t", "y_t", "L", "alpha", "beta", "u_x", "u_y", "u_l"];

/// One trajectory row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub state: CraneState,
    pub mode: ModeVector,
    pub input: InputVector,
}

/// Rows with strictly increasing time. Where several samples share a time
/// (the two sides of a transition) the last one is kept.
pub fn trajectory_rows(traj: &Trajectory) -> Vec<TrajectoryRow> {
    let mut rows: Vec<TrajectoryRow> = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        let row = TrajectoryRow {
            t: s.t,
            state: s.state,
            mode: s.mode,
            input: s.input,
        };
        match rows.last_mut() {
            Some(last) if last.t >= s.t => *last = row,
            _ => rows.push(row),
        }
    }
    rows
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory writer")
}

pub fn trajectory_csv(rows: &[TrajectoryRow]) -> Vec<u8> {
    let mut w = writer();
    w.write_record(TRAJECTORY_HEADER).expect("in-memory writer");
    for r in rows {
        let s = &r.state;
        let mut rec: Vec<String> = [r.t, s.x_t, s.dx_t, s.y_t, s.dy_t, s.l, s.dl, s.alpha, s.dalpha, s.beta, s.dbeta]
            .iter()
            .map(|&v| fmt_f64(v))
            .collect();
        rec.extend([r.mode.x, r.mode.y, r.mode.rope].iter().map(|m| m.code().to_string()));
        rec.extend([r.input.u_x, r.input.u_y, r.input.u_l].iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec).expect("in-memory writer");
    }
    finish(w)
}

pub fn write_trajectory(path: &Path, rows: &[TrajectoryRow]) -> Result<()> {
    write_atomic(path, &trajectory_csv(rows))
}

/// Column-oriented CSV table with a header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(bytes: &[u8], what: &str) -> Result<Table> {
        let bad = |m: String| CliError::Input(format!("{what}: {m}"));
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
        let header: Vec<String> = r
            .headers()
            .map_err(|e| bad(e.to_string()))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        if header.is_empty() || header.iter().any(String::is_empty) {
            return Err(bad("empty column name in header".into()));
        }
        let mut columns = vec![Vec::new(); header.len()];
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            for (j, field) in rec.iter().enumerate() {
                let v = parse_f64(field).ok_or_else(|| bad(format!("row {}: `{field}` is not a number", i + 2)))?;
                columns[j].push(v);
            }
        }
        Ok(Table { header, columns })
    }

    pub fn read(path: &Path) -> Result<Table> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Table::parse(&bytes, &path.display().to_string())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header.iter().position(|h| h == name).map(|j| self.columns[j].as_slice())
    }

    pub fn require(&self, name: &str, what: &str) -> Result<&[f64]> {
        self.column(name)
            .ok_or_else(|| CliError::Input(format!("{what}: missing column `{name}`")))
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = writer();
        w.write_record(&self.header).expect("in-memory writer");
        for k in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| fmt_f64(c[k]))).expect("in-memory writer");
        }
        finish(w)
    }

    /// Uniform sample period of the `t` column.
    pub fn sample_period(&self, what: &str) -> Result<(f64, f64)> {
        let t = self.require("t", what)?;
        if t.len() < 2 {
            return Err(CliError::Input(format!("{what}: need at least two rows")));
        }
        let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
        if !(dt > 0.0) {
            return Err(CliError::Input(format!("{what}: time must increase")));
        }
        for (k, w) in t.windows(2).enumerate() {
            if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
                return Err(CliError::Input(format!("{what}: non-uniform sampling at row {}", k + 3)));
            }
        }
        Ok((t[0], dt))
    }
}

pub fn read_trajectory(bytes: &[u8]) -> Result<Vec<TrajectoryRow>> {
    let what = "trajectory";
    let t = Table::parse(bytes, what)?;
    if t.header != TRAJECTORY_HEADER {
        return Err(CliError::Input(format!("{what}: header must be {}", TRAJECTORY_HEADER.join(","))));
    }
    let mode = |v: f64| {
        AxisMode::from_code(v as u8)
            .filter(|_| v.fract() == 0.0)
            .ok_or_else(|| CliError::Input(format!("{what}: mode code {v} not in {{1,2,3}}")))
    };
    let mut rows = Vec::with_capacity(t.rows());
    for k in 0..t.rows() {
        let c = |j: usize| t.columns[j][k];
        rows.push(TrajectoryRow {
            t: c(0),
            state: CraneState::from_array(&[c(1), c(2), c(3), c(4), c(5), c(6), c(7), c(8), c(9), c(10)]),
            mode: ModeVector::new(mode(c(11))?, mode(c(12))?, mode(c(13))?),
            input: InputVector::new(c(14), c(15), c(16)),
        });
    }
    if rows.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(CliError::Input(format!("{what}: time is not strictly increasing")));
    }
    Ok(rows)
}

/// Per-record metadata kept in the data directory's manifest.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordMeta {
    pub file: String,
    pub name: String,
    pub kind: RecordKind,
    #[serde(default)]
    pub axis: Option<crane_core::Axis>,
    #[serde(default)]
    pub direction: Option<i8>,
    pub payload_mass: f64,
    #[serde(default)]
    pub quanta: Quanta,
    /// Sample period [s]; inferred from the `t` column when absent.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Experiment that produced the record, when synthetic.
    #[serde(default)]
    pub spec: Option<synth_lab::ExperimentSpec>,
}

pub fn record_csv(r: &MeasurementRecord) -> Vec<u8> {
    let mut w = writer();
    w.write_record(RECORD_HEADER).expect("in-memory writer");
    for k in 0..r.len() {
        let row = [r.time(k), r.x_t[k], r.y_t[k], r.l[k], r.alpha[k], r.beta[k], r.u_x[k], r.u_y[k], r.u_l[k]];
        w.write_record(row.iter().map(|&v| fmt_f64(v))).expect("in-memory writer");
    }
    finish(w)
}

pub fn parse_record(bytes: &[u8], meta: &RecordMeta) -> Result<MeasurementRecord> {
    let what = meta.file.as_str();
    let t = Table::parse(bytes, what)?;
    let (t0, mut dt) = t.sample_period(what)?;
    if let Some(d) = meta.dt {
        if (d - dt).abs() > 1e-9 * d {
            return Err(CliError::Input(format!("{what}: manifest dt {d} disagrees with the t column ({dt})")));
        }
        dt = d;
    }
    let col = |name: &str| t.require(name, what).map(<[f64]>::to_vec);
    let r = MeasurementRecord {
        kind: meta.kind,
        axis: meta.axis,
        direction: meta.direction,
        payload_mass: meta.payload_mass,
        t0,
        dt,
        x_t: col("x_t")?,
        y_t: col("y_t")?,
        l: col("L")?,
        alpha: col("alpha")?,
        beta: col("beta")?,
        u_x: col("u_x")?,
        u_y: col("u_y")?,
        u_l: col("u_l")?,
        quanta: meta.quanta,
    };
    r.check().map_err(|e| CliError::Input(format!("{what}: {e}")))?;
    Ok(r)
}
