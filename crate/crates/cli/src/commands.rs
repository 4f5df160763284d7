//! The `crane3d` subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use estimation::{run_pipeline, Estimates, PipelineConfig, Step};
use hybrid_sim::{benchmark, integrate, BenchTable, Model, DEFAULT_KS};
use sigproc::{butter_filtfilt, central_diff_accel, central_diff_velocity, mask_zero_crossings, FilterSpec};
use synth_lab::{generate_suite, SuiteSpec};

use crate::csvio::{trajectory_rows, write_trajectory, Table};
use crate::data::{read_dataset, write_suite};
use crate::error::{CliError, Result};
use crate::io::{fmt_f64, read_json, write_atomic, write_json};
use crate::schema::{fixtures, load_params, EstimatedParams, ScenarioFile};

#[derive(Debug, Parser)]
#[command(name = "crane3d", version, about = "3D overhead crane: stick-slip simulation and parameter estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a scenario file and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Compare the tanh friction model against the hybrid model.
    Benchmark(BenchmarkArgs),
    /// Estimate parameters from a measurement data directory.
    Estimate(EstimateArgs),
    /// Generate the synthetic experiment suite for a parameter set.
    Synth(SynthArgs),
    /// Filter and differentiate position columns of a CSV file.
    Filter(FilterArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Hybrid,
    Tanh,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario JSON file.
    pub scenario: PathBuf,
    /// Friction model; defaults to the one in the scenario.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Gain of the tanh model.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Bundled reference case (1 or 2).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with = "scenario")]
    pub case: Option<u8>,
    /// Scenario JSON file instead of a bundled case.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Comma-separated tanh gains.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_KS.to_vec())]
    pub ks: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Also write the table as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepArg {
    Rope,
    Axes,
    Swing,
    All,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Directory with manifest.json and the record CSVs.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub steps: Vec<StepArg>,
    /// Parameter file supplying the known quantities (masses, radii, limits)
    /// and the values of steps that are not run. Defaults to the bundled
    /// laboratory parameter set.
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Pipeline settings JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Diagnostics JSON; defaults to `<out>.diagnostics.json`.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Suite specification JSON; defaults to the built-in suite.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// True parameters; defaults to the bundled laboratory set.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Seed of every random choice; overrides the spec.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 3.0)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Columns to process; defaults to every position column present.
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
    /// Half-width of the exclusion window around velocity reversals [s].
    #[arg(long, default_value_t = sigproc::DEFAULT_MASK_WINDOW)]
    pub mask_window: f64,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Benchmark(a) => bench(&a),
        Command::Estimate(a) => estimate(&a).map(|_| ()),
        Command::Synth(a) => synth(&a),
        Command::Filter(a) => filter(&a),
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let mut sc = ScenarioFile::load(&a.scenario)?;
    match (a.model, a.k) {
        (Some(ModelArg::Hybrid), _) => sc.sim.model = Model::Hybrid,
        (Some(ModelArg::Tanh), Some(k)) => sc.sim.model = Model::Tanh { k },
        (Some(ModelArg::Tanh), None) => return Err(CliError::Input("--model tanh needs --k".into())),
        (None, Some(k)) => match &mut sc.sim.model {
            Model::Tanh { k: old } => *old = k,
            Model::Hybrid => return Err(CliError::Input("--k applies to the tanh model only".into())),
        },
        (None, None) => {}
    }
    sc.sim.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let start = Instant::now();
    let traj = integrate(&sc.initial_state, &sc.input, &sc.params, &sc.sim).map_err(|e| CliError::Simulation(e.to_string()))?;
    let wall = start.elapsed().as_secs_f64();
    write_trajectory(&a.out, &trajectory_rows(&traj))?;
    println!("events: {}", traj.events.len());
    println!("wall time: {wall:.6} s");
    Ok(())
}

fn model_label(m: &Model) -> (String, String) {
    match m {
        Model::Hybrid => ("hybrid".into(), String::new()),
        Model::Tanh { k } => ("tanh".into(), k.to_string()),
    }
}

pub fn bench_table_csv(t: &BenchTable) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["model", "k", "wall_time_s", "rmse", "error"]).expect("in-memory writer");
    for r in &t.rows {
        let (m, k) = model_label(&r.model);
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        w.write_record([m, k, opt(r.wall_time), opt(r.rmse), r.error.clone().unwrap_or_default()])
            .expect("in-memory writer");
    }
    w.into_inner().expect("in-memory writer")
}

pub fn bench(a: &BenchmarkArgs) -> Result<()> {
    let sc = match (&a.scenario, a.case) {
        (Some(p), _) => ScenarioFile::load(p)?,
        (None, Some(2)) => ScenarioFile::parse(fixtures::CASE2)?,
        (None, _) => ScenarioFile::parse(fixtures::CASE1)?,
    };
    if a.ks.iter().any(|k| !(*k > 0.0) || !k.is_finite()) {
        return Err(CliError::Input("every k must be positive".into()));
    }
    if a.repeats <= 1 {
        log::warn!("a single timed repeat gives noisy wall times");
        eprintln!("warning: a single timed repeat gives noisy wall times");
    }
    let table = benchmark(&sc.into_scenario(), &a.ks, a.repeats);
    println!("{:<8} {:>10} {:>14} {:>14}", "model", "k", "time [s]", "rmse");
    for r in &table.rows {
        let (m, k) = model_label(&r.model);
        match &r.error {
            Some(e) => println!("{m:<8} {k:>10} failed: {e}"),
            None => println!(
                "{m:<8} {k:>10} {:>14.6e} {:>14.6e}",
                r.wall_time.unwrap_or(f64::NAN),
                r.rmse.unwrap_or(f64::NAN)
            ),
        }
    }
    if let Some(out) = &a.out {
        write_atomic(out, &bench_table_csv(&table))?;
    }
    if table.rows.iter().all(|r| r.error.is_some()) {
        return Err(CliError::Simulation("every benchmark run failed".into()));
    }
    Ok(())
}

pub fn steps_of(args: &[StepArg]) -> Vec<Step> {
    let mut steps: Vec<Step> = Vec::new();
    for s in args {
        let add: &[Step] = match s {
            StepArg::Rope => &[Step::Rope],
            StepArg::Axes => &[Step::Axes],
            StepArg::Swing => &[Step::Swing],
            StepArg::All => &Step::ALL,
        };
        for st in add {
            if !steps.contains(st) {
                steps.push(*st);
            }
        }
    }
    steps.sort();
    steps
}

fn diagnostics_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "params".into());
    out.with_file_name(format!("{stem}.diagnostics.json"))
}

pub fn estimate(a: &EstimateArgs) -> Result<Estimates> {
    let base = match &a.base {
        Some(p) => load_params(p)?,
        None => fixtures::table3(),
    };
    let cfg: PipelineConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => PipelineConfig::default(),
    };
    let records: Vec<_> = read_dataset(&a.data)?.into_iter().map(|(_, r)| r).collect();
    let steps = steps_of(&a.steps);
    let est = run_pipeline(&records, &base, &steps, &cfg)?;
    let params = est.apply(&base);
    params
        .validate()
        .map_err(|e| CliError::Estimation(format!("estimated parameters are not physical: {e}")))?;
    let doc = EstimatedParams {
        complete: est.complete(),
        estimated_steps: steps,
        params,
    };
    let diag = a.diagnostics.clone().unwrap_or_else(|| diagnostics_path(&a.out));
    write_json(&diag, &est)?;
    write_json(&a.out, &doc)?;
    if let Some(r) = &est.rope {
        println!("rope: P1 {:.6} P2 {:.6} P3 {:.6} P4 {:.6}", r.p1, r.p2, r.p3, r.p4);
    }
    for e in [&est.x, &est.y].into_iter().flatten() {
        println!(
            "{}: inertia {:.6} P7+ {:.6} P7- {:.6} (max |corr| {:.4})",
            e.axis,
            e.inertia_coeff,
            e.p7_pos,
            e.p7_neg,
            e.ls.max_off_diagonal()
        );
    }
    if let Some(s) = &est.swing {
        println!("swing: D_alpha {:.6e} D_beta {:?}", s.damping_alpha, s.damping_beta);
    }
    if !doc.complete {
        println!("incomplete: steps not run keep the base values");
    }
    Ok(est)
}

pub fn synth(a: &SynthArgs) -> Result<()> {
    let mut spec: SuiteSpec = match &a.spec {
        Some(p) => read_json(p)?,
        None => SuiteSpec::default(),
    };
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let params = match &a.params {
        Some(p) => load_params(p)?,
        None => fixtures::table3(),
    };
    let suite = generate_suite(&spec, &params)?;
    write_suite(&a.out, &suite, spec.seed)?;
    println!(
        "{} records written to {} (active sampling: {} points, {:?})",
        suite.records.len(),
        a.out.display(),
        suite.active_points,
        suite.active_stop
    );
    Ok(())
}

/// Position-like columns processed by default.
pub const POSITION_COLUMNS: [&str; 5] = ["x_t", "y_t", "L", "alpha", "beta"];

pub fn filter_table(table: &Table, spec: &FilterSpec, columns: &[String], mask_window: f64) -> Result<Table> {
    let (t0, dt) = table.sample_period("input")?;
    let mut out = table.clone();
    for name in columns {
        let values = table.require(name, "input")?.to_vec();
        let sig = sigproc::SampledSignal::new(t0, dt, values).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        let filt = butter_filtfilt(&sig, spec).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        let vel = central_diff_velocity(&filt);
        let acc = central_diff_accel(&filt);
        let mask = mask_zero_crossings(&vel, mask_window);
        let mask: Vec<f64> = mask
            .iter()
            .zip(&acc.values)
            .map(|(&m, a)| if m && a.is_finite() { 1.0 } else { 0.0 })
            .collect();
        for (suffix, col) in [("filt", filt.values), ("vel", vel.values), ("acc", acc.values), ("mask", mask)] {
            out.header.push(format!("{name}_{suffix}"));
            out.columns.push(col);
        }
    }
    Ok(out)
}

pub fn filter(a: &FilterArgs) -> Result<()> {
    let table = Table::read(&a.input)?;
    let columns: Vec<String> = match &a.columns {
        Some(c) => c.clone(),
        None => POSITION_COLUMNS
            .iter()
            .filter(|c| table.column(c).is_some())
            .map(|c| c.to_string())
            .collect(),
    };
    if columns.is_empty() {
        return Err(CliError::Input(format!("{}: no position column to filter", a.input.display())));
    }
    let spec = FilterSpec {
        order: a.order,
        cutoff_hz: a.cutoff,
    };
    let out = filter_table(&table, &spec, &columns, a.mask_window)?;
    write_atomic(&a.out, &out.to_csv())?;
    println!("filtered {} column(s), {} rows", columns.len(), out.rows());
    Ok(())
}
