use crane_cli::commands::{filter_table, POSITION_COLUMNS};
use crane_cli::csvio::{parse_record, read_trajectory, record_csv, trajectory_csv, trajectory_rows, RecordMeta, Table};
use crane_cli::io::{fmt_f64, parse_f64};
use crane_cli::schema::{fixtures, parse_params, ScenarioFile};
use crane_cli::CliError;
use estimation::EstError;
use hybrid_sim::{case1, case2, integrate};
use proptest::prelude::*;
use sigproc::FilterSpec;

#[test]
fn bundled_cases_are_the_library_cases() {
    for (text, sc) in [(fixtures::CASE1, case1()), (fixtures::CASE2, case2())] {
        let file = ScenarioFile::parse(text).unwrap();
        // golden file: byte-identical after a round trip
        assert_eq!(file.to_json(), text);
        assert_eq!(file.into_scenario(), sc);
    }
    assert_eq!(fixtures::table3(), crane_core::presets::table3());
}

#[test]
fn scenario_rejects_unknown_keys_and_bad_values() {
    let mut v: serde_json::Value = serde_json::from_str(fixtures::CASE1).unwrap();
    v["colour"] = "red".into();
    assert!(matches!(ScenarioFile::parse(&v.to_string()), Err(CliError::Input(_))));

    let mut v: serde_json::Value = serde_json::from_str(fixtures::CASE1).unwrap();
    v["sim"]["t_end"] = (-1.0).into();
    let e = ScenarioFile::parse(&v.to_string()).unwrap_err();
    assert_eq!(e.exit_code(), 1);

    let mut v: serde_json::Value = serde_json::from_str(fixtures::CASE1).unwrap();
    v["params"]["trolley_mass"] = (-1.0).into();
    assert!(ScenarioFile::parse(&v.to_string()).is_err());
}

#[test]
fn params_accept_the_estimate_wrapper() {
    let p = fixtures::table3();
    let wrapped = serde_json::json!({"complete": false, "estimated_steps": ["rope"], "params": p});
    assert_eq!(parse_params(&wrapped.to_string()).unwrap(), p);
    assert!(parse_params("{\"params\": 3}").is_err());
}

#[test]
fn floats_survive_text() {
    for v in [0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
        let s = fmt_f64(v);
        let back = parse_f64(&s).unwrap();
        assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s}");
    }
    assert!(parse_f64("abc").is_none());
}

proptest! {
    #[test]
    fn any_finite_float_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(parse_f64(&fmt_f64(v)).unwrap().to_bits(), v.to_bits());
    }
}

#[test]
fn trajectory_csv_is_lossless() {
    let sc = case1();
    let traj = integrate(&sc.initial, &sc.input, &sc.params, &sc.config).unwrap();
    let rows = trajectory_rows(&traj);
    assert!(rows.windows(2).all(|w| w[0].t < w[1].t));
    let bytes = trajectory_csv(&rows);
    let back = read_trajectory(&bytes).unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!(a.t.to_bits(), b.t.to_bits());
        assert_eq!(a.state.to_array().map(f64::to_bits), b.state.to_array().map(f64::to_bits));
        assert_eq!(a.mode, b.mode);
        assert_eq!(a.input, b.input);
    }
    // a second pass changes nothing
    assert_eq!(trajectory_csv(&back), bytes);
}

#[test]
fn trajectory_reader_rejects_damage() {
    let sc = case1();
    let mut cfg = sc.config.clone();
    cfg.t_end = 0.05;
    let traj = integrate(&sc.initial, &sc.input, &sc.params, &cfg).unwrap();
    let text = String::from_utf8(trajectory_csv(&trajectory_rows(&traj))).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();

    let bad_header = text.replacen("dx_t", "vx", 1);
    assert!(read_trajectory(bad_header.as_bytes()).is_err());

    let bad_mode: String = text.lines().enumerate().map(|(i, l)| {
        if i == 3 {
            let mut f: Vec<&str> = l.split(',').collect();
            f[11] = "7";
            f.join(",") + "\n"
        } else {
            format!("{l}\n")
        }
    }).collect();
    assert!(read_trajectory(bad_mode.as_bytes()).is_err());

    lines.swap(2, 3);
    assert!(read_trajectory(lines.join("\n").as_bytes()).is_err());
    assert!(read_trajectory(b"t,x\n1,2\n").is_err());
}

#[test]
fn records_round_trip() {
    let spec = synth_lab::ExperimentSpec {
        experiment: synth_lab::Experiment::FreeSwing { alpha0: 1.8, beta0: 0.1, length: 0.45 },
        payload_mass: 0.457,
        duration: 1.0,
        seed: 4,
    };
    let p = fixtures::table3();
    let rec = synth_lab::run_experiment(&spec, &p, &synth_lab::LabConfig::default()).unwrap();
    let meta = RecordMeta {
        file: "swing.csv".into(),
        name: "swing".into(),
        kind: rec.kind,
        axis: rec.axis,
        direction: rec.direction,
        payload_mass: rec.payload_mass,
        quanta: rec.quanta,
        dt: Some(rec.dt),
        spec: Some(spec),
    };
    let back = parse_record(&record_csv(&rec), &meta).unwrap();
    assert_eq!(back, rec);

    let wrong = RecordMeta { dt: Some(2.0 * rec.dt), ..meta };
    assert!(matches!(parse_record(&record_csv(&rec), &wrong), Err(CliError::Input(_))));
}

fn sine_table(dt: f64, n: usize, f: f64) -> Table {
    let t: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
    let x: Vec<f64> = t.iter().map(|t| (2.0 * std::f64::consts::PI * f * t).sin()).collect();
    Table {
        header: vec!["t".into(), "x_t".into()],
        columns: vec![t, x],
    }
}

#[test]
fn filter_recovers_a_smooth_velocity() {
    let (dt, f) = (0.002, 0.5);
    let table = sine_table(dt, 5001, f);
    let spec = FilterSpec { order: 4, cutoff_hz: 3.0 };
    let out = filter_table(&table, &spec, &["x_t".to_string()], 0.15).unwrap();
    assert_eq!(out.header[2..], ["x_t_filt", "x_t_vel", "x_t_acc", "x_t_mask"]);
    let w = 2.0 * std::f64::consts::PI * f;
    let t = out.column("t").unwrap();
    let vel = out.column("x_t_vel").unwrap();
    let mask = out.column("x_t_mask").unwrap();
    let mut checked = 0;
    for k in 0..t.len() {
        if t[k] < 2.0 || t[k] > 8.0 {
            continue;
        }
        let exact = w * (w * t[k]).cos();
        assert!((vel[k] - exact).abs() < 3e-3, "t {} vel {} exact {}", t[k], vel[k], exact);
        checked += 1;
        // velocity reverses at t = k + 1/2
        let s = t[k] - 0.5;
        let off = (s - s.round()).abs();
        if off < 0.14 {
            assert_eq!(mask[k], 0.0, "t {}", t[k]);
        } else if off > 0.16 {
            assert_eq!(mask[k], 1.0, "t {}", t[k]);
        }
    }
    assert!(checked > 2000);
    // the reparsed table is identical
    let back = Table::parse(&out.to_csv(), "out").unwrap();
    assert_eq!(back.header, out.header);
    let bits = |t: &Table| -> Vec<Vec<u64>> { t.columns.iter().map(|c| c.iter().map(|v| v.to_bits()).collect()).collect() };
    assert_eq!(bits(&back), bits(&out));
}

#[test]
fn filter_rejects_cutoff_above_nyquist() {
    let table = sine_table(0.002, 1000, 0.5);
    let spec = FilterSpec { order: 4, cutoff_hz: 300.0 };
    let e = filter_table(&table, &spec, &["x_t".to_string()], 0.15).unwrap_err();
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn filter_rejects_uneven_time() {
    let mut table = sine_table(0.002, 1000, 0.5);
    table.columns[0][500] += 0.0005;
    let spec = FilterSpec { order: 4, cutoff_hz: 3.0 };
    assert!(filter_table(&table, &spec, &[POSITION_COLUMNS[0].to_string()], 0.15).is_err());
}

#[test]
fn error_kinds_map_to_exit_codes() {
    let ill = EstError::IllConditioned { cond: 1e14, a: "v".into(), b: "v3".into() };
    assert_eq!(CliError::from(ill).exit_code(), 4);
    assert_eq!(CliError::from(EstError::Missing("FREE_SWING".into())).exit_code(), 3);
    assert_eq!(CliError::from(EstError::NoMotion("x".into())).exit_code(), 2);
    assert_eq!(CliError::Output { path: "a".into(), msg: "b".into() }.exit_code(), 1);
}
