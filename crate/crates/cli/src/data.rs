//! Measurement data directories: one CSV per record plus `manifest.json`.

use std::fs;
use std::path::Path;

use estimation::{MeasurementRecord, StopReason};
use serde::{Deserialize, Serialize};
use synth_lab::Suite;

use crate::csvio::{parse_record, record_csv, RecordMeta};
use crate::error::{CliError, Result};
use crate::io::{read_json, to_json};

pub const MANIFEST: &str = "manifest.json";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Why active sampling of the friction maps stopped, when it ran.
    #[serde(default)]
    pub active_stop: Option<StopReason>,
    pub records: Vec<RecordMeta>,
}

fn meta_of(name: &str, r: &MeasurementRecord, spec: Option<synth_lab::ExperimentSpec>) -> RecordMeta {
    RecordMeta {
        file: format!("{name}.csv"),
        name: name.to_string(),
        kind: r.kind,
        axis: r.axis,
        direction: r.direction,
        payload_mass: r.payload_mass,
        quanta: r.quanta,
        dt: Some(r.dt),
        spec,
    }
}

/// Write a generated suite into `dir`, which must not exist or be empty. The
/// files are assembled in a sibling temporary directory and moved into place
/// at the end.
pub fn write_suite(dir: &Path, suite: &Suite, seed: u64) -> Result<()> {
    let out_err = |e: &dyn std::fmt::Display| CliError::Output {
        path: dir.display().to_string(),
        msg: e.to_string(),
    };
    if dir.exists() {
        let empty = dir.is_dir() && fs::read_dir(dir).map_err(|e| out_err(&e))?.next().is_none();
        if !empty {
            return Err(out_err(&"output directory exists and is not empty"));
        }
    }
    let parent = match dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(parent).map_err(|e| out_err(&e))?;
    let tmp = tempfile::Builder::new().prefix(".crane3d-synth").tempdir_in(parent).map_err(|e| out_err(&e))?;
    let mut metas = Vec::with_capacity(suite.records.len());
    for nr in &suite.records {
        let meta = meta_of(&nr.name, &nr.record, nr.spec.clone());
        fs::write(tmp.path().join(&meta.file), record_csv(&nr.record)).map_err(|e| out_err(&e))?;
        metas.push(meta);
    }
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        seed: Some(seed),
        active_stop: Some(suite.active_stop),
        records: metas,
    };
    fs::write(tmp.path().join(MANIFEST), to_json(&manifest)).map_err(|e| out_err(&e))?;
    if dir.exists() {
        fs::remove_dir(dir).map_err(|e| out_err(&e))?;
    }
    let path = tmp.keep();
    fs::rename(&path, dir).map_err(|e| {
        let _ = fs::remove_dir_all(&path);
        out_err(&e)
    })?;
    Ok(())
}

/// Read every record listed in `dir/manifest.json`.
pub fn read_dataset(dir: &Path) -> Result<Vec<(RecordMeta, MeasurementRecord)>> {
    let manifest: Manifest = read_json(&dir.join(MANIFEST))?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(CliError::Input(format!(
            "unsupported manifest format {} (expected {FORMAT_VERSION})",
            manifest.format_version
        )));
    }
    let mut out = Vec::with_capacity(manifest.records.len());
    for meta in manifest.records {
        let path = dir.join(&meta.file);
        let bytes = fs::read(&path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let rec = parse_record(&bytes, &meta)?;
        out.push((meta, rec));
    }
    Ok(out)
}
