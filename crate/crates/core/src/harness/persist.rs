use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::error::{Result, ZenoError};
use crate::zeno::{zeno_error_curve, DecayClass, ZenoErrorCurve};

pub const RUNS_DIR_ENV: &str = "ZENO_RUNS_DIR";
pub const DEFAULT_RUNS_DIR: &str = "runs";
pub const RESULTS_FILE: &str = "results.csv";
pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileEntry {
    fn of(path: &Path, label: String) -> Result<Self> {
        let data = fs::read(path)?;
        Ok(Self {
            path: label,
            bytes: data.len() as u64,
            sha256: hex::encode(Sha256::digest(&data)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Headline {
    pub samples: usize,
    pub fitted_slope: Option<f64>,
    pub slope_half_width: Option<f64>,
    pub fit_window: Option<(usize, usize)>,
    pub decay: DecayClass,
    pub max_error: f64,
    pub final_error: f64,
    pub max_trace_drift: f64,
}

impl Headline {
    fn of(curve: &ZenoErrorCurve) -> Self {
        let fit = curve.fit.fit.as_ref();
        Self {
            samples: curve.samples.len(),
            fitted_slope: fit.map(|f| f.slope),
            slope_half_width: fit.map(|f| f.half_width),
            fit_window: fit.map(|f| f.window),
            decay: curve.fit.decay,
            max_error: curve.samples.iter().map(|s| s.1).fold(0.0, f64::max),
            final_error: curve.samples.last().map_or(0.0, |s| s.1),
            max_trace_drift: curve.diagnostics.max_trace_drift,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub started_at: String,
    pub finished_at: String,
    pub inputs: Vec<FileEntry>,
    pub outputs: Vec<FileEntry>,
    pub headline: Headline,
}

impl RunManifest {
    /// Every listed output exists with its recorded size.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for f in &self.outputs {
            let meta = fs::metadata(dir.join(&f.path)).map_err(|e| ZenoError::Io(format!("{}: {e}", f.path)))?;
            if meta.len() != f.bytes {
                return Err(ZenoError::Io(format!("{} has {} bytes, manifest records {}", f.path, meta.len(), f.bytes)));
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Report<'a> {
    name: &'a str,
    config_hash: &'a str,
    config: &'a ExperimentConfig,
    curve: &'a ZenoErrorCurve,
}

#[derive(Serialize)]
struct Row {
    n: usize,
    error: f64,
}

/// Writes through a temporary sibling and renames into place.
pub fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(data)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn results_csv(samples: &[(usize, f64)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for &(n, error) in samples {
        w.serialize(Row { n, error }).map_err(|e| ZenoError::Io(e.to_string()))?;
    }
    let mut bytes = w.into_inner().map_err(|e| ZenoError::Io(e.to_string()))?;
    if samples.is_empty() {
        bytes.extend_from_slice(b"n,error\n");
    }
    Ok(bytes)
}

/// `ZENO_RUNS_DIR`, else the configured directory, else `runs`.
pub fn runs_root(configured: Option<&Path>) -> PathBuf {
    match std::env::var_os(RUNS_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => configured.map_or_else(|| PathBuf::from(DEFAULT_RUNS_DIR), Path::to_path_buf),
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub curve: ZenoErrorCurve,
    pub manifest: RunManifest,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Runs the experiment and writes results.csv, report.json and manifest.json.
pub fn run_experiment(cfg: &ExperimentConfig, config_path: Option<&Path>, root: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let started_at = now();
    let hash = cfg.hash();
    let curve = zeno_error_curve(&cfg.run)?;
    let dir = root.join(&cfg.name).join(&hash);
    fs::create_dir_all(&dir)?;

    write_atomic(&dir.join(RESULTS_FILE), &results_csv(&curve.samples)?)?;
    let report = Report { name: &cfg.name, config_hash: &hash, config: cfg, curve: &curve };
    let mut json = serde_json::to_vec_pretty(&report).map_err(|e| ZenoError::Io(e.to_string()))?;
    json.push(b'\n');
    write_atomic(&dir.join(REPORT_FILE), &json)?;

    let inputs = match config_path {
        Some(p) => vec![FileEntry::of(p, p.display().to_string())?],
        None => Vec::new(),
    };
    let outputs = [RESULTS_FILE, REPORT_FILE]
        .iter()
        .map(|f| FileEntry::of(&dir.join(f), f.to_string()))
        .collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest {
        name: cfg.name.clone(),
        config_hash: hash,
        tool_version: TOOL_VERSION.to_string(),
        seed: cfg.run.seed,
        started_at,
        finished_at: now(),
        inputs,
        outputs,
        headline: Headline::of(&curve),
    };
    let mut mj = serde_json::to_vec_pretty(&manifest).map_err(|e| ZenoError::Io(e.to_string()))?;
    mj.push(b'\n');
    write_atomic(&dir.join(MANIFEST_FILE), &mj)?;
    manifest.verify(&dir)?;
    Ok(RunOutcome { dir, curve, manifest })
}

/// 0 on success, 1 for invalid input, 2 for numerical failure.
pub fn exit_code(err: &ZenoError) -> i32 {
    match err {
        e if e.is_validation() => 1,
        ZenoError::NotAdmissible(_) | ZenoError::NoGap(_) => 1,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n_grid: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(&format!(
            r#"
name = "unit"
total_time = 1.0
n_grid = {n_grid}
[channel]
channel = "depolarizing"
p = 0.5
[generator]
generator = "oscillator"
omega = 2.0
[truncation]
dim = 3
[initial_state]
kind = "fock"
n = 0
"#
        ))
        .unwrap()
    }

    #[test]
    fn writes_layout_and_is_deterministic() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = config("[4, 8, 16, 32, 64]");
        let a = run_experiment(&cfg, None, tmp.path()).unwrap();
        assert!(a.dir.ends_with(format!("unit/{}", cfg.hash())));
        let csv1 = fs::read(a.dir.join(RESULTS_FILE)).unwrap();
        assert!(csv1.starts_with(b"n,error\n"));
        let rep1 = fs::read(a.dir.join(REPORT_FILE)).unwrap();
        let b = run_experiment(&cfg, None, tmp.path()).unwrap();
        assert_eq!(csv1, fs::read(b.dir.join(RESULTS_FILE)).unwrap());
        assert_eq!(rep1, fs::read(b.dir.join(REPORT_FILE)).unwrap());
        let m: RunManifest = serde_json::from_slice(&fs::read(b.dir.join(MANIFEST_FILE)).unwrap()).unwrap();
        m.verify(&b.dir).unwrap();
        assert_eq!(m.outputs.len(), 2);
    }

    #[test]
    fn single_sample_has_no_fit() {
        let tmp = tempfile::tempdir().unwrap();
        let out = run_experiment(&config("[1]"), None, tmp.path()).unwrap();
        let text = fs::read_to_string(out.dir.join(RESULTS_FILE)).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(out.manifest.headline.fitted_slope.is_none());
    }

    #[test]
    fn tampered_output_fails_verification() {
        let tmp = tempfile::tempdir().unwrap();
        let out = run_experiment(&config("[2, 4]"), None, tmp.path()).unwrap();
        fs::write(out.dir.join(RESULTS_FILE), "n,error\n").unwrap();
        assert!(out.manifest.verify(&out.dir).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&ZenoError::State("x".into())), 1);
        assert_eq!(exit_code(&ZenoError::NoConvergence { algorithm: "qr", iterations: 1, residual: 1.0 }), 2);
    }
}
