use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::persist::write_atomic;
use crate::channels::{ChannelSpec, OperatorKind, TruncationSpec};
use crate::error::{Result, ZenoError};
use crate::spectral::{peripheral_analysis_with, PeripheralOptions, PeripheralReport};

/// Fock cutoff used when a descriptor gives none.
pub const DEFAULT_DIM: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDescriptor {
    #[serde(flatten)]
    pub channel: ChannelSpec,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leakage_tol: Option<f64>,
}

fn default_dim() -> usize {
    DEFAULT_DIM
}

impl ChannelDescriptor {
    pub fn truncation(&self) -> Result<TruncationSpec> {
        match self.leakage_tol {
            Some(t) => TruncationSpec::with_leakage(self.dim, t),
            None => TruncationSpec::new(self.dim),
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

/// `name:key=val,...` or a path to a TOML file.
pub fn parse_descriptor(input: &str) -> Result<ChannelDescriptor> {
    let path = Path::new(input);
    let table: toml::Table = if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| ZenoError::Config(e.to_string()))?
    } else {
        let (name, rest) = input.split_once(':').unwrap_or((input, ""));
        let mut t = toml::Table::new();
        t.insert("channel".into(), toml::Value::String(name.trim().to_string()));
        for pair in split_top_level(rest) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| ZenoError::Config(format!("expected key=value, got {pair:?}")))?;
            let parsed: toml::Table = toml::from_str(&format!("v = {}", v.trim()))
                .unwrap_or_else(|_| toml::Table::from_iter([("v".to_string(), toml::Value::String(v.trim().into()))]));
            t.insert(k.trim().to_string(), parsed["v"].clone());
        }
        t
    };
    let d: ChannelDescriptor = table.try_into().map_err(|e: toml::de::Error| ZenoError::Config(e.to_string()))?;
    d.truncation()?;
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyDocument {
    pub descriptor: ChannelDescriptor,
    pub kind: OperatorKind,
    /// Operators act on dim×dim matrices; `None` for plain contractions.
    pub dim: Option<usize>,
    pub size: usize,
    pub admissible: bool,
    pub truncation_caveat: bool,
    pub no_gap: Option<String>,
    pub warnings: Vec<String>,
    pub report: Option<PeripheralReport>,
}

pub fn classify(descriptor: &ChannelDescriptor) -> Result<ClassifyDocument> {
    let built = descriptor.channel.build(&descriptor.truncation()?)?;
    let opts = PeripheralOptions { truncated: built.truncated, ..Default::default() };
    let mut warnings = built.warnings.clone();
    let (report, no_gap) = match peripheral_analysis_with(&built.matrix, built.dim, &opts) {
        Ok(r) => (Some(r), None),
        Err(ZenoError::NoGap(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    if let Some(r) = &report {
        warnings.extend(r.warnings.iter().cloned());
    }
    Ok(ClassifyDocument {
        descriptor: descriptor.clone(),
        kind: built.kind,
        dim: built.dim,
        size: built.matrix.rows(),
        admissible: report.as_ref().is_some_and(|r| r.admissible),
        truncation_caveat: built.truncated,
        no_gap,
        warnings,
        report,
    })
}

/// Writes `<root>/classify/<channel>-<hash>.json`.
pub fn write_classify(doc: &ClassifyDocument, root: &Path) -> Result<PathBuf> {
    let key = serde_json::to_vec(&doc.descriptor).map_err(|e| ZenoError::Io(e.to_string()))?;
    let hash = &hex::encode(Sha256::digest(&key))[..16];
    let path = root.join("classify").join(format!("{}-{hash}.json", doc.descriptor.channel.name()));
    let mut json = serde_json::to_vec_pretty(doc).map_err(|e| ZenoError::Io(e.to_string()))?;
    json.push(b'\n');
    write_atomic(&path, &json)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_form_parses() {
        let d = parse_descriptor("attenuator:t=0.3,dim=8").unwrap();
        assert_eq!(d.channel, ChannelSpec::Attenuator { t: 0.3 });
        assert_eq!(d.dim, 8);
        let d = parse_descriptor("level_projection:levels=[0, 2],dim=4").unwrap();
        assert_eq!(d.channel, ChannelSpec::LevelProjection { levels: vec![0, 2] });
    }

    #[test]
    fn depolarizing_is_admissible() {
        let doc = classify(&parse_descriptor("depolarizing:p=0.5,dim=3").unwrap()).unwrap();
        assert!(doc.admissible);
        let r = doc.report.unwrap();
        assert_eq!(r.peripheral.len(), 1);
        assert!((r.gap_delta - 0.5).abs() < 1e-10);
    }

    #[test]
    fn volterra_is_not_admissible() {
        let doc = classify(&parse_descriptor("volterra:grid_points=64").unwrap()).unwrap();
        assert!(!doc.admissible);
        assert_eq!(doc.kind, OperatorKind::Contraction);
        assert!(doc.report.unwrap().max_nilpotent_norm() > 0.3);
    }

    #[test]
    fn attenuator_carries_truncation_caveat() {
        let doc = classify(&parse_descriptor("attenuator:t=0.3,dim=6").unwrap()).unwrap();
        assert!(doc.truncation_caveat);
        assert!(doc.report.unwrap().eigenvalues().iter().any(|z| (z - 1.0).norm() < 1e-9));
    }

    #[test]
    fn unknown_channel_is_config_error() {
        let err = parse_descriptor("teleporter:x=1").unwrap_err();
        assert!(err.to_string().contains("depolarizing"), "{err}");
    }

    #[test]
    fn toml_file_descriptor() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "channel = \"oscillator_conjugation\"\nk = 3\ndim = 5\n").unwrap();
        let d = parse_descriptor(p.to_str().unwrap()).unwrap();
        assert_eq!(d.dim, 5);
        let doc = classify(&d).unwrap();
        assert_eq!(doc.report.unwrap().peripheral.len(), 3);
    }
}
