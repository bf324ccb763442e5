use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, ZenoError};
use crate::zeno::ZenoRunConfig;

/// One experiment: a Zeno run plus naming and output placement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(flatten)]
    pub run: ZenoRunConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| ZenoError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ZenoError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| ZenoError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(ZenoError::Config("name must be nonempty".into()));
        }
        if self.name.contains(['/', '\\']) || self.name == "." || self.name == ".." {
            return Err(ZenoError::Config(format!("name {:?} is not a valid directory name", self.name)));
        }
        self.run.validate()
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))[..16].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
name = "demo"
total_time = 1.0
n_grid = [4, 8, 16]
seed = 7

[channel]
channel = "depolarizing"
p = 0.5

[generator]
generator = "oscillator"
omega = 2.0

[truncation]
dim = 4

[initial_state]
kind = "fock"
n = 0
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.run.seed, 7);
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::from_toml(SAMPLE).unwrap();
        let mut b = a.clone();
        b.run.seed = 8;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn unknown_channel_lists_catalog() {
        let text = SAMPLE.replace("\"depolarizing\"", "\"teleporter\"");
        let err = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("attenuator"), "{err}");
        assert!(err.is_validation());
    }

    #[test]
    fn empty_name_is_rejected() {
        let text = SAMPLE.replace("name = \"demo\"", "name = \"\"");
        assert!(ExperimentConfig::from_toml(&text).is_err());
    }
}
