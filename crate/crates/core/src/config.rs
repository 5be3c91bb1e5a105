//! Run configuration, echoed next to every output artifact.

use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bridge::LoopLimits;
use crate::model::Mode;
use crate::proofs::{Dialect, DEFAULT_PROOF_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    Symbolic {
        /// Shuffles the order of one-step inferences when set.
        seed: Option<u64>,
    },
    Remote {
        url: String,
        timeout_secs: u64,
        retries: usize,
    },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Symbolic { seed: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub mode: Mode,
    pub dialect: Dialect,
    pub proof_cap: usize,
    pub seed: u64,
    pub depth: Option<u32>,
    pub jobs: Option<usize>,
    pub limits: LoopLimits,
    pub backend: Backend,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: impl Into<String>) -> Self {
        RunConfig {
            command: command.into(),
            mode: Mode::Cwa,
            dialect: Dialect::default(),
            proof_cap: DEFAULT_PROOF_CAP,
            seed: 0,
            depth: None,
            jobs: None,
            limits: LoopLimits::default(),
            backend: Backend::default(),
            inputs: Vec::new(),
            output: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Write `<output>.config.json` beside `output`. Returns its path.
    pub fn write_echo(&self, output: &Path) -> io::Result<PathBuf> {
        let path = echo_path(output);
        std::fs::write(&path, self.to_json() + "\n")?;
        Ok(path)
    }
}

pub fn echo_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let mut c = RunConfig::new("gen");
        c.backend = Backend::Remote {
            url: "http://localhost:8000".into(),
            timeout_secs: 30,
            retries: 2,
        };
        c.output = Some("out.jsonl".into());
        let back: RunConfig = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(echo_path(Path::new("a/out.jsonl")), PathBuf::from("a/out.jsonl.config.json"));
    }
}
