use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EnumerateError, HaltedSet, DIGEST_ALGORITHM};
use crate::bits::{BitString, DyadicRational};
use crate::machine::{HaltingModel, Machine};

pub const CHECKPOINT_FORMAT: u32 = 1;

/// Progress of a staged run after its last completed stage.
///
/// Serialized as one JSON object:
///
/// ```json
/// {"format":1,"digest_algorithm":"sha256-lenlex-lines-v1",
///  "machine_digest":"sha256:…","last_stage":6,
///  "halted":["0001","000001","000011"],"omega_lower":"3/2^5",
///  "state_digest":"sha256:…"}
/// ```
///
/// `state_digest` is SHA-256 over the halted programs in length-lex order,
/// each written as ASCII `0`/`1` followed by `\n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format: u32,
    pub digest_algorithm: String,
    pub machine_digest: String,
    pub last_stage: usize,
    pub halted: Vec<BitString>,
    pub omega_lower: DyadicRational,
    pub state_digest: String,
}

impl Checkpoint {
    pub(super) fn capture(machine: &Machine, last_stage: usize, halted: &HaltedSet) -> Self {
        Self {
            format: CHECKPOINT_FORMAT,
            digest_algorithm: DIGEST_ALGORITHM.to_string(),
            machine_digest: machine.digest(),
            last_stage,
            halted: halted.iter().cloned().collect(),
            omega_lower: halted.omega().clone(),
            state_digest: halted.digest(),
        }
    }

    /// Rebuilds the halted set, checking every field against `machine`.
    pub(super) fn restore(&self, machine: &Machine) -> Result<HaltedSet, EnumerateError> {
        let bad = |why: String| Err(EnumerateError::BadCheckpoint(why));
        if self.format != CHECKPOINT_FORMAT {
            return bad(format!("unsupported format {}", self.format));
        }
        if self.digest_algorithm != DIGEST_ALGORITHM {
            return bad(format!(
                "unknown digest algorithm {:?}",
                self.digest_algorithm
            ));
        }
        let expected = machine.digest();
        if self.machine_digest != expected {
            return Err(EnumerateError::DigestMismatch {
                checkpoint: self.machine_digest.clone(),
                machine: expected,
            });
        }
        if self.last_stage > machine.bound().get() {
            return bad(format!(
                "last stage {} exceeds the length bound {}",
                self.last_stage,
                machine.bound().get()
            ));
        }
        if !self.halted.windows(2).all(|w| w[0] < w[1]) {
            return bad("halted programs are not strictly length-lex sorted".into());
        }
        let mut set = HaltedSet::new();
        for p in &self.halted {
            if p.len() > self.last_stage || !machine.is_valid(p) {
                return bad(format!(
                    "{p} cannot have been discovered by stage {}",
                    self.last_stage
                ));
            }
            set.insert(p.clone());
        }
        if set.omega() != &self.omega_lower {
            return bad(format!(
                "omega_lower {} disagrees with the halted set ({})",
                self.omega_lower,
                set.omega()
            ));
        }
        if set.digest() != self.state_digest {
            return bad("state digest disagrees with the halted set".into());
        }
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoints always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, EnumerateError> {
        serde_json::from_str(text).map_err(|e| EnumerateError::BadCheckpoint(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EnumerateError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| EnumerateError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Writes to a sibling temporary file, then renames over `path`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), EnumerateError> {
        let path = path.as_ref();
        let io_err = |source| EnumerateError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        let mut file = fs::File::create(&tmp).map_err(io_err)?;
        file.write_all(self.to_json().as_bytes()).map_err(io_err)?;
        file.write_all(b"\n").map_err(io_err)?;
        file.sync_all().map_err(io_err)?;
        drop(file);
        fs::rename(&tmp, path).map_err(io_err)
    }
}
