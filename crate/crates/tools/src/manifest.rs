//! Run manifests: what was run, on which inputs, with which settings, and
//! digests of what came out.

use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digest256 {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub threads: usize,
    pub seed: Option<u64>,
    pub inputs: Vec<Digest256>,
    pub outputs: Vec<Digest256>,
    pub started_unix: u64,
    pub wall_time_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Manifest {
    pub fn start(command: Vec<String>, threads: usize) -> Manifest {
        Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            threads,
            started_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            ..Manifest::default()
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push(Digest256 {
            name: name.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push(Digest256 {
            name: name.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn finish(&mut self, elapsed: Duration) {
        self.wall_time_ms = elapsed.as_millis();
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

/// `<out>.manifest.json` next to an output file.
pub fn sibling(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digests_and_paths() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            sibling(Path::new("out/q.json")),
            PathBuf::from("out/q.json.manifest.json")
        );
        let dir = tempfile::tempdir().unwrap();
        let mut m = Manifest::start(vec!["orient".into()], 1);
        m.input("gamma3", b"x");
        m.finish(Duration::from_millis(5));
        let p = dir.path().join("sub/m.json");
        m.write(&p).unwrap();
        let back: Manifest = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
